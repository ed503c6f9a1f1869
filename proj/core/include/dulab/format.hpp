#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dulab {

// 17 significant digits, '.' decimal separator; round-trips every double.
std::string format_real(double v);

// Non-negative integer; accepts exact scientific notation such as "1e8" or
// "2.5e3". Throws DomainError naming `what` otherwise.
std::uint64_t parse_u64(std::string_view text, std::string_view what = "value");
std::int64_t parse_i64(std::string_view text, std::string_view what = "value");
double parse_real(std::string_view text, std::string_view what = "value");

}  // namespace dulab
