#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dulab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "num/den" or "num" (optionally signed). Throws DomainError on a
// malformed string or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical "num/den" form; integers keep the "/1" suffix so the output is
// always re-parseable by parse_rational.
std::string to_string(const Rational& r);

// Exact rational value of a finite double.
Rational from_double(double v);

BigInt from_u64(std::uint64_t v);
std::uint64_t to_u64(const BigInt& v);

// r mod m in [0, m) for m > 0.
Rational mod_floor(const Rational& r, const BigInt& m);

// Distance from r to the nearest multiple of m, in [0, m/2].
Rational dist_mod(const Rational& r, const BigInt& m);

// r^e for e >= 0.
Rational pow(const Rational& r, unsigned e);
BigInt pow(const BigInt& b, unsigned e);

// Largest integer m >= 0 with m <= x^g, for x >= 1 and rational g >= 0.
std::uint64_t floor_rational_power(std::uint64_t x, const Rational& g);

}  // namespace dulab
