#include "dulab/format.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dulab/error.hpp"
#include "dulab/rational.hpp"

namespace dulab {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Rational parse_exact_decimal(std::string_view text, std::string_view what) {
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    std::string exp_text(text.substr(e + 1));
    char* end = nullptr;
    errno = 0;
    exp10 = std::strtol(exp_text.c_str(), &end, 10);
    if (exp_text.empty() || *end != '\0' || errno != 0 || exp10 > 40 || exp10 < -40) {
      throw DomainError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
  }
  Rational r;
  try {
    r = parse_rational(mant);
  } catch (const DomainError&) {
    throw DomainError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  if (mant.find('/') != std::string_view::npos && exp10 != 0) {
    throw DomainError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  Rational scale = pow(Rational(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  return exp10 < 0 ? Rational(r / scale) : Rational(r * scale);
}

}  // namespace

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  Rational r = parse_exact_decimal(text, what);
  if (r.get_den() != 1 || r < 0) {
    throw DomainError(std::string(what) + " must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return to_u64(r.get_num());
}

std::int64_t parse_i64(std::string_view text, std::string_view what) {
  Rational r = parse_exact_decimal(text, what);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) {
    throw DomainError(std::string(what) + " must be an integer, got '" + std::string(text) + "'");
  }
  return r.get_num().get_si();
}

double parse_real(std::string_view text, std::string_view what) {
  std::string s(text);
  if (s.find('/') != std::string::npos) {
    try {
      return parse_rational(s).get_d();
    } catch (const DomainError& e) {
      throw DomainError(std::string(what) + ": " + e.what());
    }
  }
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE) {
    throw DomainError("invalid " + std::string(what) + " '" + s + "'");
  }
  return v;
}

}  // namespace dulab
