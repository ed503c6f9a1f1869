#include "dulab/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "dulab/error.hpp"

namespace dulab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw DomainError("malformed rational '" + std::string(whole) + "'");
  BigInt v(std::string(s), 10);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw DomainError("malformed rational '" + std::string(text) + "'");
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Plain decimal, read exactly: "0.125" -> 1/8.
  std::string_view mant = text;
  bool neg = false;
  if (mant.front() == '-' || mant.front() == '+') {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  std::size_t frac_len = 0;
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mant.substr(0, dot);
    std::string_view fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp))) {
      throw DomainError("malformed rational '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_len = fp.size();
  } else {
    if (!all_digits(mant)) throw DomainError("malformed rational '" + std::string(text) + "'");
    digits = std::string(mant);
  }
  BigInt num(digits, 10);
  BigInt den = pow(BigInt(10), static_cast<unsigned>(frac_len));
  Rational r(neg ? BigInt(-num) : num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value has no rational form");
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) throw DomainError("value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

Rational mod_floor(const Rational& r, const BigInt& m) {
  // floor(r / m) as an integer
  Rational q = r / Rational(m);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational out = r - Rational(fl * m);
  out.canonicalize();
  return out;
}

Rational dist_mod(const Rational& r, const BigInt& m) {
  Rational x = mod_floor(r, m);
  Rational other = Rational(m) - x;
  return x <= other ? x : other;
}

Rational pow(const Rational& r, unsigned e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

BigInt pow(const BigInt& b, unsigned e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

std::uint64_t floor_rational_power(std::uint64_t x, const Rational& g) {
  if (x == 0) throw DomainError("floor_rational_power: x must be >= 1");
  if (g < 0) throw DomainError("floor_rational_power: exponent must be >= 0");
  const BigInt& a = g.get_num();
  const BigInt& b = g.get_den();
  if (!a.fits_uint_p() || !b.fits_uint_p() || a > 1'000'000 || b > 1'000'000) {
    throw DomainError("floor_rational_power: exponent " + to_string(g) + " has too large a height");
  }
  const unsigned ea = static_cast<unsigned>(a.get_ui());
  const unsigned eb = static_cast<unsigned>(b.get_ui());
  const BigInt target = pow(from_u64(x), ea);  // compare m^b against x^a

  double est = std::pow(static_cast<double>(x), g.get_d());
  if (est >= 1.8e19) throw DomainError("floor_rational_power: result exceeds 64 bits");
  std::uint64_t m = static_cast<std::uint64_t>(std::floor(est));
  auto fits = [&](std::uint64_t cand) { return pow(from_u64(cand), eb) <= target; };
  while (m > 0 && !fits(m)) --m;
  while (fits(m + 1)) ++m;
  return m;
}

}  // namespace dulab
