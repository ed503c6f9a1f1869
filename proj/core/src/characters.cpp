#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <numeric>

#include <mpfr.h>

#include "dulab/expsum.hpp"

namespace dulab {

namespace {

using u64 = std::uint64_t;

bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// e(num/den), exact at quarter turns.
std::complex<double> root_of_unity(u64 num, u64 den) {
  num %= den;
  const u64 g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den == 1) return {1.0, 0.0};
  if (den == 2) return {-1.0, 0.0};
  if (den == 4) return num == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
  const double a = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(a), std::sin(a)};
}

}  // namespace

u64 least_primitive_root(u64 q) {
  if (!is_prime_trial(q)) throw DomainError("least_primitive_root: modulus must be prime");
  if (q == 2) return 1;
  const u64 phi = q - 1;
  std::vector<u64> factors;
  u64 m = phi;
  for (u64 d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (u64 g = 2; g < q; ++g) {
    bool ok = true;
    for (u64 f : factors) {
      if (powmod(g, phi / f, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InvariantViolation("least_primitive_root: none found");
}

CharacterSpec CharacterSpec::principal_mod(u64 q) {
  if (q < 1) throw DomainError("character: modulus must be >= 1");
  CharacterSpec chi;
  chi.q = q;
  chi.values.resize(q);
  for (u64 a = 0; a < q; ++a) chi.values[a] = std::gcd(a, q) == 1 ? 1.0 : 0.0;
  chi.principal = true;
  return chi;
}

CharacterSpec CharacterSpec::mod_prime(u64 q, u64 index) {
  if (!is_prime_trial(q)) throw DomainError("character: modulus " + std::to_string(q) + " is not prime");
  if (index >= q - 1) throw DomainError("character: index must be < q - 1");
  CharacterSpec chi;
  chi.q = q;
  chi.values.assign(q, {0.0, 0.0});
  const u64 g = least_primitive_root(q);
  u64 power = 1;
  for (u64 e = 0; e < q - 1; ++e) {
    chi.values[power] = root_of_unity(mulmod(index, e, q - 1), q - 1);
    power = mulmod(power, g, q);
  }
  chi.principal = index == 0;
  return chi;
}

CharacterSpec CharacterSpec::from_values(u64 q, std::vector<std::complex<double>> values) {
  constexpr double tol = 1e-9;
  if (q < 1) throw DomainError("character: modulus must be >= 1");
  if (values.size() != q) throw DomainError("character: expected " + std::to_string(q) + " values");
  bool principal = true;
  for (u64 a = 0; a < q; ++a) {
    const double mod = std::abs(values[a]);
    if (std::gcd(a, q) == 1) {
      if (std::fabs(mod - 1.0) > tol) throw DomainError("character: value at a unit is not unimodular");
      if (std::abs(values[a] - 1.0) > tol) principal = false;
    } else if (mod > tol) {
      throw DomainError("character: nonzero value at a non-unit residue " + std::to_string(a));
    }
  }
  for (u64 a = 0; a < q; ++a)
    for (u64 b = a; b < q; ++b)
      if (std::abs(values[mulmod(a, b, q)] - values[a] * values[b]) > tol)
        throw DomainError("character: not multiplicative at (" + std::to_string(a) + ", " + std::to_string(b) +
                          ")");
  CharacterSpec chi;
  chi.q = q;
  chi.values = std::move(values);
  chi.principal = principal;
  return chi;
}

double phase_t_log(double T, u64 n) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double ln = std::log(static_cast<double>(n));
  const double x = T * ln;
  if (std::fabs(x) < 1099511627776.0) return std::fmod(x, kTwoPi);

  static std::once_flag warned;
  std::call_once(warned, [] {
    std::cerr << "warning: |T| log n >= 2^40, using extended-precision phase reduction\n";
  });
  mpfr_t t, l, two_pi, r;
  mpfr_inits2(256, t, l, two_pi, r, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(t, T, MPFR_RNDN);
  mpfr_set_ui(l, static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_log(l, l, MPFR_RNDN);
  mpfr_mul(r, t, l, MPFR_RNDN);
  mpfr_const_pi(two_pi, MPFR_RNDN);
  mpfr_mul_2ui(two_pi, two_pi, 1, MPFR_RNDN);
  mpfr_fmod(r, r, two_pi, MPFR_RNDN);
  const double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clears(t, l, two_pi, r, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::complex<double> twisted_sum(const WeightedWindow& w, const CharacterSpec& chi, double T,
                                 std::optional<std::pair<u64, u64>> residue) {
  if (chi.q < 1 || chi.values.size() != chi.q) throw DomainError("twisted_sum: malformed character");
  if (residue) {
    if (residue->second < 1) throw DomainError("twisted_sum: residue modulus must be >= 1");
    if (chi.q != 1 && residue->second != chi.q)
      throw DomainError("twisted_sum: residue modulus " + std::to_string(residue->second) +
                        " differs from character modulus " + std::to_string(chi.q));
  }
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const u64 n = w.n_at(i);
    if (residue && n % residue->second != residue->first % residue->second) continue;
    const std::complex<double> c = chi(n);
    if (c == std::complex<double>{} || w.weights[i] == std::complex<double>{}) continue;
    std::complex<double> z = w.weights[i] * c;
    if (T != 0.0) z *= std::polar(1.0, phase_t_log(T, n));
    double y = z.real() - cre;
    double t = re + y;
    cre = (t - re) - y;
    re = t;
    y = z.imag() - cim;
    t = im + y;
    cim = (t - im) - y;
    im = t;
  }
  return {re, im};
}

}  // namespace dulab
