#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dulab/rational.hpp"
#include "dulab/sieve.hpp"

namespace dulab {

// Every scale parameter of the argument, derived from (X, H, k, eta). All
// integer scales are rounded to the nearest integer; divisor cutoffs such as
// X^gamma are floored separately by Approximant.
struct Params {
  std::uint64_t X = 0;
  std::uint64_t H = 0;
  int k = 2;
  double eta = 0.5;
  double delta = 0.25;         // eta^delta_exp
  double delta_exp = 2.0;      // A in delta = eta^A
  Rational gamma;              // default 1/(6k)
  double omega_exp = 0.5;      // Q = H^omega, Q0 = Q^omega
  std::uint64_t Q0 = 0;
  std::uint64_t Q = 0;
  std::array<std::uint64_t, 4> P_lo{};  // P1..P4
  std::array<std::uint64_t, 4> Q_hi{};  // Q1..Q4
  double v1 = 0.0;
  double v2 = 0.1;
  std::int64_t k0 = 0;
  double A_const = 1.0;
  std::uint64_t P = 0;
  std::uint64_t Pprime = 0;

  // Set when any of P1..Q4 was overridden; s_membership then trusts them.
  bool synthetic_intervals = false;
  // Set when an overridden gamma lies outside (0, 1/(5k)).
  bool wide_gamma = false;
  std::vector<std::string> degenerate_reasons;

  bool degenerate() const { return !degenerate_reasons.empty(); }
  bool intervals_degenerate() const;
};

using ParamOverrides = std::map<std::string, std::string>;

// Keys accepted by derive_params overrides: every serialized field name plus
// "delta_exp".
Params derive_params(std::uint64_t X, std::uint64_t H, int k, double eta,
                     const ParamOverrides& overrides = {});

// Serialized field names in canonical order:
// X, H, k, eta, delta, gamma, omega_exp, Q0, Q, P1, Q1, P2, Q2, P3, Q3, P4, Q4,
// v1, v2, k0, A_const, P, Pprime.
std::vector<std::pair<std::string, std::string>> to_key_values(const Params& p);
Params params_from_key_values(const std::map<std::string, std::string>& kv);
const std::vector<std::string>& param_keys();

// tau_k^* with a fixed (k, gamma, X): gamma^{1-k} times the sum of
// tau_{k-1}(m) over m | n, m <= floor(X^gamma).
class Approximant {
 public:
  Approximant(int k, Rational gamma, std::uint64_t ambient_X, bool allow_wide_gamma = false);

  int k() const { return k_; }
  const Rational& gamma() const { return gamma_; }
  std::uint64_t cutoff() const { return cutoff_; }
  const Rational& scale() const { return scale_; }  // gamma^{1-k}

  std::uint64_t truncated_sum(std::span<const PrimePower> f) const;
  Rational value(std::span<const PrimePower> f) const;

  // t_n with tau_k^*(p n) = k t_n tau_k^*(n).
  Rational ratio(std::uint64_t p, const Factorization& n) const;

 private:
  int k_;
  Rational gamma_;
  std::uint64_t cutoff_;
  Rational scale_;
};

Rational tau_k_star(const Factorization& n, int k, const Rational& gamma, std::uint64_t ambient_X,
                    bool allow_wide_gamma = false);

Rational ramare_ratio(std::uint64_t p, const Factorization& n, int k, const Rational& gamma,
                      std::uint64_t ambient_X, bool allow_wide_gamma = false);

struct SMembershipReport {
  std::uint64_t n = 0;
  bool in_S = false;
  int omega_total = 0;
  std::array<bool, 4> has_factor_in{};
  double omega_bound = 0.0;  // (k + epsilon) log log X
};

SMembershipReport s_membership(const Factorization& n, const Params& params, double epsilon = 0.5);
SMembershipReport s_membership(std::uint64_t n, std::span<const PrimePower> f, const Params& params,
                               double epsilon = 0.5);

}  // namespace dulab
