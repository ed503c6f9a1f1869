#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dulab/approximant.hpp"
#include "dulab/rational.hpp"
#include "dulab/sieve.hpp"

namespace dulab {

enum class WeightKind {
  Tau,         // tau_k
  TauStar,     // tau_k^*
  Diff,        // tau_k - tau_k^*
  SDiff,       // 1_S tau_k - tau_k^*
  RamareDiff,  // (1_S tau_k - t_n tau_k^*) / (omega_(Q0,Q](n) + 1), p | n -> 0
  Synthetic,   // weights supplied directly
};

std::string to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view name);

// Coefficients a_n over (x_start, x_start + length]. `exact` is populated for
// arithmetic kinds; `weights` always holds the double-precision values that
// exponential sums consume.
struct WeightedWindow {
  std::uint64_t x_start = 0;
  std::uint64_t length = 0;
  std::uint64_t ambient_scale = 0;
  WeightKind kind = WeightKind::Synthetic;
  std::vector<Rational> exact;
  std::vector<std::complex<double>> weights;
  double normalization = 1.0;  // H (log X)^{k-1}, natural log

  // Per-n diagnostics (empty for synthetic windows).
  std::vector<std::uint64_t> tau_values;
  std::vector<Rational> tau_star_values;
  std::vector<std::uint8_t> in_S;
  std::vector<int> omega_q0q;
  std::uint64_t zeroed_non_coprime = 0;  // RamareDiff: n with p | n

  std::uint64_t n_at(std::size_t i) const { return x_start + 1 + i; }
  double abs_sum() const;

  static WeightedWindow synthetic(std::uint64_t x_start, std::vector<std::complex<double>> weights,
                                  double normalization = 1.0);
};

double normalization_for(std::uint64_t H, std::uint64_t X, int k);

// Exact check of 1_{(n, P(Q0,Q)) > 1} = sum_{Q0<p<=Q} sum_{pm=n} 1/omega_(Q0,Q](pm).
bool ramare_identity_check(const Factorization& n, std::uint64_t Q0, std::uint64_t Q);

// Both sides of the identity, for reporting.
std::pair<Rational, Rational> ramare_identity_sides(std::span<const PrimePower> f, std::uint64_t Q0,
                                                    std::uint64_t Q);

struct WindowOptions {
  std::optional<std::uint64_t> prime_p;  // required for RamareDiff
  double epsilon = 0.5;                  // epsilon of the Omega condition of S
};

// For RamareDiff the caller passes the already-divided window
// (x/p, (x+H)/p]; n with p | n get weight 0 and are counted.
WeightedWindow build_weighted_window(const FactoredWindow& fw, WeightKind kind, const Params& params,
                                     const WindowOptions& options = {});

// CSV columns: n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q
void write_window_csv(std::ostream& os, const WeightedWindow& w);
WeightedWindow read_window_csv(std::istream& is, std::uint64_t ambient_scale = 0, double normalization = 1.0);

}  // namespace dulab
