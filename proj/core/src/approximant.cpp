#include "dulab/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dulab/error.hpp"
#include "dulab/format.hpp"

namespace dulab {

using u64 = std::uint64_t;

namespace {

// Saturates at 2^64 - 1; an interval with a saturated lower end is degenerate.
u64 round_power(double base, double exponent) {
  const double v = std::pow(base, exponent);
  if (!(v < 1.8e19)) return std::numeric_limits<u64>::max();
  return static_cast<u64>(std::llround(v));
}

bool gamma_in_window(const Rational& gamma, int k) {
  return gamma > 0 && gamma < Rational(1, 5 * k);
}

const char* kIntervalNames[4][2] = {{"P1", "Q1"}, {"P2", "Q2"}, {"P3", "Q3"}, {"P4", "Q4"}};

}  // namespace

bool Params::intervals_degenerate() const {
  for (int i = 0; i < 4; ++i) {
    if (P_lo[i] >= Q_hi[i]) return true;
  }
  return false;
}

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = {
      "X",  "H",  "k",  "eta", "delta", "gamma", "omega_exp", "Q0", "Q",       "P1", "Q1", "P2",
      "Q2", "P3", "Q3", "P4",  "Q4",    "v1",    "v2",        "k0", "A_const", "P",  "Pprime"};
  return keys;
}

Params derive_params(u64 X, u64 H, int k, double eta, const ParamOverrides& overrides) {
  if (k < 2) throw DomainError("derive_params: k must be >= 2");
  if (H < 2 || H > X) throw DomainError("derive_params: need 2 <= H <= X");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("derive_params: eta must lie in (0,1)");

  static const std::set<std::string> extra = {"delta_exp"};
  for (const auto& [key, value] : overrides) {
    const auto& keys = param_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end() && !extra.contains(key)) {
      throw DomainError("derive_params: unknown parameter '" + key + "'");
    }
    if (key == "X" || key == "H" || key == "k" || key == "eta") {
      throw DomainError("derive_params: '" + key + "' is an input, not an override");
    }
  }
  auto has = [&](const char* key) { return overrides.contains(key); };
  auto real = [&](const char* key) { return parse_real(overrides.at(key), key); };
  auto integer = [&](const char* key) { return parse_u64(overrides.at(key), key); };

  Params p;
  p.X = X;
  p.H = H;
  p.k = k;
  p.eta = eta;

  if (has("delta_exp")) p.delta_exp = real("delta_exp");
  p.delta = has("delta") ? real("delta") : std::pow(eta, p.delta_exp);

  if (has("gamma")) {
    try {
      p.gamma = parse_rational(overrides.at("gamma"));
    } catch (const DomainError& e) {
      throw DomainError(std::string("gamma: ") + e.what());
    }
    if (p.gamma <= 0) throw DomainError("derive_params: gamma must be positive");
    p.wide_gamma = !gamma_in_window(p.gamma, k);
  } else {
    p.gamma = Rational(1, 6 * k);
  }

  if (has("omega_exp")) p.omega_exp = real("omega_exp");
  if (!(p.omega_exp > 0.0 && p.omega_exp < 1.0)) throw DomainError("derive_params: omega_exp must lie in (0,1)");
  const double Hd = static_cast<double>(H);
  const double Xd = static_cast<double>(X);
  p.Q = has("Q") ? integer("Q") : round_power(Hd, p.omega_exp);
  p.Q0 = has("Q0") ? integer("Q0") : round_power(static_cast<double>(p.Q), p.omega_exp);

  const double d = p.delta;
  p.v1 = has("v1") ? real("v1") : d * d / 4000.0;
  p.v2 = has("v2") ? real("v2") : 0.1;

  const std::array<u64, 4> lo_default = {round_power(Hd, 2 * d * d * d), round_power(Hd, 100 * d * d),
                                         round_power(Xd, p.v1), round_power(Xd, std::sqrt(p.v1 * p.v2))};
  const std::array<u64, 4> hi_default = {round_power(Hd, d * d), round_power(Hd, d),
                                         round_power(Xd, std::sqrt(p.v1 * p.v2)), round_power(Xd, p.v2)};
  for (int i = 0; i < 4; ++i) {
    const char* lo_key = kIntervalNames[i][0];
    const char* hi_key = kIntervalNames[i][1];
    p.P_lo[i] = has(lo_key) ? integer(lo_key) : lo_default[i];
    p.Q_hi[i] = has(hi_key) ? integer(hi_key) : hi_default[i];
    if (has(lo_key) || has(hi_key)) p.synthetic_intervals = true;
  }

  p.P = has("P") ? integer("P") : std::max<u64>(p.Q0, 1);
  p.Pprime = has("Pprime") ? integer("Pprime")
                           : round_power(Hd / static_cast<double>(std::max<u64>(p.P, 1)),
                                         p.omega_exp * p.omega_exp);
  p.A_const = has("A_const") ? real("A_const") : 1.0;
  if (has("k0")) {
    p.k0 = parse_i64(overrides.at("k0"), "k0");
  } else {
    const double num = std::log(Xd / (p.A_const * Hd * std::log(Xd)));
    const double den = 2.0 * std::log(2.0 * static_cast<double>(p.P));
    p.k0 = static_cast<std::int64_t>(std::floor(num / den));
  }

  if (p.Q0 >= p.Q) p.degenerate_reasons.push_back("Q0 >= Q");
  for (int i = 0; i < 4; ++i) {
    if (p.P_lo[i] >= p.Q_hi[i]) {
      p.degenerate_reasons.push_back(std::string(kIntervalNames[i][0]) + " >= " + kIntervalNames[i][1]);
    }
  }
  if (p.k0 < 0) p.degenerate_reasons.push_back("k0 < 0");
  if (p.wide_gamma) p.degenerate_reasons.push_back("gamma outside (0, 1/(5k))");
  return p;
}

std::vector<std::pair<std::string, std::string>> to_key_values(const Params& p) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("X", std::to_string(p.X));
  kv.emplace_back("H", std::to_string(p.H));
  kv.emplace_back("k", std::to_string(p.k));
  kv.emplace_back("eta", format_real(p.eta));
  kv.emplace_back("delta", format_real(p.delta));
  kv.emplace_back("gamma", to_string(p.gamma));
  kv.emplace_back("omega_exp", format_real(p.omega_exp));
  kv.emplace_back("Q0", std::to_string(p.Q0));
  kv.emplace_back("Q", std::to_string(p.Q));
  for (int i = 0; i < 4; ++i) {
    kv.emplace_back(kIntervalNames[i][0], std::to_string(p.P_lo[i]));
    kv.emplace_back(kIntervalNames[i][1], std::to_string(p.Q_hi[i]));
  }
  kv.emplace_back("v1", format_real(p.v1));
  kv.emplace_back("v2", format_real(p.v2));
  kv.emplace_back("k0", std::to_string(p.k0));
  kv.emplace_back("A_const", format_real(p.A_const));
  kv.emplace_back("P", std::to_string(p.P));
  kv.emplace_back("Pprime", std::to_string(p.Pprime));
  return kv;
}

Params params_from_key_values(const std::map<std::string, std::string>& kv) {
  for (const char* key : {"X", "H", "k", "eta"}) {
    if (!kv.contains(key)) throw DomainError(std::string("params: missing required key '") + key + "'");
  }
  ParamOverrides rest;
  for (const auto& [key, value] : kv) {
    if (key != "X" && key != "H" && key != "k" && key != "eta") rest[key] = value;
  }
  const auto k = parse_i64(kv.at("k"), "k");
  Params p = derive_params(parse_u64(kv.at("X"), "X"), parse_u64(kv.at("H"), "H"), static_cast<int>(k),
                           parse_real(kv.at("eta"), "eta"), rest);
  // A serialized parameter set restates the intervals it was derived with;
  // only flag them synthetic if they differ from the formulas.
  if (p.synthetic_intervals) {
    ParamOverrides without = rest;
    for (auto& names : kIntervalNames) {
      without.erase(names[0]);
      without.erase(names[1]);
    }
    const Params base = derive_params(p.X, p.H, p.k, p.eta, without);
    p.synthetic_intervals = base.P_lo != p.P_lo || base.Q_hi != p.Q_hi;
  }
  return p;
}

// ---------------------------------------------------------------------------

Approximant::Approximant(int k, Rational gamma, u64 ambient_X, bool allow_wide_gamma)
    : k_(k), gamma_(std::move(gamma)) {
  if (k < 2) throw DomainError("tau_k_star: k must be >= 2");
  if (ambient_X < 1) throw DomainError("tau_k_star: ambient X must be >= 1");
  if (gamma_ <= 0) throw DomainError("tau_k_star: gamma must be positive");
  if (!allow_wide_gamma && !gamma_in_window(gamma_, k)) {
    throw DomainError("tau_k_star: gamma " + to_string(gamma_) + " outside (0, 1/(5k))");
  }
  cutoff_ = floor_rational_power(ambient_X, gamma_);
  scale_ = pow(Rational(1) / gamma_, static_cast<unsigned>(k - 1));
}

u64 Approximant::truncated_sum(std::span<const PrimePower> f) const {
  if (cutoff_ == 0) return 0;
  return truncated_divisor_sum(f, k_, cutoff_);
}

Rational Approximant::value(std::span<const PrimePower> f) const {
  return scale_ * Rational(from_u64(truncated_sum(f)));
}

namespace {

bool small_is_prime(u64 p) {
  if (p < 2) return false;
  for (u64 d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

Rational Approximant::ratio(u64 p, const Factorization& n) const {
  if (!small_is_prime(p)) throw DomainError("ramare_ratio: " + std::to_string(p) + " is not prime");
  if (std::gcd(p, n.n) != 1) {
    throw DomainError("ramare_ratio: gcd(" + std::to_string(p) + ", " + std::to_string(n.n) + ") != 1");
  }
  if (p > cutoff_) {
    throw DomainError("ramare_ratio: p = " + std::to_string(p) + " exceeds the divisor cutoff " +
                      std::to_string(cutoff_));
  }
  const Rational num = value(n.times_prime(p).factors);
  const Rational den = Rational(k_) * value(n.factors);
  Rational t = num / den;
  t.canonicalize();
  return t;
}

Rational tau_k_star(const Factorization& n, int k, const Rational& gamma, u64 ambient_X,
                    bool allow_wide_gamma) {
  return Approximant(k, gamma, ambient_X, allow_wide_gamma).value(n.factors);
}

Rational ramare_ratio(u64 p, const Factorization& n, int k, const Rational& gamma, u64 ambient_X,
                      bool allow_wide_gamma) {
  return Approximant(k, gamma, ambient_X, allow_wide_gamma).ratio(p, n);
}

SMembershipReport s_membership(u64 n, std::span<const PrimePower> f, const Params& params, double epsilon) {
  if (params.intervals_degenerate() && !params.synthetic_intervals) {
    throw DomainError("s_membership: derived prime intervals are degenerate; supply P1..Q4 overrides");
  }
  SMembershipReport r;
  r.n = n;
  r.omega_total = big_omega(f);
  r.omega_bound = (params.k + epsilon) * std::log(std::log(static_cast<double>(params.X)));
  for (int i = 0; i < 4; ++i) {
    const u64 lo = params.P_lo[i];
    const u64 hi = params.Q_hi[i];
    r.has_factor_in[i] = lo < hi && omega_in(f, lo, hi) > 0;
  }
  r.in_S = r.omega_total <= r.omega_bound &&
           std::all_of(r.has_factor_in.begin(), r.has_factor_in.end(), [](bool b) { return b; });
  return r;
}

SMembershipReport s_membership(const Factorization& n, const Params& params, double epsilon) {
  return s_membership(n.n, n.factors, params, epsilon);
}

}  // namespace dulab
