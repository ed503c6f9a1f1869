#include "dulab/ramare.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dulab/error.hpp"
#include "dulab/format.hpp"

namespace dulab {

using u64 = std::uint64_t;

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Tau: return "tau";
    case WeightKind::TauStar: return "tau_star";
    case WeightKind::Diff: return "diff";
    case WeightKind::SDiff: return "s_diff";
    case WeightKind::RamareDiff: return "ramare_diff";
    case WeightKind::Synthetic: return "synthetic";
  }
  return "unknown";
}

WeightKind parse_weight_kind(std::string_view name) {
  for (auto kind : {WeightKind::Tau, WeightKind::TauStar, WeightKind::Diff, WeightKind::SDiff,
                    WeightKind::RamareDiff, WeightKind::Synthetic}) {
    if (to_string(kind) == name) return kind;
  }
  throw DomainError("unknown weight kind '" + std::string(name) + "'");
}

double WeightedWindow::abs_sum() const {
  double s = 0.0;
  for (const auto& w : weights) s += std::abs(w);
  return s;
}

WeightedWindow WeightedWindow::synthetic(u64 x_start, std::vector<std::complex<double>> weights,
                                         double normalization) {
  WeightedWindow w;
  w.x_start = x_start;
  w.length = weights.size();
  w.ambient_scale = x_start;
  w.kind = WeightKind::Synthetic;
  w.weights = std::move(weights);
  w.normalization = normalization;
  return w;
}

double normalization_for(u64 H, u64 X, int k) {
  return static_cast<double>(H) * std::pow(std::log(static_cast<double>(X)), k - 1);
}

std::pair<Rational, Rational> ramare_identity_sides(std::span<const PrimePower> f, u64 Q0, u64 Q) {
  if (Q0 < 1 || Q0 >= Q) throw DomainError("ramare_identity_check: need 1 <= Q0 < Q");
  const int omega = omega_in(f, Q0, Q);
  Rational lhs = omega > 0 ? 1 : 0;
  Rational rhs = 0;
  // p runs over primes in (Q0, Q]; p m = n has a solution iff p | n, and then
  // omega(p m) = omega(n).
  for (const auto& pp : f) {
    if (pp.p > Q0 && pp.p <= Q) rhs += Rational(1, omega);
  }
  return {lhs, rhs};
}

bool ramare_identity_check(const Factorization& n, u64 Q0, u64 Q) {
  auto [lhs, rhs] = ramare_identity_sides(n.factors, Q0, Q);
  return lhs == rhs;
}

WeightedWindow build_weighted_window(const FactoredWindow& fw, WeightKind kind, const Params& params,
                                     const WindowOptions& options) {
  if (kind == WeightKind::Synthetic) throw DomainError("build_weighted_window: synthetic windows are built directly");
  if (kind == WeightKind::RamareDiff && !options.prime_p) {
    throw DomainError("build_weighted_window: ramare_diff requires a prime p");
  }
  if (kind != WeightKind::RamareDiff && fw.ambient_scale() != params.X) {
    throw DomainError("build_weighted_window: window ambient scale " + std::to_string(fw.ambient_scale()) +
                      " differs from params X " + std::to_string(params.X));
  }
  const bool needs_s = kind == WeightKind::SDiff || kind == WeightKind::RamareDiff;
  const bool s_usable = !params.intervals_degenerate() || params.synthetic_intervals;
  if (needs_s && !s_usable) {
    throw DomainError("build_weighted_window: S intervals are degenerate; supply P1..Q4 overrides");
  }

  const Approximant ap(params.k, params.gamma, params.X, params.wide_gamma);
  const std::size_t len = static_cast<std::size_t>(fw.length());

  WeightedWindow w;
  w.x_start = fw.x_start();
  w.length = fw.length();
  w.ambient_scale = params.X;
  w.kind = kind;
  w.normalization = normalization_for(fw.length(), params.X, params.k);
  w.exact.resize(len);
  w.weights.resize(len);
  w.tau_values.resize(len);
  w.tau_star_values.resize(len);
  w.in_S.assign(len, 0);
  w.omega_q0q.assign(len, 0);

  for (std::size_t i = 0; i < len; ++i) {
    const auto f = fw.factors_at(i);
    const u64 tau = tau_k(f, params.k);
    Rational ts = ap.value(f);
    bool in_s = false;
    if (s_usable) in_s = s_membership(fw.n_at(i), f, params, options.epsilon).in_S;
    const int omega = params.Q0 < params.Q ? omega_in(f, params.Q0, params.Q) : 0;

    Rational a;
    switch (kind) {
      case WeightKind::Tau: a = from_u64(tau); break;
      case WeightKind::TauStar: a = ts; break;
      case WeightKind::Diff: a = Rational(from_u64(tau)) - ts; break;
      case WeightKind::SDiff: a = (in_s ? Rational(from_u64(tau)) : Rational(0)) - ts; break;
      case WeightKind::RamareDiff: {
        const u64 p = *options.prime_p;
        if (fw.n_at(i) % p == 0) {
          a = 0;
          ++w.zeroed_non_coprime;
          break;
        }
        const Rational t = ap.ratio(p, fw.factorization_at(i));
        a = ((in_s ? Rational(from_u64(tau)) : Rational(0)) - t * ts) / Rational(omega + 1);
        break;
      }
      case WeightKind::Synthetic: break;
    }
    a.canonicalize();
    w.weights[i] = {a.get_d(), 0.0};
    w.exact[i] = std::move(a);
    w.tau_values[i] = tau;
    w.tau_star_values[i] = std::move(ts);
    w.in_S[i] = in_s ? 1 : 0;
    w.omega_q0q[i] = omega;
  }
  return w;
}

void write_window_csv(std::ostream& os, const WeightedWindow& w) {
  os << "n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q\n";
  const bool diag = !w.tau_values.empty();
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    os << w.n_at(i) << ',' << format_real(w.weights[i].real()) << ',' << format_real(w.weights[i].imag()) << ','
       << (diag ? w.tau_values[i] : 0) << ',' << format_real(diag ? w.tau_star_values[i].get_d() : 0.0) << ','
       << (diag ? static_cast<int>(w.in_S[i]) : 0) << ',' << (diag ? w.omega_q0q[i] : 0) << '\n';
  }
}

WeightedWindow read_window_csv(std::istream& is, u64 ambient_scale, double normalization) {
  std::string line;
  if (!std::getline(is, line) || line != "n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q") {
    throw DomainError("weights CSV: missing or unexpected header");
  }
  std::vector<std::complex<double>> weights;
  u64 first = 0;
  u64 expect = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 7) throw DomainError("weights CSV: line " + std::to_string(line_no) + " needs 7 columns");
    const u64 n = parse_u64(cols[0], "n");
    if (weights.empty()) {
      if (n == 0) throw DomainError("weights CSV: n must be >= 1");
      first = n;
      expect = n;
    }
    if (n != expect) throw DomainError("weights CSV: line " + std::to_string(line_no) + " breaks contiguity");
    ++expect;
    weights.emplace_back(parse_real(cols[1], "weight_re"), parse_real(cols[2], "weight_im"));
  }
  const u64 x_start = weights.empty() ? 0 : first - 1;
  WeightedWindow w = WeightedWindow::synthetic(x_start, std::move(weights), normalization);
  w.ambient_scale = ambient_scale == 0 ? x_start : ambient_scale;
  return w;
}

}  // namespace dulab
