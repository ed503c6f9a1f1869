#include "dulab/freq_algebra.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "json.hpp"

#include "dulab/parallel.hpp"

namespace dulab {

using u64 = std::uint64_t;
using json = nlohmann::json;

namespace {

bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

BigInt floor_of(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

void require_prime_coprime(u64 p, const BigInt& Q, const char* who) {
  if (!is_prime_trial(p)) throw DomainError(std::string(who) + ": " + std::to_string(p) + " is not prime");
  if (Q % from_u64(p) == 0)
    throw DomainError(std::string(who) + ": prime " + std::to_string(p) + " divides Q = " + Q.get_str());
}

void require_compatible(const TorusFrequency& a, const TorusFrequency& b, const char* who) {
  if (a.modulus() != b.modulus()) throw DomainError(std::string(who) + ": frequencies have different moduli");
  if (a.degree() != b.degree()) throw DomainError(std::string(who) + ": frequencies have different degrees");
}

Rational rpow(const Rational& r, int j) { return pow(r, static_cast<unsigned>(j)); }
BigInt ipow(u64 b, int j) { return pow(from_u64(b), static_cast<unsigned>(j)); }

BigInt product(const std::vector<u64>& v, std::size_t lo, std::size_t hi) {
  BigInt out = 1;
  for (std::size_t i = lo; i < hi; ++i) out *= from_u64(v[i]);
  return out;
}

json rationals_json(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const auto& r : v) arr.push_back(to_string(r));
  return arr;
}

std::vector<Rational> rationals_from(const json& arr) {
  if (!arr.is_array()) throw DomainError("json: expected an array of \"num/den\" strings");
  std::vector<Rational> out;
  for (const auto& e : arr) {
    if (e.is_string()) out.push_back(parse_rational(e.get<std::string>()));
    else if (e.is_number_integer()) out.push_back(Rational(BigInt(e.dump())));
    else throw DomainError("json: rational entries must be \"num/den\" strings");
  }
  return out;
}

json bigint_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

BigInt bigint_from(const json& v, const char* key) {
  if (v.is_number_unsigned() || v.is_number_integer()) return BigInt(v.dump());
  if (v.is_string()) return BigInt(v.get<std::string>());
  throw DomainError(std::string("json: key '") + key + "' must be an integer");
}

const json& require_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("json: missing key '") + key + "'");
  return j.at(key);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("json: ") + e.what());
  }
}

}  // namespace

TorusFrequency::TorusFrequency(BigInt Q, std::vector<Rational> coords_high_first)
    : Q_(std::move(Q)), coords_(std::move(coords_high_first)) {
  if (Q_ < 1) throw DomainError("torus frequency: modulus must be >= 1");
  if (coords_.empty()) throw DomainError("torus frequency: degree must be >= 1");
  for (auto& c : coords_) c = mod_floor(c, Q_);
}

std::vector<Rational> relation_residuals(const TorusFrequency& a, const TorusFrequency& b, const BigInt& p,
                                         const BigInt& q) {
  require_compatible(a, b, "relation_residuals");
  std::vector<Rational> out;
  BigInt pj = 1, qj = 1;
  for (int j = 1; j <= a.degree(); ++j) {
    pj *= p;
    qj *= q;
    out.push_back(dist_mod(Rational(pj) * a.coord(j) - Rational(qj) * b.coord(j), a.modulus()));
  }
  return out;
}

TorusFrequency combine_pair(const TorusFrequency& a1, const TorusFrequency& a2, u64 p, u64 q, const Rational& eps,
                            const Rational& eps_prime) {
  require_compatible(a1, a2, "combine_pair");
  const BigInt& Q = a1.modulus();
  if (p == q) throw DomainError("combine_pair: p and q must differ");
  require_prime_coprime(p, Q, "combine_pair");
  require_prime_coprime(q, Q, "combine_pair");
  if (eps <= 0 || eps_prime <= 0) throw DomainError("combine_pair: eps and eps' must be positive");

  const auto residuals = relation_residuals(a1, a2, from_u64(p), from_u64(q));
  std::vector<Rational> out(static_cast<std::size_t>(a1.degree()));
  for (int j = 1; j <= a1.degree(); ++j) {
    const Rational e = rpow(eps, j), ep = rpow(eps_prime, j);
    const Rational& res = residuals[static_cast<std::size_t>(j - 1)];
    if (res > e + ep)
      throw PreconditionError("combine_pair: input relation fails at j=" + std::to_string(j) +
                              ", residual " + to_string(res) + " > " + to_string(e + ep));
    const BigInt pj = ipow(p, j), qj = ipow(q, j);
    const Rational qr(Q);
    // beta1 = (a2 + Q s)/p^j and beta2 = (a1 + Q t)/q^j differ by D + Q u/(p^j q^j)
    // with u = s q^j - t p^j; pick u nearest to -D p^j q^j / Q.
    const Rational D = a2.coord(j) / Rational(pj) - a1.coord(j) / Rational(qj);
    const BigInt u0 = floor_of(-D * Rational(pj * qj) / qr + Rational(1, 2));
    BigInt inv;
    BigInt qmod = qj % pj;
    if (mpz_invert(inv.get_mpz_t(), qmod.get_mpz_t(), pj.get_mpz_t()) == 0)
      throw InvariantViolation("combine_pair: q^j not invertible mod p^j");
    BigInt s = (u0 * inv) % pj;
    if (s < 0) s += pj;
    const BigInt tnum = s * qj - u0;
    if (tnum % pj != 0) throw InvariantViolation("combine_pair: lift equation has no integer solution");
    const BigInt t = tnum / pj;
    const Rational beta1 = (a2.coord(j) + qr * Rational(s)) / Rational(pj);
    const Rational beta2 = (a1.coord(j) + qr * Rational(t)) / Rational(qj);
    out[static_cast<std::size_t>(a1.degree() - j)] = (e * beta1 + ep * beta2) / (e + ep);
  }
  return TorusFrequency(Q, std::move(out));
}

// ---------------------------------------------------------------------------

void PrePath::validate() const {
  const std::size_t k = p.size();
  if (q.size() != k) throw DomainError("pre-path: p and q must have the same length");
  if (nodes.size() != k + 1) throw DomainError("pre-path: expected k + 1 = " + std::to_string(k + 1) + " nodes");
  if (eps <= 0) throw DomainError("pre-path: eps must be positive");
  if (Q < 1) throw DomainError("pre-path: Q must be >= 1");
  for (const auto& n : nodes) {
    if (n.modulus() != Q) throw DomainError("pre-path: node modulus differs from Q");
    if (n.degree() != nodes.front().degree()) throw DomainError("pre-path: nodes have different degrees");
  }
  std::set<u64> seen;
  for (const auto* list : {&p, &q}) {
    for (u64 prime : *list) {
      require_prime_coprime(prime, Q, "pre-path");
      if (!seen.insert(prime).second) throw DomainError("pre-path: prime " + std::to_string(prime) + " repeated");
    }
  }
}

PrePathReport verify_prepath(const PrePath& pp) {
  pp.validate();
  PrePathReport rep;
  for (int i = 0; i < pp.length(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    auto res = relation_residuals(pp.nodes[idx], pp.nodes[idx + 1], from_u64(pp.p[idx]), from_u64(pp.q[idx]));
    for (int j = 1; j <= pp.degree(); ++j) {
      if (res[static_cast<std::size_t>(j - 1)] > rpow(pp.eps, j)) {
        rep.failures.emplace_back(i, j);
        rep.passed = false;
      }
    }
    rep.residuals.push_back(std::move(res));
  }
  return rep;
}

bool balanced_products(const PrePath& pp, const Rational& factor) {
  const std::size_t k = pp.p.size();
  for (std::size_t lo = 0; lo < k; ++lo) {
    Rational ratio = 1;
    for (std::size_t hi = lo; hi < k; ++hi) {
      ratio *= Rational(from_u64(pp.p[hi]), from_u64(pp.q[hi]));
      if (ratio > factor || ratio * factor < 1) return false;
    }
  }
  return true;
}

Pyramid build_pyramid(const PrePath& pp) {
  const auto report = verify_prepath(pp);
  if (!report.passed) {
    const auto [i, j] = report.failures.front();
    throw PreconditionError("build_pyramid: base relation fails at edge " + std::to_string(i + 1) + ", degree " +
                            std::to_string(j));
  }
  const int k = pp.length();
  const int d = pp.degree();
  const BigInt& Q = pp.Q;

  Pyramid py;
  py.base = pp;
  py.levels.emplace_back();
  for (const auto& n : pp.nodes) py.levels.back().push_back(PyramidCell{n, {}, {}, {}, {}});

  for (int t = 2; t <= k + 1; ++t) {
    std::vector<PyramidCell> level;
    const auto& below = py.levels.back();
    for (int i = 1; i <= k + 2 - t; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto ut = static_cast<std::size_t>(t);
      const u64 p = pp.p[ui - 1];
      const u64 q = pp.q[ui + ut - 3];
      const Rational eps_used = pp.eps / Rational(product(pp.p, ui, ui + ut - 2));
      const Rational eps_prime_used = pp.eps / Rational(product(pp.q, ui - 1, ui + ut - 3));
      PyramidCell cell;
      try {
        cell.freq = combine_pair(below[ui - 1].freq, below[ui].freq, p, q, eps_used, eps_prime_used);
      } catch (const PreconditionError& e) {
        throw PreconditionError("build_pyramid: level " + std::to_string(t) + ", index " + std::to_string(i) +
                                ": " + e.what());
      }
      const Rational pprod(product(pp.p, ui - 1, ui + ut - 2));
      const Rational qprod(product(pp.q, ui - 1, ui + ut - 2));
      for (int j = 1; j <= d; ++j) {
        cell.bound_rule1.push_back(rpow(pp.eps / pprod, j));
        cell.bound_rule2.push_back(rpow(pp.eps / qprod, j));
        cell.residual_rule1.push_back(
            dist_mod(Rational(ipow(q, j)) * cell.freq.coord(j) - below[ui - 1].freq.coord(j), Q));
        cell.residual_rule2.push_back(dist_mod(Rational(ipow(p, j)) * cell.freq.coord(j) - below[ui].freq.coord(j), Q));
        const auto uj = static_cast<std::size_t>(j - 1);
        if (cell.residual_rule1[uj] > cell.bound_rule1[uj] || cell.residual_rule2[uj] > cell.bound_rule2[uj])
          throw InvariantViolation("build_pyramid: tracked bound exceeded at level " + std::to_string(t) +
                                   ", index " + std::to_string(i));
      }
      level.push_back(std::move(cell));
    }
    py.levels.push_back(std::move(level));
  }
  return py;
}

std::vector<Rational> top_element_residual(const Pyramid& py, int i_prime) {
  const int k = py.base.length();
  if (i_prime < 0 || i_prime > k)
    throw DomainError("top_element_residual: i' must lie in [0, " + std::to_string(k) + "]");
  const auto ip = static_cast<std::size_t>(i_prime);
  const BigInt c = product(py.base.p, 0, ip) * product(py.base.q, ip, static_cast<std::size_t>(k));
  const auto& target = py.base.nodes[ip];
  std::vector<Rational> out;
  for (int j = 1; j <= py.base.degree(); ++j)
    out.push_back(dist_mod(Rational(pow(c, static_cast<unsigned>(j))) * py.top().coord(j) - target.coord(j), py.base.Q));
  return out;
}

Rational certified_top_bound(const PrePath& pp, int j) { return Rational(4 * pp.length()) * rpow(pp.eps, j); }

CycleFrequency cycle_frequency(const Rational& alpha_j, const BigInt& Q, u64 y, int j, const std::vector<u64>& p,
                               const std::vector<u64>& q, const std::vector<u64>& p_return,
                               const std::vector<u64>& q_return) {
  const std::size_t k = p.size();
  if (k == 0 || q.size() != k || p_return.size() != k || q_return.size() != k)
    throw DomainError("cycle_frequency: need four prime lists of one common length k >= 1");
  if (j < 1) throw DomainError("cycle_frequency: degree must be >= 1");
  if (y == 0) throw DomainError("cycle_frequency: y must be positive");
  if (Q <= 0) throw DomainError("cycle_frequency: modulus must be positive");
  const auto e = static_cast<unsigned>(j);
  CycleFrequency out;
  out.A = pow(BigInt(product(p, 0, k) * product(q_return, 0, k)), e);
  out.B = pow(BigInt(product(p_return, 0, k) * product(q, 0, k)), e);
  const BigInt D = out.A - out.B;
  if (D == 0) throw DomainError("cycle_frequency: the cycle's prime products coincide");
  Rational r = mod_floor(Rational(D) * alpha_j, Q);
  if (r > Rational(Q) / 2) r -= Rational(Q);
  out.residue = r;
  const Rational yj = pow(Rational(from_u64(y)), e);
  out.T = r * yj * Rational(out.A) / Rational(D);
  out.T.canonicalize();
  out.rational_part = mod_floor(alpha_j - out.T / (yj * Rational(out.A)), Q);
  return out;
}

// ---------------------------------------------------------------------------

Configuration::Configuration(u64 H, std::vector<ConfigElement> elements, double c)
    : H_(H), c_(c), elements_(std::move(elements)) {
  if (H_ < 1) throw DomainError("configuration: separation H must be >= 1");
  std::vector<std::int64_t> xs;
  for (const auto& e : elements_) xs.push_back(e.x);
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (static_cast<u64>(xs[i] - xs[i - 1]) < H_)
      throw DomainError("configuration: x = " + std::to_string(xs[i - 1]) + " and " + std::to_string(xs[i]) +
                        " are closer than H = " + std::to_string(H_));
  }
  for (const auto& e : elements_) {
    if (e.freq.modulus() != elements_.front().freq.modulus() || e.freq.degree() != elements_.front().freq.degree())
      throw DomainError("configuration: frequencies must share modulus and degree");
  }
}

bool operator<(const SplitPath& a, const SplitPath& b) {
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  if (a.p != b.p) return a.p < b.p;
  return a.q < b.q;
}

bool split_edge(const Configuration& cfg, std::size_t a, std::size_t b, u64 p, u64 q, const PathTolerance& tol,
                Rational* closeness, std::vector<Rational>* residuals) {
  const auto& ea = cfg[a];
  const auto& eb = cfg[b];
  const Rational gap = abs(Rational(BigInt(static_cast<long>(ea.x)), from_u64(p)) -
                           Rational(BigInt(static_cast<long>(eb.x)), from_u64(q)));
  const Rational h_over_p(from_u64(tol.H), from_u64(tol.P));
  if (gap > tol.slack * h_over_p) return false;
  if (ea.freq.modulus() != tol.Q)
    throw DomainError("split path: configuration modulus " + ea.freq.modulus().get_str() + " differs from Q");
  auto res = relation_residuals(ea.freq, eb.freq, from_u64(p), from_u64(q));
  const Rational p_over_h(from_u64(tol.P), from_u64(tol.H));
  for (int j = 1; j <= ea.freq.degree(); ++j)
    if (res[static_cast<std::size_t>(j - 1)] > tol.slack * rpow(p_over_h, j)) return false;
  if (closeness) *closeness = gap;
  if (residuals) *residuals = std::move(res);
  return true;
}

namespace {

struct Edge {
  std::size_t to;
  u64 p, q;
  Rational closeness;
  std::vector<Rational> residuals;
};

void check_pools(const std::vector<u64>& pool1, const std::vector<u64>& pool2, const PathTolerance& tol) {
  if (pool1.empty() || pool2.empty()) throw DomainError("split path: prime pools must be nonempty");
  if (tol.H < 1 || tol.P < 1) throw DomainError("split path: H and P must be >= 1");
  if (tol.slack < 0) throw DomainError("split path: slack must be nonnegative");
  std::set<u64> first(pool1.begin(), pool1.end());
  for (u64 q : pool2)
    if (first.count(q)) throw DomainError("split path: pools share the prime " + std::to_string(q));
  for (const auto* pool : {&pool1, &pool2})
    for (u64 p : *pool) require_prime_coprime(p, tol.Q, "split path");
}

std::vector<u64> sorted_unique(std::vector<u64> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::vector<Edge>> build_adjacency(const Configuration& cfg, const std::vector<u64>& pool1,
                                               const std::vector<u64>& pool2, const PathTolerance& tol) {
  std::vector<std::vector<Edge>> adj(cfg.size());
  for (std::size_t a = 0; a < cfg.size(); ++a)
    for (std::size_t b = 0; b < cfg.size(); ++b)
      for (u64 p : pool1)
        for (u64 q : pool2) {
          Edge e{b, p, q, 0, {}};
          if (split_edge(cfg, a, b, p, q, tol, &e.closeness, &e.residuals)) adj[a].push_back(std::move(e));
        }
  return adj;
}

constexpr std::size_t kMaxPaths = 10'000'000;

}  // namespace

std::vector<SplitPath> find_split_paths(const Configuration& cfg, const std::vector<u64>& pool1_in,
                                        const std::vector<u64>& pool2_in, const PathTolerance& tol, int k,
                                        const PathSearchOptions& options) {
  check_pools(pool1_in, pool2_in, tol);
  if (k < 1) throw DomainError("find_split_paths: k must be >= 1");
  if (options.start && *options.start >= cfg.size())
    throw DomainError("find_split_paths: start index out of range");
  const auto pool1 = sorted_unique(pool1_in);
  const auto pool2 = sorted_unique(pool2_in);
  const auto adj = build_adjacency(cfg, pool1, pool2, tol);

  std::vector<std::size_t> starts;
  if (options.start) starts.push_back(*options.start);
  else
    for (std::size_t s = 0; s < cfg.size(); ++s) starts.push_back(s);

  std::vector<std::vector<SplitPath>> found(starts.size());
  parallel_for(starts.size(), options.workers, [&](std::size_t si) {
    SplitPath cur;
    cur.nodes.push_back(starts[si]);
    std::vector<u64> used;
    auto& out = found[si];
    auto dfs = [&](auto&& self) -> void {
      if (cur.length() == k) {
        if (out.size() >= kMaxPaths) throw DomainError("find_split_paths: more than 10^7 paths; narrow the search");
        out.push_back(cur);
        return;
      }
      for (const Edge& e : adj[cur.nodes.back()]) {
        if (options.distinct_primes &&
            (std::find(used.begin(), used.end(), e.p) != used.end() ||
             std::find(used.begin(), used.end(), e.q) != used.end()))
          continue;
        cur.nodes.push_back(e.to);
        cur.p.push_back(e.p);
        cur.q.push_back(e.q);
        cur.closeness.push_back(e.closeness);
        cur.residuals.push_back(e.residuals);
        used.push_back(e.p);
        used.push_back(e.q);
        self(self);
        used.resize(used.size() - 2);
        cur.nodes.pop_back();
        cur.p.pop_back();
        cur.q.pop_back();
        cur.closeness.pop_back();
        cur.residuals.pop_back();
      }
    };
    dfs(dfs);
  });

  std::vector<SplitPath> all;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(all));
  std::sort(all.begin(), all.end());
  if (options.cap && all.size() > options.cap) all.resize(options.cap);
  return all;
}

RegularSubset regular_subset(const Configuration& cfg, const std::vector<u64>& pool1,
                             const std::vector<u64>& pool2, const PathTolerance& tol, double c,
                             std::size_t degree_target) {
  RegularSubset out;
  const std::size_t n = cfg.size();
  if (n == 0) {
    out.subset = cfg;
    out.meets_density = true;
    return out;
  }
  check_pools(pool1, pool2, tol);
  const auto adj = build_adjacency(cfg, sorted_unique(pool1), sorted_unique(pool2), tol);
  std::vector<std::vector<std::size_t>> incoming(n);  // one entry per edge a -> b
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    degree[a] = adj[a].size();
    for (const auto& e : adj[a]) incoming[e.to].push_back(a);
  }
  std::vector<bool> alive(n, true);
  std::deque<std::size_t> queue;
  for (std::size_t a = 0; a < n; ++a)
    if (degree[a] < degree_target) {
      alive[a] = false;
      queue.push_back(a);
    }
  while (!queue.empty()) {
    const std::size_t b = queue.front();
    queue.pop_front();
    for (std::size_t a : incoming[b]) {
      if (!alive[a]) continue;
      if (--degree[a] < degree_target) {
        alive[a] = false;
        queue.push_back(a);
      }
    }
  }
  std::vector<ConfigElement> kept_elements;
  std::size_t min_degree = 0;
  bool first = true;
  for (std::size_t a = 0; a < n; ++a) {
    if (!alive[a]) continue;
    out.kept.push_back(a);
    kept_elements.push_back(cfg[a]);
    if (first || degree[a] < min_degree) min_degree = degree[a];
    first = false;
  }
  out.min_degree = min_degree;
  out.subset = Configuration(cfg.separation(), std::move(kept_elements), cfg.label());
  out.meets_density = static_cast<double>(out.kept.size()) >= c * static_cast<double>(n);
  return out;
}

std::vector<std::pair<SplitPath, SplitPath>> find_disjoint_path_pairs(const Configuration& cfg,
                                                                      const std::vector<u64>& pool1,
                                                                      const std::vector<u64>& pool2,
                                                                      const PathTolerance& tol, int k,
                                                                      std::size_t start, int workers) {
  if (start >= cfg.size()) throw DomainError("find_disjoint_path_pairs: start element not in configuration");
  if (k < 1) throw DomainError("find_disjoint_path_pairs: k must be >= 1");
  PathSearchOptions opt;
  opt.start = start;
  opt.workers = workers;
  const auto paths = find_split_paths(cfg, pool1, pool2, tol, k, opt);
  std::vector<std::pair<SplitPath, SplitPath>> out;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    std::set<u64> primes(paths[a].p.begin(), paths[a].p.end());
    primes.insert(paths[a].q.begin(), paths[a].q.end());
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      if (paths[b].end() != paths[a].end()) continue;
      bool disjoint = true;
      for (const auto* list : {&paths[b].p, &paths[b].q})
        for (u64 x : *list)
          if (primes.count(x)) disjoint = false;
      if (disjoint) out.emplace_back(paths[a], paths[b]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

PrePath prepath_from_json(const std::string& text) {
  const json j = parse_json(text);
  PrePath pp;
  pp.Q = bigint_from(require_key(j, "Q"), "Q");
  const json& eps = require_key(j, "eps");
  if (!eps.is_string()) throw DomainError("json: 'eps' must be a \"num/den\" string");
  pp.eps = parse_rational(eps.get<std::string>());
  try {
    pp.p = require_key(j, "p").get<std::vector<u64>>();
    pp.q = require_key(j, "q").get<std::vector<u64>>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: p and q must be integer arrays: ") + e.what());
  }
  const json& nodes = require_key(j, "nodes");
  if (!nodes.is_array()) throw DomainError("json: 'nodes' must be an array");
  for (const auto& n : nodes) pp.nodes.emplace_back(pp.Q, rationals_from(n));
  if (j.contains("d")) {
    const auto d = j.at("d").get<int>();
    for (const auto& n : pp.nodes)
      if (n.degree() != d) throw DomainError("json: node degree differs from d = " + std::to_string(d));
  }
  pp.validate();
  return pp;
}

std::string prepath_to_json(const PrePath& pp) {
  json j;
  j["Q"] = bigint_json(pp.Q);
  j["d"] = pp.degree();
  j["eps"] = to_string(pp.eps);
  j["p"] = pp.p;
  j["q"] = pp.q;
  j["nodes"] = json::array();
  for (const auto& n : pp.nodes) j["nodes"].push_back(rationals_json(n.coords()));
  return j.dump();
}

Configuration configuration_from_json(const std::string& text) {
  const json j = parse_json(text);
  const BigInt Q = bigint_from(require_key(j, "Q"), "Q");
  const auto H = require_key(j, "H").get<u64>();
  const double c = j.contains("c") ? j.at("c").get<double>() : 0.0;
  std::vector<ConfigElement> elements;
  for (const auto& e : require_key(j, "elements")) {
    ConfigElement el;
    el.x = require_key(e, "x").get<std::int64_t>();
    el.freq = TorusFrequency(Q, rationals_from(require_key(e, "freq")));
    elements.push_back(std::move(el));
  }
  if (j.contains("d")) {
    const auto d = j.at("d").get<int>();
    for (const auto& e : elements)
      if (e.freq.degree() != d) throw DomainError("json: element degree differs from d = " + std::to_string(d));
  }
  return Configuration(H, std::move(elements), c);
}

std::string configuration_to_json(const Configuration& cfg) {
  json j;
  j["Q"] = cfg.empty() ? json(1) : bigint_json(cfg[0].freq.modulus());
  j["d"] = cfg.empty() ? 1 : cfg[0].freq.degree();
  j["H"] = cfg.separation();
  j["c"] = cfg.label();
  j["elements"] = json::array();
  for (const auto& e : cfg.elements()) j["elements"].push_back({{"x", e.x}, {"freq", rationals_json(e.freq.coords())}});
  return j.dump();
}

std::string pyramid_to_json(const Pyramid& py) {
  json j;
  j["prepath"] = json::parse(prepath_to_json(py.base));
  j["top"] = rationals_json(py.top().coords());
  j["levels"] = json::array();
  for (std::size_t t = 1; t < py.levels.size(); ++t) {
    json level = json::array();
    for (const auto& c : py.levels[t])
      level.push_back({{"freq", rationals_json(c.freq.coords())},
                       {"bound_rule1", rationals_json(c.bound_rule1)},
                       {"bound_rule2", rationals_json(c.bound_rule2)},
                       {"residual_rule1", rationals_json(c.residual_rule1)},
                       {"residual_rule2", rationals_json(c.residual_rule2)}});
    j["levels"].push_back(std::move(level));
  }
  json tops = json::array();
  for (int i = 0; i <= py.base.length(); ++i) tops.push_back(rationals_json(top_element_residual(py, i)));
  j["top_residuals"] = std::move(tops);
  return j.dump();
}

}  // namespace dulab
