#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dulab/error.hpp"
#include "dulab/rational.hpp"

namespace dulab {

// A point of (R / Q Z)^d. Coordinates are stored highest degree first,
// (alpha^{(d)}, ..., alpha^{(1)}), each reduced to [0, Q).
class TorusFrequency {
 public:
  TorusFrequency() = default;
  TorusFrequency(BigInt Q, std::vector<Rational> coords_high_first);

  int degree() const { return static_cast<int>(coords_.size()); }
  const BigInt& modulus() const { return Q_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& coord(int j) const { return coords_[coords_.size() - static_cast<std::size_t>(j)]; }

  friend bool operator==(const TorusFrequency& a, const TorusFrequency& b) {
    return a.Q_ == b.Q_ && a.coords_ == b.coords_;
  }

 private:
  BigInt Q_ = 1;
  std::vector<Rational> coords_;
};

// dist(p^j a^{(j)} - q^j b^{(j)}, QZ) for each j = 1..d (index j - 1).
std::vector<Rational> relation_residuals(const TorusFrequency& a, const TorusFrequency& b, const BigInt& p,
                                         const BigInt& q);

// Combines two related frequencies into one alpha with
//   |p^j alpha - a2 mod Q| <= (eps'/q)^j  and  |q^j alpha - a1 mod Q| <= (eps/p)^j,
// given |p^j a1 - q^j a2 mod Q| <= eps^j + eps'^j for every j (checked).
TorusFrequency combine_pair(const TorusFrequency& a1, const TorusFrequency& a2, std::uint64_t p, std::uint64_t q,
                            const Rational& eps, const Rational& eps_prime);

// ---------------------------------------------------------------------------

struct PrePath {
  BigInt Q = 1;
  Rational eps;
  std::vector<std::uint64_t> p;  // p_1..p_k
  std::vector<std::uint64_t> q;  // q_1..q_k
  std::vector<TorusFrequency> nodes;  // alpha_1..alpha_{k+1}

  int length() const { return static_cast<int>(p.size()); }
  int degree() const { return nodes.empty() ? 0 : nodes.front().degree(); }

  // Throws DomainError unless: k + 1 nodes of a common degree and modulus Q,
  // 2k distinct primes none dividing Q, eps > 0.
  void validate() const;
};

struct PrePathReport {
  // residuals[i][j - 1] for edge i (0-based) and degree j.
  std::vector<std::vector<Rational>> residuals;
  std::vector<std::pair<int, int>> failures;  // (edge, degree) with residual > eps^j
  bool passed = true;
};

PrePathReport verify_prepath(const PrePath& pp);

// Whether every subrange product ratio prod p / prod q lies in [1/factor, factor].
bool balanced_products(const PrePath& pp, const Rational& factor = 2);

struct PyramidCell {
  TorusFrequency freq;
  // Level t >= 2 only, per degree j (index j - 1):
  //   rule 1: q_{i+t-2}^j alpha_{t,i} vs alpha_{t-1,i}
  //   rule 2: p_i^j alpha_{t,i} vs alpha_{t-1,i+1}
  std::vector<Rational> bound_rule1, bound_rule2;
  std::vector<Rational> residual_rule1, residual_rule2;
};

struct Pyramid {
  PrePath base;
  // levels[t - 1] holds alpha_{t,1..k+2-t}; levels[0] is the base sequence.
  std::vector<std::vector<PyramidCell>> levels;

  const TorusFrequency& top() const { return levels.back().front().freq; }
  const PyramidCell& cell(int t, int i) const { return levels[t - 1][i - 1]; }
};

Pyramid build_pyramid(const PrePath& pp);

// Per-degree dist(prod_{i<=i'} p_i^j prod_{i'<i<=k} q_i^j top^{(j)} - alpha_{i'+1}^{(j)}, QZ).
std::vector<Rational> top_element_residual(const Pyramid& py, int i_prime);

// The certified bound 4 k eps^j on top_element_residual under balanced products.
Rational certified_top_bound(const PrePath& pp, int j);

// ---------------------------------------------------------------------------

struct ConfigElement {
  std::int64_t x = 0;
  TorusFrequency freq;
};

class Configuration {
 public:
  Configuration() = default;
  // Throws DomainError if two first coordinates are closer than H.
  Configuration(std::uint64_t H, std::vector<ConfigElement> elements, double c = 0.0);

  std::uint64_t separation() const { return H_; }
  double label() const { return c_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<ConfigElement>& elements() const { return elements_; }
  const ConfigElement& operator[](std::size_t i) const { return elements_[i]; }

 private:
  std::uint64_t H_ = 1;
  double c_ = 0.0;
  std::vector<ConfigElement> elements_;
};

// Tolerances of a split-path edge: closeness slack * H / P and congruence
// slack * (P / H)^j modulo Q.
struct PathTolerance {
  BigInt Q = 1;
  std::uint64_t H = 1;
  std::uint64_t P = 1;
  Rational slack = 1;
};

struct SplitPath {
  std::vector<std::size_t> nodes;  // k + 1 indices into the configuration
  std::vector<std::uint64_t> p, q;
  std::vector<Rational> closeness;               // |x_i/p_i - x_{i+1}/q_i| per edge
  std::vector<std::vector<Rational>> residuals;  // per edge, per degree

  int length() const { return static_cast<int>(p.size()); }
  std::size_t start() const { return nodes.front(); }
  std::size_t end() const { return nodes.back(); }
  friend bool operator<(const SplitPath& a, const SplitPath& b);
  friend bool operator==(const SplitPath& a, const SplitPath& b) {
    return a.nodes == b.nodes && a.p == b.p && a.q == b.q;
  }
};

struct PathSearchOptions {
  std::size_t cap = 0;             // 0 = unlimited; otherwise the first `cap` in sorted order
  bool distinct_primes = true;     // all 2k primes of a path pairwise distinct
  std::optional<std::size_t> start;  // restrict to paths starting here
  int workers = 1;
};

// Whether (a, p) -> (b, q) is a length-1 split-path edge; fills the per-edge data.
bool split_edge(const Configuration& cfg, std::size_t a, std::size_t b, std::uint64_t p, std::uint64_t q,
                const PathTolerance& tol, Rational* closeness = nullptr,
                std::vector<Rational>* residuals = nullptr);

// All split paths of length k, sorted by node indices then primes.
std::vector<SplitPath> find_split_paths(const Configuration& cfg, const std::vector<std::uint64_t>& pool1,
                                        const std::vector<std::uint64_t>& pool2, const PathTolerance& tol, int k,
                                        const PathSearchOptions& options = {});

struct RegularSubset {
  std::vector<std::size_t> kept;  // indices into the input configuration, ascending
  Configuration subset;
  std::size_t min_degree = 0;     // over kept elements; 0 if none remain
  bool meets_density = false;     // |kept| >= c |cfg|
};

// Deletes elements whose count of length-1 continuations (p, q, y) inside the
// surviving set is below degree_target, until nothing changes.
RegularSubset regular_subset(const Configuration& cfg, const std::vector<std::uint64_t>& pool1,
                             const std::vector<std::uint64_t>& pool2, const PathTolerance& tol, double c,
                             std::size_t degree_target);

// Pairs (l1, l2), l1 < l2, of length-k paths from `start` with a common
// endpoint and no common prime.
std::vector<std::pair<SplitPath, SplitPath>> find_disjoint_path_pairs(const Configuration& cfg,
                                                                      const std::vector<std::uint64_t>& pool1,
                                                                      const std::vector<std::uint64_t>& pool2,
                                                                      const PathTolerance& tol, int k,
                                                                      std::size_t start, int workers = 1);

// ---------------------------------------------------------------------------
// Diagnostic for a closed cycle start -> y -> start made of a path (p, q) and a
// return path (p', q'). With A = prod (p_i q'_i)^j, B = prod (p'_i q_i)^j and
// D = A - B, the congruence D alpha = D T / (y^j A) mod Q fixes T once a
// representative of D alpha mod Q is chosen; the centred one (|r| <= Q/2) is
// used. Not unique: other representatives give other valid T.

struct CycleFrequency {
  Rational T;               // T_{j,y}
  Rational residue;         // the chosen representative r of D alpha mod Q
  Rational rational_part;   // alpha - T / (y^j A) mod Q, a multiple of Q / D
  BigInt A, B;
};

CycleFrequency cycle_frequency(const Rational& alpha_j, const BigInt& Q, std::uint64_t y, int j,
                               const std::vector<std::uint64_t>& p, const std::vector<std::uint64_t>& q,
                               const std::vector<std::uint64_t>& p_return,
                               const std::vector<std::uint64_t>& q_return);

// ---------------------------------------------------------------------------
// JSON, rationals as "num/den" strings.
//   pre-path:      {"Q", "d", "eps", "p": [...], "q": [...], "nodes": [[...], ...]}
//   configuration: {"Q", "d", "H", "c", "elements": [{"x", "freq": [...]}, ...]}

PrePath prepath_from_json(const std::string& text);
std::string prepath_to_json(const PrePath& pp);
Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& cfg);
std::string pyramid_to_json(const Pyramid& py);

}  // namespace dulab
