#pragma once

// Slow reference implementations used to cross-check the library. None of
// them calls into dulab_core beyond the plain data types.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "dulab/freq_algebra.hpp"
#include "dulab/rational.hpp"

namespace oracle {

using u64 = std::uint64_t;

// Divisors of n by trial division, ascending.
std::vector<u64> divisors(u64 n);

// Prime factorization by trial division.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

// Ordered k-fold factorizations of n, counted over the divisor lattice.
u64 tau_k(u64 n, int k);

// tau_k(n) for 0 <= n <= N by repeated Dirichlet convolution with 1 (index 0 unused).
std::vector<u64> tau_k_table(u64 N, int k);

// Distinct primes p | n with lo < p <= hi.
int omega_in(u64 n, u64 lo, u64 hi);

// Both sides of the Ramare identity: [omega > 0] and the sum over p m = n,
// Q0 < p <= Q, of 1 / (omega(m) + [p does not divide m]).
std::pair<dulab::Rational, dulab::Rational> ramare_sides(u64 n, u64 Q0, u64 Q);

// gamma^{1-k} sum_{d | n, d <= X^gamma} tau_{k-1}(d), with the cutoff found by
// exact integer comparison of d^den against X^num.
dulab::Rational tau_k_star(u64 n, int k, const dulab::Rational& gamma, u64 X);

// |sum_m w[m] e(alpha (m + 1))| by Horner's rule.
double abs_sum_linear(const std::vector<std::complex<double>>& w, double alpha);

// |sum_m w[m] e(a2 (m + 1)^2 + a1 (m + 1))| by direct evaluation in long double.
double abs_sum_quadratic(const std::vector<std::complex<double>>& w, double a2, double a1);

// Maximum of abs_sum_linear over alpha = i / points.
double grid_max_linear(const std::vector<std::complex<double>>& w, std::size_t points);

// Maximum of |sum_m w[m] e(a2 (m + 1)^2 + a1 (m + 1))| over a2 = i / g2,
// a1 = j / g1; Horner's rule in a1 for each a2 row.
double grid_max_quadratic(const std::vector<std::complex<double>>& w, std::size_t g2, std::size_t g1);

// Split-path edge test, written independently of the library.
bool edge(const dulab::Configuration& cfg, std::size_t a, std::size_t b, u64 p, u64 q,
          const dulab::PathTolerance& tol);

struct Path {
  std::vector<std::size_t> nodes;
  std::vector<u64> p, q;
  friend bool operator<(const Path& x, const Path& y) {
    if (x.nodes != y.nodes) return x.nodes < y.nodes;
    if (x.p != y.p) return x.p < y.p;
    return x.q < y.q;
  }
  friend bool operator==(const Path&, const Path&) = default;
};

// Every length-k path with pairwise distinct primes, by enumerating all node
// and prime sequences; sorted. Pools must be disjoint and free of repeats.
std::vector<Path> all_paths(const dulab::Configuration& cfg, const std::vector<u64>& pool1,
                            const std::vector<u64>& pool2, const dulab::PathTolerance& tol, int k);

// Elements surviving repeated deletion of those with fewer than `target`
// edges into the surviving set, recomputed from scratch each round.
std::vector<std::size_t> regular_fixpoint(const dulab::Configuration& cfg, const std::vector<u64>& pool1,
                                          const std::vector<u64>& pool2, const dulab::PathTolerance& tol,
                                          std::size_t target);

}  // namespace oracle
