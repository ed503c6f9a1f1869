#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dulab/error.hpp"
#include "dulab/ramare.hpp"

namespace dulab {

// Polynomial phase sum_j alpha^{(j)} (n - x0)^j. Coefficients are stored
// highest degree first, (alpha^{(d)}, ..., alpha^{(1)}), each reduced to [0,1).
class PhaseVector {
 public:
  PhaseVector() = default;
  PhaseVector(std::vector<double> coeffs_high_first, std::int64_t x0);

  int degree() const { return static_cast<int>(coeffs_.size()); }
  std::int64_t x0() const { return x0_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coef(int j) const { return coeffs_[coeffs_.size() - static_cast<std::size_t>(j)]; }
  void set_coef(int j, double v);

  static PhaseVector linear(double alpha, std::int64_t x0 = 0) { return PhaseVector({alpha}, x0); }

 private:
  std::vector<double> coeffs_;
  std::int64_t x0_ = 0;
};

inline constexpr int kDefaultDegreeCap = 3;

struct SupResult {
  PhaseVector argmax;
  double value = 0.0;
  double grid_spacing = 0.0;  // inner (degree-1) grid spacing
  double error_bound = 0.0;   // true sup <= value + error_bound
  std::vector<double> outer_spacing;  // degrees d..2 for the polynomial search
};

// sum_n a_n e(phase(n)), Kahan-compensated.
std::complex<double> eval_expsum(const WeightedWindow& w, const PhaseVector& phase);

// frac(sum_j alpha^{(j)} (n - x0)^j), exact in the integer powers.
double phase_at(const PhaseVector& phase, std::int64_t n);

// Fractional part of alpha * m for an integer m < 2^53 with the product error
// folded back in.
double frac_product(double alpha, double m);

struct SupOptions {
  int oversample = 8;
  double refine_tol = 1e-9;
  // Search only alpha in [0, 1/2]; valid for real weights by conjugate symmetry.
  bool half_range = false;
  int degree_cap = kDefaultDegreeCap;
  int workers = 1;
};

// Supremum over alpha of |sum a_n e(alpha (n - x_start))|: FFT grid, argmax
// (lowest index on ties), golden-section refinement within one cell.
SupResult sup_expsum_d1(const WeightedWindow& w, const SupOptions& options = {});
inline SupResult sup_expsum_d1(const WeightedWindow& w, int oversample) {
  SupOptions o;
  o.oversample = oversample;
  return sup_expsum_d1(w, o);
}

// Outer grid over (alpha^{(d)}, ..., alpha^{(2)}) with spacing c / L^j, inner
// FFT sup over alpha^{(1)}, then coordinate descent. L = window length, phases
// are centred at x0 (default x_start). `budget` caps the outer grid size.
SupResult sup_expsum_poly(const WeightedWindow& w, int d, std::uint64_t budget, const SupOptions& options = {},
                          std::optional<std::int64_t> x0 = std::nullopt);

// Minimal budget for which sup_expsum_poly is feasible (coarsest grid, c = 1).
std::uint64_t minimal_poly_budget(std::uint64_t length, int d);

class BudgetError : public DomainError {
 public:
  BudgetError(const std::string& what, std::uint64_t minimal) : DomainError(what), minimal_budget(minimal) {}
  std::uint64_t minimal_budget;
};

// ---------------------------------------------------------------------------
// Dirichlet characters

struct CharacterSpec {
  std::uint64_t q = 1;
  std::vector<std::complex<double>> values;  // chi(a) for a = 0..q-1
  bool principal = true;

  std::complex<double> operator()(std::uint64_t n) const { return values[n % q]; }

  static CharacterSpec principal_mod(std::uint64_t q);
  // The characters mod an odd prime q, indexed by 0 <= index < q-1:
  // chi(g^e) = e(index * e / (q-1)) for the least primitive root g.
  static CharacterSpec mod_prime(std::uint64_t q, std::uint64_t index);
  // Validates zero-iff-non-coprime, unimodularity and complete
  // multiplicativity on residues.
  static CharacterSpec from_values(std::uint64_t q, std::vector<std::complex<double>> values);
};

std::uint64_t least_primitive_root(std::uint64_t q);

// sum a_n chi(n) n^{iT}, optionally restricted to n = a mod m.
std::complex<double> twisted_sum(const WeightedWindow& w, const CharacterSpec& chi, double T,
                                 std::optional<std::pair<std::uint64_t, std::uint64_t>> residue = std::nullopt);

// Phase T ln n reduced mod 2 pi. Switches to 256-bit MPFR reduction when
// |T| ln n >= 2^40.
double phase_t_log(double T, std::uint64_t n);

// ---------------------------------------------------------------------------

struct RationalApprox {
  std::int64_t a = 0;
  std::uint64_t q = 1;
  double err = 0.0;  // alpha - a/q
};

// Best a/q with 1 <= q <= Qmax minimising |alpha - a/q| (ties: smaller q),
// from continued-fraction convergents and intermediate fractions.
RationalApprox diophantine_approx(double alpha, std::uint64_t Qmax);

// JSON: {"alpha": [...], "error_bound", "grid_spacing", "value"}
std::string sup_result_json(const SupResult& r);

}  // namespace dulab
