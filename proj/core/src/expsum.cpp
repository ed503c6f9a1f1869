#include "dulab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "dulab/fft.hpp"
#include "dulab/parallel.hpp"
#include "dulab/rational.hpp"

namespace dulab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTwo53 = 9007199254740992.0;

double wrap_unit(double v) {
  double f = v - std::floor(v);
  if (f >= 1.0) f -= 1.0;
  if (f < 0.0) f = 0.0;
  return f;
}

std::complex<double> unit(double turns) {
  const double a = kTwoPi * turns;
  return {std::cos(a), std::sin(a)};
}

struct KahanComplex {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  void add(std::complex<double> z) {
    double y = z.real() - cre;
    double t = re + y;
    cre = (t - re) - y;
    re = t;
    y = z.imag() - cim;
    t = im + y;
    cim = (t - im) - y;
    im = t;
  }
  std::complex<double> value() const { return {re, im}; }
};

// Exact frac(alpha * m) for a big integer m: alpha = mant * 2^exp.
double frac_product_big(double alpha, const BigInt& m) {
  int exp = 0;
  const double mant = std::frexp(alpha, &exp);  // alpha = mant * 2^exp, mant in [0.5, 1)
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  const int shift = 53 - exp;  // alpha = scaled / 2^shift
  BigInt num = BigInt(static_cast<long>(scaled)) * m;
  if (shift <= 0) return 0.0;
  BigInt modulus = BigInt(1) << shift;
  BigInt r = num % modulus;
  if (r < 0) r += modulus;
  Rational q(r, modulus);
  q.canonicalize();
  return wrap_unit(q.get_d());
}

// frac(sum_j alpha_j m^j) for the phase at offset m = n - x0.
double phase_turns_offset(const PhaseVector& phase, std::int64_t m) {
  double total = 0.0;
  const double am = std::fabs(static_cast<double>(m));
  double power = 1.0;
  bool small = true;
  for (int j = 1; j <= phase.degree(); ++j) {
    power *= am;
    if (power >= kTwo53) small = false;
    const double a = phase.coef(j);
    if (a == 0.0) continue;
    if (small) {
      double mj = 1.0;
      for (int r = 0; r < j; ++r) mj *= static_cast<double>(m);
      total += frac_product(a, mj);
    } else {
      BigInt mj;
      mpz_pow_ui(mj.get_mpz_t(), BigInt(static_cast<long>(m)).get_mpz_t(), static_cast<unsigned long>(j));
      total += frac_product_big(a, mj);
    }
  }
  return wrap_unit(total);
}

// The same polynomial phase written about another integer base point:
// b_j = sum_{i >= j} a_i C(i, j) s^{i-j} with s = new_x0 - x0, reduced mod 1.
PhaseVector rebase(const PhaseVector& phase, std::int64_t new_x0) {
  const int d = phase.degree();
  const BigInt s(static_cast<long>(new_x0 - phase.x0()));
  std::vector<double> coeffs(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) {
    double total = 0.0;
    BigInt binom = 1;  // C(i, j)
    BigInt power = 1;  // s^(i - j)
    for (int i = j; i <= d; ++i) {
      if (i > j) {
        binom = binom * i / (i - j);
        power *= s;
      }
      total += frac_product_big(phase.coef(i), binom * power);
    }
    coeffs[static_cast<std::size_t>(d - j)] = total;
  }
  return PhaseVector(coeffs, new_x0);
}

void require_nonempty(const WeightedWindow& w, const char* who) {
  if (w.weights.empty()) throw DomainError(std::string(who) + ": empty window");
}

// Golden-section maximisation of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

struct GridPeak {
  double value = -1.0;
  std::size_t index = 0;
};

// Largest |FFT| entry in [0, limit), lowest index on ties.
GridPeak fft_peak(const FftBuffer& out, std::size_t limit) {
  GridPeak best;
  for (std::size_t j = 0; j < limit; ++j) {
    const double v = std::abs(out.data()[j]);
    if (v > best.value) {
      best.value = v;
      best.index = j;
    }
  }
  return best;
}

std::size_t grid_size(std::size_t length, int oversample) {
  if (oversample < 2) throw DomainError("sup search: oversample must be >= 2");
  return next_pow2(static_cast<std::size_t>(oversample) * length);
}

}  // namespace

PhaseVector::PhaseVector(std::vector<double> coeffs_high_first, std::int64_t x0)
    : coeffs_(std::move(coeffs_high_first)), x0_(x0) {
  if (coeffs_.empty()) throw DomainError("phase vector: degree must be >= 1");
  for (double& c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("phase vector: non-finite coefficient");
    c = wrap_unit(c);
  }
}

void PhaseVector::set_coef(int j, double v) {
  if (j < 1 || j > degree()) throw DomainError("phase vector: degree index out of range");
  coeffs_[coeffs_.size() - static_cast<std::size_t>(j)] = wrap_unit(v);
}

double phase_at(const PhaseVector& phase, std::int64_t n) { return phase_turns_offset(phase, n - phase.x0()); }

double frac_product(double alpha, double m) {
  const double p = alpha * m;
  const double err = std::fma(alpha, m, -p);
  return wrap_unit((p - std::floor(p)) + err);
}

std::complex<double> eval_expsum(const WeightedWindow& w, const PhaseVector& phase) {
  if (phase.degree() < 1) throw DomainError("eval_expsum: phase degree must be >= 1");
  KahanComplex acc;
  const auto base = static_cast<std::int64_t>(w.x_start) + 1 - phase.x0();
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const auto& a = w.weights[i];
    if (a == std::complex<double>{}) continue;
    acc.add(a * unit(phase_turns_offset(phase, base + static_cast<std::int64_t>(i))));
  }
  return acc.value();
}

SupResult sup_expsum_d1(const WeightedWindow& w, const SupOptions& options) {
  require_nonempty(w, "sup_expsum_d1");
  const std::size_t L = w.weights.size();
  const std::size_t N = grid_size(L, options.oversample);
  FftBuffer in(N), out(N);
  std::copy(w.weights.begin(), w.weights.end(), in.data());
  fft_positive(in, out);
  const std::size_t limit = options.half_range ? N / 2 + 1 : N;
  const GridPeak peak = fft_peak(out, limit);

  const auto x0 = static_cast<std::int64_t>(w.x_start);
  const double step = 1.0 / static_cast<double>(N);
  const double grid_alpha = static_cast<double>(peak.index) * step;
  auto objective = [&](double a) { return std::abs(eval_expsum(w, PhaseVector::linear(a, x0))); };
  const double refined = golden_max(objective, grid_alpha - step, grid_alpha + step, options.refine_tol);

  SupResult r;
  const double v_grid = objective(grid_alpha);
  const double v_ref = objective(refined);
  r.argmax = PhaseVector::linear(v_ref > v_grid ? refined : grid_alpha, x0);
  r.value = std::max(v_ref, v_grid);
  r.grid_spacing = step;
  r.error_bound = kTwoPi * w.abs_sum() * static_cast<double>(L) * step;
  return r;
}

std::uint64_t minimal_poly_budget(std::uint64_t length, int d) {
  long double total = 1.0L;
  for (int j = 2; j <= d; ++j) total *= std::ceil(std::pow(static_cast<long double>(length), j));
  if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(total);
}

SupResult sup_expsum_poly(const WeightedWindow& w, int d, std::uint64_t budget, const SupOptions& options,
                          std::optional<std::int64_t> x0_opt) {
  require_nonempty(w, "sup_expsum_poly");
  if (d < 2 || d > options.degree_cap)
    throw DomainError("sup_expsum_poly: degree must lie in [2, " + std::to_string(options.degree_cap) + "]");
  const std::size_t L = w.weights.size();
  const std::int64_t x0 = x0_opt.value_or(static_cast<std::int64_t>(w.x_start));
  const std::int64_t m_first = static_cast<std::int64_t>(w.x_start) + 1 - x0;
  const std::int64_t m_last = m_first + static_cast<std::int64_t>(L) - 1;
  const double m_max = std::max(std::fabs(static_cast<double>(m_first)), std::fabs(static_cast<double>(m_last)));

  const std::uint64_t minimal = minimal_poly_budget(L, d);
  if (budget < minimal)
    throw BudgetError("sup_expsum_poly: budget " + std::to_string(budget) + " below minimal feasible budget " +
                          std::to_string(minimal),
                      minimal);

  // Finest c in {1/16, ..., 1} whose outer grid fits the budget.
  std::vector<std::uint64_t> counts;
  for (int shift = 4; shift >= 0; --shift) {
    const double c = std::ldexp(1.0, -shift);
    std::vector<std::uint64_t> trial;
    long double total = 1.0L;
    for (int j = d; j >= 2; --j) {
      const auto cnt = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(L), j) / c));
      trial.push_back(cnt);
      total *= static_cast<long double>(cnt);
    }
    if (total <= static_cast<long double>(budget)) {
      counts = std::move(trial);
      break;
    }
  }
  std::vector<double> spacing;
  for (auto c : counts) spacing.push_back(1.0 / static_cast<double>(c));

  std::uint64_t outer_total = 1;
  for (auto c : counts) outer_total *= c;

  const std::size_t N = grid_size(L, options.oversample);
  const std::size_t limit = N;

  auto outer_coords = [&](std::uint64_t idx) {
    std::vector<double> coords(counts.size());
    for (std::size_t t = counts.size(); t-- > 0;) {
      coords[t] = static_cast<double>(idx % counts[t]) * spacing[t];
      idx /= counts[t];
    }
    return coords;  // degrees d..2
  };

  // Fixed chunking keeps the reduction independent of the worker count.
  const std::uint64_t chunks = std::min<std::uint64_t>(outer_total, 256);
  struct ChunkBest {
    double value = -1.0;
    std::uint64_t outer = 0;
    std::size_t inner = 0;
  };
  std::vector<ChunkBest> best(chunks);
  parallel_for(chunks, options.workers, [&](std::size_t c) {
    const std::uint64_t lo = outer_total * c / chunks;
    const std::uint64_t hi = outer_total * (c + 1) / chunks;
    FftBuffer in(N), out(N);
    PhaseVector nonlinear(std::vector<double>(static_cast<std::size_t>(d), 0.0), x0);
    ChunkBest local;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      const auto coords = outer_coords(idx);
      for (int j = d; j >= 2; --j) nonlinear.set_coef(j, coords[static_cast<std::size_t>(d - j)]);
      for (std::size_t i = 0; i < L; ++i)
        in.data()[i] = w.weights[i] * unit(phase_turns_offset(nonlinear, m_first + static_cast<std::int64_t>(i)));
      fft_positive(in, out);
      const GridPeak peak = fft_peak(out, limit);
      if (peak.value > local.value) local = {peak.value, idx, peak.index};
    }
    best[c] = local;
  });
  ChunkBest top;
  for (const auto& b : best)
    if (b.value > top.value) top = b;

  // FFT index j corresponds to alpha1 = j/N over offsets i = n - x_start - 1;
  // the modulus does not depend on the linear shift to x0.
  std::vector<double> coeffs = outer_coords(top.outer);
  coeffs.push_back(static_cast<double>(top.inner) / static_cast<double>(N));
  PhaseVector grid_point(coeffs, x0);
  const double v_grid = std::abs(eval_expsum(w, grid_point));

  // Coordinate descent about the window midpoint, where the coefficients of
  // different degrees are nearly uncorrelated.
  const std::int64_t centre = static_cast<std::int64_t>(w.x_start) + 1 + static_cast<std::int64_t>((L - 1) / 2);
  const double shift = std::fabs(static_cast<double>(centre - x0));
  std::vector<double> cell(static_cast<std::size_t>(d) + 1, 0.0);  // cell[j] in the original basis
  cell[1] = 1.0 / static_cast<double>(N);
  for (int j = 2; j <= d; ++j) cell[static_cast<std::size_t>(j)] = spacing[static_cast<std::size_t>(d - j)];
  std::vector<double> window(static_cast<std::size_t>(d) + 1, 0.0);
  for (int j = 1; j <= d; ++j) {
    double h = 0.0, binom = 1.0;
    for (int i = j; i <= d; ++i) {
      if (i > j) binom = binom * i / (i - j);
      h += binom * std::pow(shift, i - j) * cell[static_cast<std::size_t>(i)];
    }
    window[static_cast<std::size_t>(j)] = std::min(h, 0.5);
  }

  PhaseVector current = rebase(grid_point, centre);
  double v_cur = std::abs(eval_expsum(w, current));
  for (int sweep = 0; sweep < 8; ++sweep) {
    const double before = v_cur;
    for (int j = d; j >= 1; --j) {
      const double h = window[static_cast<std::size_t>(j)];
      const double mid = current.coef(j);
      auto objective = [&](double a) {
        PhaseVector trial = current;
        trial.set_coef(j, a);
        return std::abs(eval_expsum(w, trial));
      };
      const double cand = golden_max(objective, mid - h, mid + h, options.refine_tol);
      const double v = objective(cand);
      if (v > v_cur) {
        current.set_coef(j, cand);
        v_cur = v;
      }
    }
    if (v_cur - before <= 1e-12 * std::max(1.0, v_cur)) break;
  }
  current = rebase(current, x0);
  v_cur = std::abs(eval_expsum(w, current));
  if (v_cur < v_grid) {
    current = grid_point;
    v_cur = v_grid;
  }

  SupResult r;
  r.argmax = current;
  r.value = v_cur;
  r.grid_spacing = 1.0 / static_cast<double>(N);
  r.outer_spacing = spacing;
  double lip = m_max / static_cast<double>(N);
  for (int j = d; j >= 2; --j) lip += std::pow(m_max, j) * spacing[static_cast<std::size_t>(d - j)];
  r.error_bound = kTwoPi * w.abs_sum() * lip;
  return r;
}

std::string sup_result_json(const SupResult& r) {
  nlohmann::json j;
  j["alpha"] = r.argmax.coeffs();
  j["value"] = r.value;
  j["grid_spacing"] = r.grid_spacing;
  j["error_bound"] = r.error_bound;
  return j.dump();
}

}  // namespace dulab
