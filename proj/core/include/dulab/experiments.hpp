#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dulab/approximant.hpp"
#include "dulab/expsum.hpp"
#include "dulab/freq_algebra.hpp"
#include "dulab/ramare.hpp"
#include "dulab/sieve.hpp"

namespace dulab {

// `count` H-separated window starts drawn from [lo, hi] by a counter-based
// generator, returned ascending. Throws DomainError when count * H exceeds
// the range or the sampler cannot place every point.
std::vector<std::uint64_t> sample_separated(std::uint64_t lo, std::uint64_t hi, std::uint64_t H,
                                            std::uint64_t count, std::uint64_t seed);

// Prime table large enough to factor every window up to `top`.
PrimeTable prime_table_for(std::uint64_t top);

// ---------------------------------------------------------------------------

struct UniformityOptions {
  int d = 1;
  std::uint64_t budget = 0;  // d >= 2 outer-grid budget; 0 = minimal feasible
  int oversample = 8;
  int workers = 1;
  double epsilon = 0.5;  // Omega condition of S
  // Applied to each window after construction (tests: scaling, zeroing).
  std::function<void(WeightedWindow&)> transform;
};

struct UniformityRow {
  std::uint64_t x = 0;
  std::int64_t x0 = 0;
  double sup_value = 0.0;
  double error_bound = 0.0;
  double normalized = 0.0;
  PhaseVector argmax;
};

struct UniformityReport {
  Params params;
  WeightKind kind = WeightKind::Diff;
  std::uint64_t seed = 0;
  int d = 1;
  std::vector<UniformityRow> per_x;  // ascending x
  double mean_normalized = 0.0;
  bool x0_search_flagged = false;  // d >= 2: x0 in {x, x + H/2, x + H} only
};

// Draws H-separated x from [X, 2X - H], builds (x, x + H] weights of `kind`,
// and records sup |sum a_n e(P(n))| / (H log^{k-1} X). kind = Synthetic gives
// zero weights (before `transform`).
UniformityReport uniformity_average(const Params& params, WeightKind kind, std::uint64_t samples,
                                    std::uint64_t seed, const PrimeTable& pt, const UniformityOptions& options = {});

// ---------------------------------------------------------------------------

// Greedy, by descending normalized sup (ties: smaller x): keep rows above
// threshold that are at least H from every kept row. Frequencies are the exact
// values of the argmax coefficients, modulo 1.
Configuration discretize(const std::vector<UniformityRow>& rows, double threshold, std::uint64_t H);

struct DominantFrequency {
  PhaseVector alpha;
  double value = 0.0;
};

struct DominantOptions {
  int d = 1;
  int oversample = 8;
  std::vector<double> merge_radius;  // per degree, high first; default 2 / L^j
};

// Grid points with |S| >= threshold * normalization, merged by single linkage
// under per-degree circular distance; one representative (largest value) per
// cluster, ordered by decreasing value.
std::vector<DominantFrequency> dominant_frequencies(const WeightedWindow& w, double threshold,
                                                    const DominantOptions& options = {});

// ---------------------------------------------------------------------------

struct CorrelationRow {
  std::int64_t h = 0;
  BigInt sum;  // sum_{x<n<=x+H} tau_k(n) tau_k(n+h)
  double normalized = 0.0;
};

struct CorrelationReport {
  std::uint64_t x = 0, H = 0, X = 0;
  int k = 2;
  std::uint64_t h_max = 0;
  double delta = 0.0;
  double median = 0.0;
  std::vector<CorrelationRow> per_h;  // h = -h_max..h_max
  std::vector<std::int64_t> exceptional_h;
};

// Window (x - h_max, x + H + h_max] around the scanned (x, x + H].
FactoredWindow correlation_window(std::uint64_t x, std::uint64_t H, std::uint64_t h_max, const PrimeTable& pt,
                                  std::uint64_t X);

// `fw` must be a correlation_window; H = fw.length() - 2 h_max and h_max <= H.
CorrelationReport correlation_scan(const FactoredWindow& fw, int k, std::uint64_t h_max, double delta);

// ---------------------------------------------------------------------------

struct ExceptionalRow {
  std::uint64_t x = 0;
  double sum = 0.0;  // sum of tau_k + tau_k^* over (x, x + H]
  double normalized = 0.0;
  bool flagged = false;
};

struct ExceptionalReport {
  std::vector<ExceptionalRow> rows;
  std::vector<std::uint64_t> flagged;
  double fraction = 0.0;
};

ExceptionalReport exceptional_set(std::uint64_t X, std::uint64_t H, int k, const Rational& gamma, double C_bound,
                                  std::uint64_t samples, std::uint64_t seed, const PrimeTable& pt, int workers = 1);

// ---------------------------------------------------------------------------

enum class ShiuFunction { One, TauK };

struct ShiuReport {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double prime_sum = 0.0;        // sum over tabulated primes p <= min(limit, 2X), p not | q
  double tail_estimate = 0.0;    // Mertens estimate for limit < p <= 2X
  double tail_remainder = 0.0;   // bound on the error of that estimate
  std::uint64_t table_limit = 0;
};

inline constexpr double kMertensConstant = 0.2614972128;

// Sum of f(n) over n = a mod q in the window, divided by
// (H / (phi(q) log X)) exp(sum_{p <= 2X, p not | q} f(p) / p).
ShiuReport shiu_ratio(const FactoredWindow& fw, int k, std::uint64_t q, std::uint64_t a, ShiuFunction f,
                      const PrimeTable& pt, double guard_eps = 0.1);

// ---------------------------------------------------------------------------

// ((x + h)^{1+iT} - x^{1+iT}) / ((1 + iT) h), evaluated without cancellation.
std::complex<double> phase_integral_mean(double x, double h, double T);

// |h_s^{-1} sum_short a_n chi(n) n^{iT} - I(x, h_s, T) h_l^{-1} sum_long a_n chi(n)|.
// Both windows start at the same x and the short one is a prefix of the long.
double long_short_compare(const WeightedWindow& short_w, const WeightedWindow& long_w, const CharacterSpec& chi,
                          double T);

// |sum_{n = a mod q} (1_S tau_k - tau_k^*) n^{iT}| / (h log^{k-1} X) over the window.
double major_arc_compare(const FactoredWindow& fw, const Params& params, std::uint64_t q, std::uint64_t a, double T,
                         std::uint64_t q_max = 20, double epsilon = 0.5);

// ---------------------------------------------------------------------------
// Emission. CSV rows use 17 significant digits; JSON keys are sorted.

void write_uniformity_csv(std::ostream& os, const UniformityReport& r);
std::string uniformity_summary_json(const UniformityReport& r);
void write_correlation_csv(std::ostream& os, const CorrelationReport& r);
std::string correlation_summary_json(const CorrelationReport& r);
void write_exceptional_csv(std::ostream& os, const ExceptionalReport& r);

extern const char* const kUniformityCsvHeader;
extern const char* const kCorrelationCsvHeader;
extern const char* const kExceptionalCsvHeader;

}  // namespace dulab
