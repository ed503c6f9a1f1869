#include "dulab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "dulab/fft.hpp"
#include "dulab/format.hpp"
#include "dulab/parallel.hpp"
#include "dulab/rng.hpp"

namespace dulab {

using u64 = std::uint64_t;
using json = nlohmann::json;

const char* const kUniformityCsvHeader = "x,x0,sup_value,error_bound,normalized,alpha";
const char* const kCorrelationCsvHeader = "h,sum,normalized";
const char* const kExceptionalCsvHeader = "x,sum,normalized,flagged";

std::vector<u64> sample_separated(u64 lo, u64 hi, u64 H, u64 count, u64 seed) {
  if (count == 0) return {};
  if (hi < lo) throw DomainError("sampler: empty range");
  if (H == 0) throw DomainError("sampler: separation must be >= 1");
  const u64 span = hi - lo;
  const long double need = static_cast<long double>(count - 1) * static_cast<long double>(H);
  if (need > static_cast<long double>(span))
    throw DomainError("sampler: cannot place " + std::to_string(count) + " points " + std::to_string(H) +
                      " apart in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  // Sorted uniform offsets in the compressed range, then re-expanded by H per rank.
  const u64 compressed = span - (count - 1) * H;
  CounterRng rng(seed, 0x5a3b1e);
  std::vector<u64> y(count);
  for (auto& v : y) v = rng.below(compressed + 1);
  std::sort(y.begin(), y.end());
  std::vector<u64> out(count);
  for (u64 i = 0; i < count; ++i) out[i] = lo + y[i] + i * H;
  return out;
}

PrimeTable prime_table_for(u64 top) { return PrimeTable::build(std::max<u64>(2, isqrt(top) + 1)); }

// ---------------------------------------------------------------------------

namespace {

WeightedWindow window_for(u64 x, const Params& params, WeightKind kind, const PrimeTable& pt, double epsilon) {
  if (kind == WeightKind::Synthetic) {
    WeightedWindow w = WeightedWindow::synthetic(x, std::vector<std::complex<double>>(params.H),
                                                 normalization_for(params.H, params.X, params.k));
    w.ambient_scale = params.X;
    return w;
  }
  const FactoredWindow fw = factor_window(x, params.H, pt, params.X);
  WindowOptions wo;
  wo.epsilon = epsilon;
  return build_weighted_window(fw, kind, params, wo);
}

double circular_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string join_alpha(const PhaseVector& p) {
  std::string s;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) s += ';';
    s += format_real(p.coeffs()[i]);
  }
  return s;
}

json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : to_key_values(p)) j[k] = v;
  return j;
}

}  // namespace

UniformityReport uniformity_average(const Params& params, WeightKind kind, u64 samples, u64 seed,
                                    const PrimeTable& pt, const UniformityOptions& options) {
  if (samples < 1) throw DomainError("uniformity_average: samples must be >= 1");
  if (static_cast<long double>(samples) * params.H > static_cast<long double>(params.X))
    throw DomainError("uniformity_average: samples * H exceeds X, windows cannot be H-separated");
  if (params.X < params.H) throw DomainError("uniformity_average: H exceeds X");
  if (options.d < 1) throw DomainError("uniformity_average: degree must be >= 1");

  UniformityReport rep;
  rep.params = params;
  rep.kind = kind;
  rep.seed = seed;
  rep.d = options.d;
  rep.x0_search_flagged = options.d >= 2;
  const auto xs = sample_separated(params.X, 2 * params.X - params.H, params.H, samples, seed);

  SupOptions so;
  so.oversample = options.oversample;
  rep.per_x = parallel_map<UniformityRow>(xs.size(), options.workers, [&](std::size_t i) {
    WeightedWindow w = window_for(xs[i], params, kind, pt, options.epsilon);
    if (options.transform) options.transform(w);
    UniformityRow row;
    row.x = xs[i];
    if (options.d == 1) {
      const SupResult r = sup_expsum_d1(w, so);
      row.x0 = r.argmax.x0();
      row.sup_value = r.value;
      row.error_bound = r.error_bound;
      row.argmax = r.argmax;
    } else {
      const u64 budget = options.budget ? options.budget : minimal_poly_budget(w.length, options.d);
      bool first = true;
      for (u64 off : {u64{0}, params.H / 2, params.H}) {
        const auto x0 = static_cast<std::int64_t>(xs[i] + off);
        const SupResult r = sup_expsum_poly(w, options.d, budget, so, x0);
        if (first || r.value > row.sup_value) {
          row.x0 = x0;
          row.sup_value = r.value;
          row.error_bound = r.error_bound;
          row.argmax = r.argmax;
        }
        first = false;
      }
    }
    row.normalized = row.sup_value / w.normalization;
    return row;
  });
  double total = 0.0;
  for (const auto& r : rep.per_x) total += r.normalized;
  rep.mean_normalized = total / static_cast<double>(rep.per_x.size());
  return rep;
}

// ---------------------------------------------------------------------------

Configuration discretize(const std::vector<UniformityRow>& rows, double threshold, u64 H) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a].normalized != rows[b].normalized) return rows[a].normalized > rows[b].normalized;
    return rows[a].x < rows[b].x;
  });
  std::vector<ConfigElement> kept;
  for (std::size_t idx : order) {
    const auto& r = rows[idx];
    if (!(r.normalized > threshold)) continue;
    bool far = true;
    for (const auto& e : kept) {
      const u64 gap = static_cast<u64>(e.x) > r.x ? static_cast<u64>(e.x) - r.x : r.x - static_cast<u64>(e.x);
      if (gap < H) {
        far = false;
        break;
      }
    }
    if (!far) continue;
    std::vector<Rational> coords;
    for (double c : r.argmax.coeffs()) coords.push_back(from_double(c));
    kept.push_back({static_cast<std::int64_t>(r.x), TorusFrequency(1, std::move(coords))});
  }
  std::sort(kept.begin(), kept.end(), [](const ConfigElement& a, const ConfigElement& b) { return a.x < b.x; });
  return Configuration(H, std::move(kept), threshold);
}

std::vector<DominantFrequency> dominant_frequencies(const WeightedWindow& w, double threshold,
                                                    const DominantOptions& options) {
  if (!(threshold > 0)) throw DomainError("dominant_frequencies: threshold must be positive");
  if (w.weights.empty()) return {};
  const int d = options.d;
  if (d < 1 || d > kDefaultDegreeCap) throw DomainError("dominant_frequencies: degree must lie in [1, 3]");
  if (options.oversample < 2) throw DomainError("dominant_frequencies: oversample must be >= 2");
  const std::size_t L = w.weights.size();
  std::vector<double> radius = options.merge_radius;
  if (radius.empty())
    for (int j = d; j >= 1; --j) radius.push_back(2.0 / std::pow(static_cast<double>(L), j));
  if (radius.size() != static_cast<std::size_t>(d))
    throw DomainError("dominant_frequencies: merge_radius needs one entry per degree");

  const std::size_t N = next_pow2(static_cast<std::size_t>(options.oversample) * L);
  const double cutoff = threshold * w.normalization;
  const auto x0 = static_cast<std::int64_t>(w.x_start);

  std::vector<u64> counts;  // outer grid, degrees d..2
  u64 outer_total = 1;
  for (int j = d; j >= 2; --j) {
    counts.push_back(static_cast<u64>(std::ceil(std::pow(static_cast<double>(L), j))));
    outer_total *= counts.back();
  }

  struct Point {
    std::vector<double> alpha;  // high first
    double value;
  };
  std::vector<Point> points;
  FftBuffer in(N), out(N);
  PhaseVector nonlinear(std::vector<double>(static_cast<std::size_t>(d), 0.0), x0);
  for (u64 idx = 0; idx < outer_total; ++idx) {
    std::vector<double> coords(counts.size());
    u64 rest = idx;
    for (std::size_t t = counts.size(); t-- > 0;) {
      coords[t] = static_cast<double>(rest % counts[t]) / static_cast<double>(counts[t]);
      rest /= counts[t];
    }
    in.zero();
    if (d >= 2) {
      for (int j = d; j >= 2; --j) nonlinear.set_coef(j, coords[static_cast<std::size_t>(d - j)]);
      for (std::size_t i = 0; i < L; ++i)
        in.data()[i] = w.weights[i] * std::polar(1.0, 2.0 * std::numbers::pi *
                                                          phase_at(nonlinear, static_cast<std::int64_t>(w.n_at(i))));
    } else {
      std::copy(w.weights.begin(), w.weights.end(), in.data());
    }
    fft_positive(in, out);
    for (std::size_t j = 0; j < N; ++j) {
      const double v = std::abs(out.data()[j]);
      if (v >= cutoff) {
        Point pt{coords, v};
        pt.alpha.push_back(static_cast<double>(j) / static_cast<double>(N));
        points.push_back(std::move(pt));
        if (points.size() > 200000)
          throw DomainError("dominant_frequencies: more than 2e5 grid points above threshold; raise it");
      }
    }
  }

  DisjointSets ds(points.size());
  auto close = [&](const Point& a, const Point& b) {
    for (std::size_t t = 0; t < a.alpha.size(); ++t)
      if (circular_distance(a.alpha[t], b.alpha[t]) > radius[t]) return false;
    return true;
  };
  if (d == 1) {
    // Points are generated in ascending alpha; link neighbours and the wrap.
    for (std::size_t i = 1; i < points.size(); ++i)
      if (close(points[i - 1], points[i])) ds.unite(i - 1, i);
    if (points.size() > 1 && close(points.front(), points.back())) ds.unite(0, points.size() - 1);
  } else {
    for (std::size_t a = 0; a < points.size(); ++a)
      for (std::size_t b = a + 1; b < points.size(); ++b)
        if (close(points[a], points[b])) ds.unite(a, b);
  }
  std::vector<std::size_t> best(points.size(), SIZE_MAX);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t root = ds.find(i);
    if (best[root] == SIZE_MAX || points[i].value > points[best[root]].value) best[root] = i;
  }
  std::vector<DominantFrequency> reps;
  for (std::size_t r = 0; r < points.size(); ++r) {
    if (best[r] == SIZE_MAX) continue;
    const Point& p = points[best[r]];
    reps.push_back({PhaseVector(p.alpha, x0), p.value});
  }
  std::stable_sort(reps.begin(), reps.end(),
                   [](const DominantFrequency& a, const DominantFrequency& b) { return a.value > b.value; });
  return reps;
}

// ---------------------------------------------------------------------------

FactoredWindow correlation_window(u64 x, u64 H, u64 h_max, const PrimeTable& pt, u64 X) {
  if (h_max > H) throw DomainError("correlation_window: h_max exceeds H");
  if (x <= h_max) throw DomainError("correlation_window: x must exceed h_max");
  return factor_window(x - h_max, H + 2 * h_max, pt, X);
}

CorrelationReport correlation_scan(const FactoredWindow& fw, int k, u64 h_max, double delta) {
  if (fw.length() < 2 * h_max) throw DomainError("correlation_scan: window shorter than 2 h_max");
  const u64 H = fw.length() - 2 * h_max;
  if (h_max > H) throw DomainError("correlation_scan: h_max exceeds H");
  if (H == 0) throw DomainError("correlation_scan: empty window");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("correlation_scan: delta must lie in (0, 1]");

  CorrelationReport rep;
  rep.x = fw.x_start() + h_max;
  rep.H = H;
  rep.X = fw.ambient_scale();
  rep.k = k;
  rep.h_max = h_max;
  rep.delta = delta;

  std::vector<u64> tau(fw.length());
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = tau_k(fw.factors_at(i), k);
  const double norm = static_cast<double>(H) * std::pow(std::log(static_cast<double>(rep.X)), 2 * k - 2);
  const auto hm = static_cast<std::int64_t>(h_max);
  for (std::int64_t h = -hm; h <= hm; ++h) {
    BigInt sum = 0;
    for (u64 i = h_max; i < h_max + H; ++i) {
      const u64 a = tau[i];
      const u64 b = tau[static_cast<std::size_t>(static_cast<std::int64_t>(i) + h)];
      const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
      BigInt term = from_u64(static_cast<u64>(prod >> 64));
      term <<= 64;
      term += from_u64(static_cast<u64>(prod));
      sum += term;
    }
    CorrelationRow row;
    row.h = h;
    row.normalized = Rational(sum).get_d() / norm;
    row.sum = std::move(sum);
    rep.per_h.push_back(std::move(row));
  }
  std::vector<double> vals;
  for (const auto& r : rep.per_h) vals.push_back(r.normalized);
  rep.median = median_of(vals);
  for (const auto& r : rep.per_h)
    if (r.normalized > rep.median / delta) rep.exceptional_h.push_back(r.h);
  return rep;
}

// ---------------------------------------------------------------------------

ExceptionalReport exceptional_set(u64 X, u64 H, int k, const Rational& gamma, double C_bound, u64 samples, u64 seed,
                                  const PrimeTable& pt, int workers) {
  if (samples < 1) throw DomainError("exceptional_set: samples must be >= 1");
  if (H < 1 || H > X) throw DomainError("exceptional_set: need 1 <= H <= X");
  const auto xs = sample_separated(X, 2 * X - H, H, samples, seed);
  const Approximant ap(k, gamma, X);
  const double norm = normalization_for(H, X, k);
  ExceptionalReport rep;
  rep.rows = parallel_map<ExceptionalRow>(xs.size(), workers, [&](std::size_t i) {
    const FactoredWindow fw = factor_window(xs[i], H, pt, X);
    Rational sum = 0;
    for (std::size_t n = 0; n < fw.length(); ++n) {
      const auto f = fw.factors_at(n);
      sum += Rational(from_u64(tau_k(f, k))) + ap.value(f);
    }
    ExceptionalRow row;
    row.x = xs[i];
    row.sum = sum.get_d();
    row.normalized = row.sum / norm;
    row.flagged = row.normalized > C_bound;
    return row;
  });
  for (const auto& r : rep.rows)
    if (r.flagged) rep.flagged.push_back(r.x);
  rep.fraction = static_cast<double>(rep.flagged.size()) / static_cast<double>(rep.rows.size());
  return rep;
}

// ---------------------------------------------------------------------------

ShiuReport shiu_ratio(const FactoredWindow& fw, int k, u64 q, u64 a, ShiuFunction f, const PrimeTable& pt,
                      double guard_eps) {
  const u64 H = fw.length();
  const u64 X = fw.ambient_scale();
  if (q < 1) throw DomainError("shiu_ratio: q must be >= 1");
  if (H < 2 || static_cast<double>(q) > std::pow(static_cast<double>(H), 1.0 - guard_eps))
    throw DomainError("shiu_ratio: q = " + std::to_string(q) + " exceeds H^(1 - " + format_real(guard_eps) + ")");
  if (X < 3) throw DomainError("shiu_ratio: ambient scale must be >= 3");

  u64 phi = q;
  {
    u64 m = q;
    for (u64 p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      phi = phi / p * (p - 1);
      while (m % p == 0) m /= p;
    }
    if (m > 1) phi = phi / m * (m - 1);
  }
  const double fp = f == ShiuFunction::One ? 1.0 : static_cast<double>(k);

  ShiuReport rep;
  for (std::size_t i = 0; i < H; ++i) {
    if (fw.n_at(i) % q != a % q) continue;
    rep.numerator += f == ShiuFunction::One ? 1.0 : static_cast<double>(tau_k(fw.factors_at(i), k));
  }
  const double two_x = 2.0 * static_cast<double>(X);
  const u64 top = std::min<u64>(pt.limit(), 2 * X);
  for (u64 p : pt.primes_in(1, top))
    if (q % p != 0) rep.prime_sum += fp / static_cast<double>(p);
  rep.table_limit = pt.limit();
  if (static_cast<double>(top) < two_x) {
    const double lt = std::log(static_cast<double>(std::max<u64>(top, 2)));
    const double lx = std::log(two_x);
    rep.tail_estimate = fp * (std::log(lx) - std::log(lt));
    rep.tail_remainder = fp * (1.0 / (lt * lt) + 1.0 / (lx * lx));
  }
  rep.denominator = static_cast<double>(H) / (static_cast<double>(phi) * std::log(static_cast<double>(X))) *
                    std::exp(rep.prime_sum + rep.tail_estimate);
  rep.ratio = rep.numerator / rep.denominator;
  return rep;
}

// ---------------------------------------------------------------------------

std::complex<double> phase_integral_mean(double x, double h, double T) {
  if (!(x > 0.0) || !(h > 0.0)) throw DomainError("phase integral: need x > 0 and h > 0");
  const double l1 = std::log1p(h / x);
  const double re = l1, im = T * l1;
  const double s = std::sin(0.5 * im);
  const std::complex<double> em1(std::expm1(re) * std::cos(im) - 2.0 * s * s, std::exp(re) * std::sin(im));
  const double x_round = std::nearbyint(x);
  const double theta = (x_round == x && x < 1.8e19) ? phase_t_log(T, static_cast<u64>(x))
                                                    : std::fmod(T * std::log(x), 2.0 * std::numbers::pi);
  return (x / h) * std::polar(1.0, theta) * em1 / std::complex<double>(1.0, T);
}

double long_short_compare(const WeightedWindow& short_w, const WeightedWindow& long_w, const CharacterSpec& chi,
                          double T) {
  if (short_w.x_start != long_w.x_start) throw DomainError("long_short_compare: windows must start at the same x");
  if (short_w.length == 0 || short_w.length > long_w.length)
    throw DomainError("long_short_compare: need 0 < h_short <= h_long");
  const u64 X = long_w.ambient_scale;
  if (X != 0 && (long_w.x_start < X || long_w.x_start + long_w.length > 2 * X))
    throw DomainError("long_short_compare: windows must lie inside [X, 2X]");
  const double hs = static_cast<double>(short_w.length);
  const double hl = static_cast<double>(long_w.length);
  const std::complex<double> short_avg = twisted_sum(short_w, chi, T) / hs;
  const std::complex<double> long_avg = twisted_sum(long_w, chi, 0.0) / hl;
  const std::complex<double> integral = phase_integral_mean(static_cast<double>(short_w.x_start), hs, T);
  return std::abs(short_avg - integral * long_avg);
}

double major_arc_compare(const FactoredWindow& fw, const Params& params, u64 q, u64 a, double T, u64 q_max,
                         double epsilon) {
  if (q < 1 || q > q_max)
    throw DomainError("major_arc_compare: q must lie in [1, " + std::to_string(q_max) + "]");
  if (fw.length() == 0) return 0.0;
  WindowOptions wo;
  wo.epsilon = epsilon;
  const WeightedWindow w = build_weighted_window(fw, WeightKind::SDiff, params, wo);
  const auto s = twisted_sum(w, CharacterSpec::principal_mod(1), T, std::make_pair(a % q, q));
  return std::abs(s) / w.normalization;
}

// ---------------------------------------------------------------------------

void write_uniformity_csv(std::ostream& os, const UniformityReport& r) {
  os << kUniformityCsvHeader << '\n';
  for (const auto& row : r.per_x)
    os << row.x << ',' << row.x0 << ',' << format_real(row.sup_value) << ',' << format_real(row.error_bound) << ','
       << format_real(row.normalized) << ',' << join_alpha(row.argmax) << '\n';
}

std::string uniformity_summary_json(const UniformityReport& r) {
  json j;
  j["params"] = params_json(r.params);
  j["seed"] = r.seed;
  json agg;
  agg["kind"] = to_string(r.kind);
  agg["d"] = r.d;
  agg["samples"] = r.per_x.size();
  agg["mean_normalized"] = format_real(r.mean_normalized);
  if (r.x0_search_flagged) agg["x0_search"] = "x, x+H/2, x+H";
  j["aggregates"] = std::move(agg);
  return j.dump();
}

void write_correlation_csv(std::ostream& os, const CorrelationReport& r) {
  os << kCorrelationCsvHeader << '\n';
  for (const auto& row : r.per_h) os << row.h << ',' << row.sum.get_str() << ',' << format_real(row.normalized) << '\n';
}

std::string correlation_summary_json(const CorrelationReport& r) {
  json j;
  j["params"] = {{"x", r.x}, {"H", r.H}, {"X", r.X}, {"k", r.k}, {"h_max", r.h_max}, {"delta", format_real(r.delta)}};
  j["aggregates"] = {{"median_normalized", format_real(r.median)}, {"exceptional_h", r.exceptional_h}};
  return j.dump();
}

void write_exceptional_csv(std::ostream& os, const ExceptionalReport& r) {
  os << kExceptionalCsvHeader << '\n';
  for (const auto& row : r.rows)
    os << row.x << ',' << format_real(row.sum) << ',' << format_real(row.normalized) << ',' << (row.flagged ? 1 : 0)
       << '\n';
}

}  // namespace dulab
