#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dulab/approximant.hpp"
#include "dulab/error.hpp"
#include "dulab/experiments.hpp"
#include "dulab/expsum.hpp"
#include "dulab/format.hpp"
#include "dulab/freq_algebra.hpp"
#include "dulab/io.hpp"
#include "dulab/parallel.hpp"
#include "dulab/ramare.hpp"
#include "dulab/sieve.hpp"

namespace dulab {

namespace {

using u64 = std::uint64_t;
using json = nlohmann::json;
namespace fs = std::filesystem;

// One subcommand: string-valued options with defaults, overlaid by a config
// file and then by flags given on the command line.
class Command {
 public:
  Command(CLI::App* app, std::function<int(Command&, std::ostream&)> run) : app_(app), run_(std::move(run)) {
    app_->add_option("--config", config_path_, "key=value file; flags given here override it");
  }

  Command& opt(const std::string& name, const std::string& def, const std::string& help) {
    values_[name] = def;
    options_[name] = app_->add_option("--" + name, values_[name], help);
    return *this;
  }

  // Fills unset options from the config file; rejects unknown keys.
  void resolve() {
    if (config_path_.empty()) return;
    for (const auto& [raw, value] : load_config(config_path_)) {
      std::string key = raw;
      if (!options_.contains(key)) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        if (options_.contains(dashed)) key = dashed;
      }
      if (!options_.contains(key)) throw UsageError(config_path_ + ": unknown key '" + raw + "'");
      if (options_.at(key)->count() == 0) values_[key] = value;
    }
  }

  const std::string& str(const std::string& name) const { return values_.at(name); }
  bool has(const std::string& name) const { return !values_.at(name).empty(); }
  u64 u(const std::string& name) const { return parse_u64(str(name), name); }
  std::int64_t i(const std::string& name) const { return parse_i64(str(name), name); }
  double real(const std::string& name) const { return parse_real(str(name), name); }
  int workers() const {
    const auto w = u("workers");
    if (w < 1 || w > 1024) throw DomainError("workers must lie in [1, 1024]");
    return static_cast<int>(w);
  }

  // Worker count is left out so outputs do not depend on it.
  KeyValues resolved() const {
    KeyValues kv;
    for (const auto& [k, v] : values_)
      if (!v.empty() && k != "workers") kv[k] = v;
    kv["subcommand"] = path_;
    return kv;
  }

  CLI::App* app() const { return app_; }
  void set_path(std::string p) { path_ = std::move(p); }
  int run(std::ostream& out) { return run_(*this, out); }

 private:
  CLI::App* app_;
  std::function<int(Command&, std::ostream&)> run_;
  std::string config_path_;
  std::string path_;
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
};

const std::vector<std::string> kOverrideKeys = {"delta",  "delta_exp", "gamma", "omega_exp", "Q0", "Q",
                                                "P1",     "Q1",        "P2",    "Q2",        "P3", "Q3",
                                                "P4",     "Q4",        "v1",    "v2",        "k0", "A_const",
                                                "P",      "Pprime"};

void add_common(Command& c, bool with_output = true) {
  c.opt("workers", "1", "worker threads");
  if (with_output) {
    c.opt("format", "both", "csv | json | both");
    c.opt("out", "", "output path (stdout if empty); JSON goes next to it with a .json extension");
  }
}

void add_params(Command& c, const std::string& X = "", const std::string& H = "") {
  c.opt("X", X, "ambient scale (scientific notation accepted)")
      .opt("H", H, "window length")
      .opt("k", "2", "divisor function order")
      .opt("eta", "0.5", "eta in (0,1)")
      .opt("epsilon", "0.5", "epsilon in the Omega condition of S");
  for (const auto& key : kOverrideKeys) c.opt(key, "", "parameter override");
}

Params params_of(const Command& c) {
  if (!c.has("X") || !c.has("H")) throw UsageError("--X and --H are required");
  ParamOverrides ov;
  for (const auto& key : kOverrideKeys)
    if (c.has(key)) ov[key] = c.str(key);
  const auto k = c.i("k");
  if (k < 2 || k > 64) throw DomainError("k must lie in [2, 64]");
  return derive_params(c.u("X"), c.u("H"), static_cast<int>(k), c.real("eta"), ov);
}

json config_json(const KeyValues& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

// Writes CSV and/or the JSON summary (with the resolved config embedded).
void emit(const Command& c, const std::string& csv, json summary, std::ostream& out) {
  summary["config"] = config_json(c.resolved());
  const std::string fmt = c.str("format");
  if (fmt != "csv" && fmt != "json" && fmt != "both") throw UsageError("--format must be csv, json or both");
  const bool want_csv = fmt != "json";
  const bool want_json = fmt != "csv";
  const std::string js = summary.dump() + "\n";
  if (!c.has("out")) {
    if (want_csv) out << csv;
    if (want_json) out << js;
    return;
  }
  const fs::path path = c.str("out");
  if (want_csv) {
    write_text_file(path, csv);
    if (!want_json) write_text_file(fs::path(path.string() + ".cfg"), format_config(c.resolved()));
  }
  if (want_json) {
    fs::path jpath = path;
    if (want_csv) jpath.replace_extension(".json");
    write_text_file(jpath, js);
  }
}

std::vector<u64> u64_list(const std::string& text, const std::string& what) {
  std::vector<u64> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_u64(item, what));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Window from --weights CSV, or (x, x + H] of --kind built from the params.
WeightedWindow window_of(const Command& c) {
  if (c.has("weights")) {
    std::ifstream in(c.str("weights"), std::ios::binary);
    if (!in) throw DomainError("cannot read " + c.str("weights"));
    return read_window_csv(in);
  }
  if (!c.has("x")) throw UsageError("either --weights or --x (with --X, --H) is required");
  const Params p = params_of(c);
  const u64 x = c.u("x");
  const PrimeTable pt = prime_table_for(x + p.H);
  const FactoredWindow fw = factor_window(x, p.H, pt, p.X);
  WindowOptions wo;
  wo.epsilon = c.real("epsilon");
  if (c.has("prime")) wo.prime_p = c.u("prime");
  return build_weighted_window(fw, parse_weight_kind(c.str("kind")), p, wo);
}

void add_window(Command& c) {
  c.opt("weights", "", "weights CSV (n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q)")
      .opt("x", "", "window start: the window is (x, x + H]")
      .opt("kind", "diff", "tau | tau_star | diff | s_diff | ramare_diff")
      .opt("prime", "", "prime p for ramare_diff");
  add_params(c);
}

// ---------------------------------------------------------------------------

int cmd_sieve(Command& c, std::ostream& out) {
  if (!c.has("x") || !c.has("H")) throw UsageError("--x and --H are required");
  const u64 x = c.u("x");
  const u64 H = c.u("H");
  const u64 X = c.has("X") ? c.u("X") : x;
  PrimeTable pt = [&] {
    if (c.has("prime-cache") && fs::exists(c.str("prime-cache"))) {
      PrimeTable t = PrimeTable::load(c.str("prime-cache"));
      if (t.limit() >= isqrt(x + H)) return t;
    }
    PrimeTable t = prime_table_for(x + H);
    if (c.has("prime-cache")) t.save(c.str("prime-cache"));
    return t;
  }();
  const FactoredWindow fw = factor_window(x, H, pt, X);
  std::ostringstream csv;
  json summary;
  if (c.str("kind") == "factors") {
    csv << "n,factors\n";
    for (std::size_t i = 0; i < fw.length(); ++i) {
      csv << fw.n_at(i) << ',';
      bool first = true;
      for (const auto& pp : fw.factors_at(i)) {
        csv << (first ? "" : " ") << pp.p << '^' << pp.e;
        first = false;
      }
      csv << '\n';
    }
    summary["aggregates"] = {{"count", fw.length()}};
  } else {
    ParamOverrides ov;
    for (const auto& key : kOverrideKeys)
      if (c.has(key)) ov[key] = c.str(key);
    const Params p = derive_params(X, std::max<u64>(H, 2), static_cast<int>(c.i("k")), c.real("eta"), ov);
    WindowOptions wo;
    wo.epsilon = c.real("epsilon");
    if (c.has("prime")) wo.prime_p = c.u("prime");
    const WeightedWindow w = build_weighted_window(fw, parse_weight_kind(c.str("kind")), p, wo);
    write_window_csv(csv, w);
    double sum = 0.0;
    for (const auto& a : w.weights) sum += a.real();
    summary["aggregates"] = {{"count", w.length},
                             {"sum", format_real(sum)},
                             {"abs_sum", format_real(w.abs_sum())},
                             {"zeroed_non_coprime", w.zeroed_non_coprime}};
  }
  emit(c, csv.str(), std::move(summary), out);
  return 0;
}

int cmd_expsum(Command& c, std::ostream& out) {
  const WeightedWindow w = window_of(c);
  if (!c.has("alpha")) throw UsageError("--alpha is required (comma-separated, highest degree first)");
  std::vector<double> coeffs;
  std::stringstream ss(c.str("alpha"));
  for (std::string item; std::getline(ss, item, ',');) coeffs.push_back(parse_real(item, "alpha"));
  const std::int64_t x0 = c.has("x0") ? c.i("x0") : static_cast<std::int64_t>(w.x_start);
  const auto s = eval_expsum(w, PhaseVector(coeffs, x0));
  json j = {{"re", s.real()}, {"im", s.imag()}, {"abs", std::abs(s)}, {"normalized", std::abs(s) / w.normalization}};
  j["config"] = config_json(c.resolved());
  out << j.dump() << "\n";
  return 0;
}

int cmd_sup(Command& c, std::ostream& out) {
  const WeightedWindow w = window_of(c);
  SupOptions so;
  so.oversample = static_cast<int>(c.u("oversample"));
  so.workers = c.workers();
  so.degree_cap = static_cast<int>(c.u("degree-cap"));
  const int d = static_cast<int>(c.u("d"));
  SupResult r;
  if (d == 1) {
    r = sup_expsum_d1(w, so);
  } else {
    const u64 budget = c.has("budget") ? c.u("budget") : minimal_poly_budget(w.length, d);
    std::optional<std::int64_t> x0;
    if (c.has("x0")) x0 = c.i("x0");
    r = sup_expsum_poly(w, d, budget, so, x0);
  }
  json j = json::parse(sup_result_json(r));
  j["x0"] = r.argmax.x0();
  j["normalized"] = r.value / w.normalization;
  j["config"] = config_json(c.resolved());
  out << j.dump() << "\n";
  return 0;
}

int cmd_pyramid(Command& c, std::ostream& out) {
  if (!c.has("input")) throw UsageError("--input pre-path JSON is required");
  const PrePath pp = prepath_from_json(read_file(c.str("input")));
  const auto report = verify_prepath(pp);
  json j;
  json failures = json::array();
  for (auto [i, deg] : report.failures) failures.push_back({{"edge", i + 1}, {"j", deg}});
  j["verify"] = {{"passed", report.passed}, {"failures", failures}};
  j["balanced"] = balanced_products(pp);
  if (report.passed) j["pyramid"] = json::parse(pyramid_to_json(build_pyramid(pp)));
  j["config"] = config_json(c.resolved());
  out << j.dump() << "\n";
  return report.passed ? 0 : 2;
}

int cmd_paths(Command& c, std::ostream& out) {
  if (!c.has("input")) throw UsageError("--input configuration JSON is required");
  const Configuration cfg = configuration_from_json(read_file(c.str("input")));
  PathTolerance tol;
  tol.Q = BigInt(c.str("Q"));
  tol.H = c.has("H") ? c.u("H") : cfg.separation();
  tol.P = c.u("P");
  tol.slack = parse_rational(c.str("slack"));
  const auto pool1 = u64_list(c.str("pool1"), "pool1");
  const auto pool2 = u64_list(c.str("pool2"), "pool2");
  const int k = static_cast<int>(c.u("k"));
  const std::string mode = c.str("mode");

  auto path_json = [](const SplitPath& p) {
    json r = {{"nodes", p.nodes}, {"p", p.p}, {"q", p.q}};
    json cl = json::array();
    for (const auto& x : p.closeness) cl.push_back(to_string(x));
    r["closeness"] = cl;
    return r;
  };
  json j;
  if (mode == "paths") {
    PathSearchOptions opt;
    opt.cap = c.has("cap") ? c.u("cap") : 0;
    opt.workers = c.workers();
    if (c.has("start")) opt.start = c.u("start");
    json arr = json::array();
    for (const auto& p : find_split_paths(cfg, pool1, pool2, tol, k, opt)) arr.push_back(path_json(p));
    j["paths"] = std::move(arr);
  } else if (mode == "pairs") {
    if (!c.has("start")) throw UsageError("--start is required for mode=pairs");
    json arr = json::array();
    for (const auto& [a, b] : find_disjoint_path_pairs(cfg, pool1, pool2, tol, k, c.u("start"), c.workers()))
      arr.push_back({path_json(a), path_json(b)});
    j["pairs"] = std::move(arr);
  } else if (mode == "regular") {
    const auto rs = regular_subset(cfg, pool1, pool2, tol, c.real("c"), c.u("degree-target"));
    j["kept"] = rs.kept;
    j["min_degree"] = rs.min_degree;
    j["meets_density"] = rs.meets_density;
  } else {
    throw UsageError("--mode must be paths, pairs or regular");
  }
  j["config"] = config_json(c.resolved());
  out << j.dump() << "\n";
  return 0;
}

int cmd_correlate(Command& c, std::ostream& out) {
  if (!c.has("X") || !c.has("H")) throw UsageError("--X and --H are required");
  const u64 X = c.u("X"), H = c.u("H"), h_max = c.u("h-max");
  const int k = static_cast<int>(c.i("k"));
  if (h_max > H) throw DomainError("h_max exceeds H");
  if (H + 2 * h_max > X) throw DomainError("H + 2 h_max exceeds X");
  const double delta = c.real("delta");
  const u64 samples = c.u("samples"), seed = c.u("seed");
  const auto xs = sample_separated(X + h_max, 2 * X - H - h_max, H + 2 * h_max, samples, seed);
  const PrimeTable pt = prime_table_for(2 * X + h_max);
  const auto reports = parallel_map<CorrelationReport>(xs.size(), c.workers(), [&](std::size_t i) {
    return correlation_scan(correlation_window(xs[i], H, h_max, pt, X), k, h_max, delta);
  });
  std::ostringstream csv;
  csv << "x," << kCorrelationCsvHeader << '\n';
  json windows = json::array();
  bool positive = true;
  for (const auto& r : reports) {
    for (const auto& row : r.per_h) {
      csv << r.x << ',' << row.h << ',' << row.sum.get_str() << ',' << format_real(row.normalized) << '\n';
      positive = positive && row.normalized > 0;
    }
    windows.push_back({{"x", r.x}, {"median_normalized", format_real(r.median)}, {"exceptional_h", r.exceptional_h}});
  }
  json summary;
  summary["params"] = {{"X", X}, {"H", H}, {"k", k}, {"h_max", h_max}, {"delta", format_real(delta)}};
  summary["seed"] = seed;
  summary["aggregates"] = {{"windows", windows}, {"all_positive", positive}};
  emit(c, csv.str(), std::move(summary), out);
  return 0;
}

int cmd_uniformity(Command& c, std::ostream& out) {
  const Params p = params_of(c);
  UniformityOptions uo;
  uo.d = static_cast<int>(c.u("d"));
  uo.budget = c.has("budget") ? c.u("budget") : 0;
  uo.oversample = static_cast<int>(c.u("oversample"));
  uo.workers = c.workers();
  uo.epsilon = c.real("epsilon");
  const PrimeTable pt = prime_table_for(2 * p.X);
  const auto rep = uniformity_average(p, parse_weight_kind(c.str("kind")), c.u("samples"), c.u("seed"), pt, uo);
  std::ostringstream csv;
  write_uniformity_csv(csv, rep);
  emit(c, csv.str(), json::parse(uniformity_summary_json(rep)), out);
  return 0;
}

int cmd_check_ramare(Command& c, std::ostream& out) {
  const u64 max_n = c.u("max-n"), q0 = c.u("q0"), q = c.u("q");
  if (max_n < 2) throw DomainError("max-n must be >= 2");
  const PrimeTable pt = prime_table_for(max_n);
  const FactoredWindow fw = factor_window(1, max_n - 1, pt, max_n);
  u64 pass = 0;
  std::vector<u64> failing;
  for (std::size_t i = 0; i < fw.length(); ++i) {
    const auto [lhs, rhs] = ramare_identity_sides(fw.factors_at(i), q0, q);
    if (lhs == rhs) ++pass;
    else if (failing.size() < 10) failing.push_back(fw.n_at(i));
  }
  const u64 total = fw.length();
  out << (pass == total ? "PASS " : "FAIL ") << pass << '/' << total << '\n';
  for (u64 n : failing) out << "failed n=" << n << '\n';
  return pass == total ? 0 : 2;
}

int cmd_check_shiu(Command& c, std::ostream& out) {
  if (!c.has("x") || !c.has("H")) throw UsageError("--x and --H are required");
  const u64 x = c.u("x"), H = c.u("H");
  const u64 X = c.has("X") ? c.u("X") : x;
  const PrimeTable pt = PrimeTable::build(std::max<u64>(isqrt(x + H) + 1, c.u("table-limit")));
  const FactoredWindow fw = factor_window(x, H, pt, X);
  const std::string f = c.str("f");
  if (f != "one" && f != "tau") throw UsageError("--f must be one or tau");
  const ShiuReport r = shiu_ratio(fw, static_cast<int>(c.i("k")), c.u("q"), c.u("a"),
                                  f == "one" ? ShiuFunction::One : ShiuFunction::TauK, pt, c.real("guard"));
  json j = {{"numerator", r.numerator},     {"denominator", r.denominator},       {"ratio", r.ratio},
            {"prime_sum", r.prime_sum},     {"tail_estimate", r.tail_estimate}, {"tail_remainder", r.tail_remainder},
            {"table_limit", r.table_limit}, {"config", config_json(c.resolved())}};
  out << j.dump() << "\n";
  return 0;
}

int cmd_check_params(Command& c, std::ostream& out) {
  const Params p = params_of(c);
  for (const auto& [k, v] : to_key_values(p)) out << k << '=' << v << '\n';
  for (const auto& reason : p.degenerate_reasons) out << "# degenerate: " << reason << '\n';
  return 0;
}

int cmd_check_approximant(Command& c, std::ostream& out) {
  if (!c.has("n") || !c.has("X")) throw UsageError("--n and --X are required");
  const u64 n = c.u("n"), X = c.u("X");
  const int k = static_cast<int>(c.i("k"));
  const Rational gamma = c.has("gamma") ? parse_rational(c.str("gamma")) : Rational(1, 6 * k);
  const bool wide = c.str("allow-wide-gamma") == "1" || c.str("allow-wide-gamma") == "true";
  const PrimeTable pt = prime_table_for(n * (c.has("p") ? c.u("p") : 1));
  const Factorization f = factor(n, pt);
  json j;
  j["tau_k"] = std::to_string(tau_k(f, k));
  j["tau_k_star"] = to_string(tau_k_star(f, k, gamma, X, wide));
  if (c.has("p")) {
    const Rational t = ramare_ratio(c.u("p"), f, k, gamma, X, wide);
    j["t_n"] = to_string(t);
    j["t_n_is_one"] = t == 1;
  }
  j["config"] = config_json(c.resolved());
  out << j.dump() << "\n";
  return 0;
}

void error_line(std::ostream& err, int code, const std::string& message) {
  err << json{{"code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dulab: divisor-function uniformity laboratory", "dulab"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<int(Command&, std::ostream&)> fn) -> Command& {
    CLI::App* sub = parent->add_subcommand(name, help);
    commands.push_back(std::make_unique<Command>(sub, std::move(fn)));
    commands.back()->set_path(parent == &app ? name : parent->get_name() + " " + name);
    return *commands.back();
  };

  {
    auto& c = make(&app, "sieve", "factor a window and emit per-n weights", cmd_sieve);
    c.opt("x", "", "window start").opt("H", "", "window length").opt("X", "", "ambient scale (default x)");
    c.opt("k", "2", "divisor function order").opt("eta", "0.5", "eta").opt("epsilon", "0.5", "S epsilon");
    c.opt("kind", "tau", "factors | tau | tau_star | diff | s_diff | ramare_diff").opt("prime", "", "ramare_diff p");
    c.opt("prime-cache", "", "prime table cache file (read if present, written otherwise)");
    for (const auto& key : kOverrideKeys) c.opt(key, "", "parameter override");
    add_common(c);
    c.app()->footer("CSV: n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q (kind=factors: n,factors)");
  }
  {
    auto& c = make(&app, "expsum", "evaluate sum a_n e(P(n - x0))", cmd_expsum);
    add_window(c);
    c.opt("alpha", "", "phase coefficients, highest degree first").opt("x0", "", "base point (default x)");
    add_common(c, false);
  }
  {
    auto& c = make(&app, "sup", "supremum of |sum a_n e(P(n))| over the torus", cmd_sup);
    add_window(c);
    c.opt("d", "1", "phase degree").opt("budget", "", "outer grid budget (d >= 2)");
    c.opt("oversample", "8", "FFT oversampling").opt("degree-cap", "3", "maximal degree").opt("x0", "", "base point");
    add_common(c, false);
    c.app()->footer("JSON: {alpha, value, grid_spacing, error_bound, x0, normalized, config}");
  }
  {
    auto& c = make(&app, "pyramid", "verify a pre-path and build its pyramid", cmd_pyramid);
    c.opt("input", "", "pre-path JSON {Q, d, eps, p, q, nodes}");
    add_common(c, false);
  }
  {
    auto& c = make(&app, "paths", "split-path search on a configuration", cmd_paths);
    c.opt("input", "", "configuration JSON {Q, d, H, c, elements: [{x, freq}]}");
    c.opt("mode", "paths", "paths | pairs | regular").opt("pool1", "", "comma-separated primes");
    c.opt("pool2", "", "comma-separated primes").opt("Q", "1", "modulus").opt("H", "", "scale H (default separation)");
    c.opt("P", "1", "prime scale P").opt("k", "1", "path length").opt("slack", "1", "tolerance multiplier");
    c.opt("start", "", "start element index").opt("cap", "", "maximal number of paths");
    c.opt("c", "0", "density threshold (regular)").opt("degree-target", "1", "minimal degree (regular)");
    add_common(c, false);
  }
  {
    auto& c = make(&app, "correlate", "divisor correlations sum tau_k(n) tau_k(n+h)", cmd_correlate);
    c.opt("X", "", "ambient scale").opt("H", "", "window length").opt("k", "2", "divisor function order");
    c.opt("h-max", "100", "largest |h|").opt("delta", "0.5", "exceptional threshold factor");
    c.opt("samples", "20", "windows").opt("seed", "1", "sampling seed");
    add_common(c);
    c.app()->footer("CSV: x,h,sum,normalized");
  }
  {
    auto& c = make(&app, "uniformity", "averaged local Fourier uniformity", cmd_uniformity);
    add_params(c);
    c.opt("kind", "diff", "tau | tau_star | diff | s_diff | synthetic");
    c.opt("samples", "50", "windows").opt("seed", "1", "sampling seed").opt("d", "1", "phase degree");
    c.opt("budget", "", "outer grid budget (d >= 2)").opt("oversample", "8", "FFT oversampling");
    add_common(c);
    c.app()->footer(std::string("CSV: ") + kUniformityCsvHeader + " (alpha: ';'-separated, highest degree first)");
  }
  CLI::App* check = app.add_subcommand("check", "exact identity and parameter checks");
  check->require_subcommand(1);
  {
    auto& c = make(check, "ramare", "Ramare identity for 2 <= n <= max-n", cmd_check_ramare);
    c.opt("max-n", "100000", "largest n").opt("q0", "10", "Q0").opt("q", "100", "Q");
    add_common(c, false);
  }
  {
    auto& c = make(check, "shiu", "Shiu-type ratio on one window", cmd_check_shiu);
    c.opt("x", "", "window start").opt("H", "", "window length").opt("X", "", "ambient scale (default x)");
    c.opt("k", "2", "order").opt("q", "1", "modulus").opt("a", "0", "residue").opt("f", "tau", "one | tau");
    c.opt("guard", "0.1", "q <= H^(1 - guard)").opt("table-limit", "1000000", "prime table limit");
    add_common(c, false);
  }
  {
    auto& c = make(check, "params", "derive and print every parameter", cmd_check_params);
    add_params(c);
    add_common(c, false);
  }
  {
    auto& c = make(check, "approximant", "tau_k, tau_k^* and t_n for one n", cmd_check_approximant);
    c.opt("n", "", "n").opt("k", "2", "order").opt("gamma", "", "gamma (default 1/(6k))").opt("X", "", "ambient X");
    c.opt("p", "", "prime for t_n").opt("allow-wide-gamma", "0", "accept gamma outside (0, 1/(5k))");
    add_common(c, false);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Success&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    error_line(err, 1, e.what());
    return 1;
  }

  try {
    for (auto& c : commands) {
      if (!c->app()->parsed()) continue;
      c->resolve();
      return c->run(out);
    }
    error_line(err, 1, "no subcommand given");
    return 1;
  } catch (const UsageError& e) {
    error_line(err, 1, e.what());
    return 1;
  } catch (const DomainError& e) {
    error_line(err, 2, e.what());
    return 2;
  } catch (const InvariantViolation& e) {
    error_line(err, 3, e.what());
    return 3;
  } catch (const std::exception& e) {
    error_line(err, 3, e.what());
    return 3;
  }
}

}  // namespace dulab
