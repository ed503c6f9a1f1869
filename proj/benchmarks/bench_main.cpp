#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "dulab/expsum.hpp"
#include "dulab/freq_algebra.hpp"
#include "dulab/sieve.hpp"

using namespace dulab;

static void BM_FactorWindow(benchmark::State& state) {
  const auto H = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t x = 100'000'000;
  const auto pt = PrimeTable::build(15'000);
  for (auto _ : state) benchmark::DoNotOptimize(factor_window(x, H, pt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * H));
}
BENCHMARK(BM_FactorWindow)->Arg(1000)->Arg(10'000)->Arg(100'000);

static void BM_SupExpsumD1(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(state.range(0)));
  for (auto& a : w) a = {g(rng), 0.0};
  const auto win = WeightedWindow::synthetic(0, w);
  for (auto _ : state) benchmark::DoNotOptimize(sup_expsum_d1(win));
}
BENCHMARK(BM_SupExpsumD1)->Arg(1000)->Arg(10'000);

static void BM_BuildPyramid(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const std::vector<std::uint64_t> primes = {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  PrePath pp;
  pp.Q = 30;
  pp.eps = Rational(1, 100);
  for (int i = 0; i < k; ++i) {
    pp.p.push_back(primes[static_cast<std::size_t>(2 * i)]);
    pp.q.push_back(primes[static_cast<std::size_t>(2 * i + 1)]);
  }
  // alpha_i = c_i^j / 7 with c_i = prod_{r<i} p_r prod_{r>=i} q_r: an exact pre-path
  for (int i = 0; i <= k; ++i) {
    BigInt c = 1;
    for (int r = 0; r < i; ++r) c *= static_cast<unsigned long>(pp.p[static_cast<std::size_t>(r)]);
    for (int r = i; r < k; ++r) c *= static_cast<unsigned long>(pp.q[static_cast<std::size_t>(r)]);
    pp.nodes.emplace_back(pp.Q, std::vector<Rational>{Rational(c * c) / 7, Rational(c) / 7});
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_pyramid(pp));
}
BENCHMARK(BM_BuildPyramid)->Arg(2)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
