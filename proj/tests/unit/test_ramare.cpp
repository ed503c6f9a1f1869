#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dulab/error.hpp"
#include "dulab/ramare.hpp"
#include "oracles.hpp"

using namespace dulab;

TEST(RamareIdentity, AgreesWithDirectSumOverPrimeFactors) {
  const auto pt = PrimeTable::build(1000);
  for (auto [Q0, Q] : {std::pair<std::uint64_t, std::uint64_t>{10, 100}, {5, 50}, {1, 7}, {100, 1000}}) {
    const auto fw = factor_window(1, 4000, pt);
    for (std::size_t i = 0; i < fw.length(); ++i) {
      const auto sides = ramare_identity_sides(fw.factors_at(i), Q0, Q);
      const auto expect = oracle::ramare_sides(fw.n_at(i), Q0, Q);
      ASSERT_EQ(sides, expect) << fw.n_at(i);
      ASSERT_EQ(sides.first, sides.second);
    }
  }
  EXPECT_TRUE(ramare_identity_check(factor(1, pt), 10, 100));
  EXPECT_THROW(ramare_identity_check(factor(30, pt), 100, 100), DomainError);
}

TEST(WeightedWindow, KindsAreBuiltFromTauAndTauStar) {
  const std::uint64_t X = 1'000'000, x = 1'000'000, H = 300;
  const Params p = derive_params(X, H, 2, 0.5);
  const auto pt = PrimeTable::build(2000);
  const auto fw = factor_window(x, H, pt, X);
  const auto tau = build_weighted_window(fw, WeightKind::Tau, p);
  const auto star = build_weighted_window(fw, WeightKind::TauStar, p);
  const auto diff = build_weighted_window(fw, WeightKind::Diff, p);
  ASSERT_EQ(tau.length, H);
  EXPECT_DOUBLE_EQ(tau.normalization, static_cast<double>(H) * std::log(static_cast<double>(X)));
  EXPECT_DOUBLE_EQ(normalization_for(H, X, 3), H * std::pow(std::log(static_cast<double>(X)), 2));
  for (std::size_t i = 0; i < H; ++i) {
    const std::uint64_t n = fw.n_at(i);
    EXPECT_EQ(tau.exact[i], Rational(static_cast<long>(oracle::tau_k(n, 2))));
    EXPECT_EQ(star.exact[i], oracle::tau_k_star(n, 2, p.gamma, X));
    EXPECT_EQ(diff.exact[i], tau.exact[i] - star.exact[i]);
    EXPECT_EQ(diff.weights[i].imag(), 0.0);
  }
  EXPECT_EQ(to_string(WeightKind::SDiff), "s_diff");
  EXPECT_EQ(parse_weight_kind("tau_star"), WeightKind::TauStar);
  EXPECT_THROW(parse_weight_kind("nope"), DomainError);
}

TEST(WeightedWindow, ScaleMismatchAndDegenerateSAreRejected) {
  const auto pt = PrimeTable::build(2000);
  const Params p = derive_params(1'000'000, 100, 2, 0.5);
  const auto fw = factor_window(500'000, 100, pt, 500'000);
  EXPECT_THROW(build_weighted_window(fw, WeightKind::Tau, p), DomainError);
  const auto good = factor_window(1'000'000, 100, pt, 1'000'000);
  EXPECT_THROW(build_weighted_window(good, WeightKind::SDiff, p), DomainError);
  EXPECT_THROW(build_weighted_window(good, WeightKind::RamareDiff, p), DomainError);
  EXPECT_THROW(build_weighted_window(good, WeightKind::Synthetic, p), DomainError);
}

TEST(WeightedWindow, RamareDiffZeroesMultiplesOfP) {
  const std::uint64_t X = 1'000'000'000'000ull;
  const Params p = derive_params(X, 1000, 2, 0.5,
                                 {{"P1", "1"}, {"Q1", "2"}, {"P2", "2"}, {"Q2", "3"}, {"P3", "3"}, {"Q3", "5"},
                                  {"P4", "5"}, {"Q4", "7"}, {"Q0", "3"}, {"Q", "30"}});
  const auto pt = PrimeTable::build(2000);
  const auto fw = factor_window(1'000'000, 200, pt, X);
  WindowOptions opt;
  opt.prime_p = 7;
  const auto w = build_weighted_window(fw, WeightKind::RamareDiff, p, opt);
  std::uint64_t zeroed = 0;
  for (std::size_t i = 0; i < fw.length(); ++i) {
    const std::uint64_t n = fw.n_at(i);
    if (n % 7 == 0) {
      ++zeroed;
      EXPECT_EQ(w.exact[i], 0);
      continue;
    }
    const Rational tau = w.in_S[i] ? Rational(static_cast<long>(oracle::tau_k(n, 2))) : Rational(0);
    const Rational t = oracle::tau_k_star(n * 7, 2, p.gamma, X) / (2 * oracle::tau_k_star(n, 2, p.gamma, X));
    const Rational expect = (tau - t * oracle::tau_k_star(n, 2, p.gamma, X)) /
                            Rational(oracle::omega_in(n, 3, 30) + 1);
    EXPECT_EQ(w.exact[i], expect) << n;
  }
  EXPECT_EQ(w.zeroed_non_coprime, zeroed);
  EXPECT_GT(zeroed, 0u);
}

TEST(WeightedWindow, CsvRoundTrip) {
  const auto w = WeightedWindow::synthetic(41, {{1.5, -0.25}, {0.1, 0.0}, {-3.0, 2.0}}, 7.0);
  std::stringstream ss;
  write_window_csv(ss, w);
  const auto back = read_window_csv(ss, 1000, 7.0);
  EXPECT_EQ(back.x_start, 41u);
  EXPECT_EQ(back.weights, w.weights);
  EXPECT_EQ(back.ambient_scale, 1000u);
  std::stringstream bad("n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q\n5,1,0,0,0,0,0\n7,1,0,0,0,0,0\n");
  EXPECT_THROW(read_window_csv(bad), DomainError);
  std::stringstream header("n,re\n");
  EXPECT_THROW(read_window_csv(header), DomainError);
  std::stringstream empty_rows("n,weight_re,weight_im,tau_k,tau_k_star,in_S,omega_q0q\n");
  EXPECT_EQ(read_window_csv(empty_rows).length, 0u);
}
