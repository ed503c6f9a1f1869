#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dulab/approximant.hpp"
#include "dulab/error.hpp"
#include "oracles.hpp"

using namespace dulab;

TEST(Params, DefaultsFollowTheFormulas) {
  const Params p = derive_params(100'000'000, 1000, 2, 0.5);
  EXPECT_EQ(p.gamma, Rational(1, 12));
  EXPECT_DOUBLE_EQ(p.delta, 0.25);
  EXPECT_EQ(p.Q, 32u);  // round(1000^{1/2})
  EXPECT_EQ(p.Q0, 6u);  // round(32^{1/2})
  EXPECT_EQ(p.P, p.Q0);
  EXPECT_DOUBLE_EQ(p.v1, 0.25 * 0.25 / 4000.0);
  EXPECT_EQ(p.Q_hi[1], static_cast<std::uint64_t>(std::llround(std::pow(1000.0, 0.25))));
  const double k0 = std::floor(std::log(1e8 / (1000.0 * std::log(1e8))) / (2.0 * std::log(12.0)));
  EXPECT_EQ(p.k0, static_cast<std::int64_t>(k0));
  EXPECT_TRUE(p.intervals_degenerate());
  EXPECT_TRUE(p.degenerate());
}

TEST(Params, OverridesAndValidation) {
  const Params p = derive_params(1'000'000, 100, 3, 0.5, {{"gamma", "1/20"}, {"Q", "50"}, {"P1", "2"}, {"Q1", "5"}});
  EXPECT_EQ(p.gamma, Rational(1, 20));
  EXPECT_EQ(p.Q, 50u);
  EXPECT_TRUE(p.synthetic_intervals);
  EXPECT_FALSE(p.wide_gamma);
  EXPECT_THROW(derive_params(1000, 10, 2, 0.5, {{"bogus", "1"}}), DomainError);
  EXPECT_THROW(derive_params(1000, 10, 2, 0.5, {{"X", "1"}}), DomainError);
  EXPECT_THROW(derive_params(1000, 10, 1, 0.5), DomainError);
  EXPECT_THROW(derive_params(1000, 1, 2, 0.5), DomainError);
  EXPECT_THROW(derive_params(1000, 2000, 2, 0.5), DomainError);
  EXPECT_THROW(derive_params(1000, 10, 2, 1.0), DomainError);
  try {
    derive_params(1000, 10, 2, 0.5, {{"gamma", "1/0"}});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("gamma", 0), 0u);
  }
  const Params wide = derive_params(1000, 10, 2, 0.5, {{"gamma", "1/2"}});
  EXPECT_TRUE(wide.wide_gamma);
  EXPECT_TRUE(wide.degenerate());
}

TEST(Params, KeyValueRoundTrip) {
  const Params p = derive_params(123'456'789, 5000, 3, 0.3, {{"omega_exp", "0.4"}});
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : to_key_values(p)) kv[k] = v;
  EXPECT_EQ(kv.size(), param_keys().size());
  const Params back = params_from_key_values(kv);
  EXPECT_EQ(to_key_values(back), to_key_values(p));
  EXPECT_FALSE(back.synthetic_intervals);
  kv.erase("eta");
  EXPECT_THROW(params_from_key_values(kv), DomainError);
}

TEST(Approximant, MatchesDivisorEnumeration) {
  const auto pt = PrimeTable::build(10'000);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    const std::uint64_t n = 1 + rng() % 50'000'000;
    const int k = 2 + static_cast<int>(rng() % 3);
    const std::uint64_t X = 1000 + rng() % 1'000'000'000;
    const Rational gamma(1, 5 * k + 1 + static_cast<long>(rng() % 10));
    ASSERT_EQ(tau_k_star(factor(n, pt), k, gamma, X), oracle::tau_k_star(n, k, gamma, X)) << n;
  }
}

TEST(Approximant, FullCutoffGivesScaledTau) {
  // X^gamma >= n: every divisor is kept and the truncated sum is tau_k(n).
  const auto pt = PrimeTable::build(1000);
  const auto f = factor(720, pt);
  const Rational gamma(1, 2);
  EXPECT_EQ(tau_k_star(f, 3, gamma, 1'000'000, true), Rational(4) * Rational(static_cast<long>(tau_k(f, 3))));
  EXPECT_THROW(tau_k_star(f, 3, gamma, 1'000'000), DomainError);
  EXPECT_THROW(tau_k_star(f, 1, Rational(1, 10), 1000), DomainError);
}

TEST(Approximant, RamareRatioMatchesDefinition) {
  const auto pt = PrimeTable::build(10'000);
  const Rational gamma(1, 12);
  const std::uint64_t X = 100'000'000'000ull;  // cutoff 8
  for (std::uint64_t n : {1ull, 9ull, 25ull, 49ull, 1155ull, 3ull * 3 * 5 * 5 * 7}) {
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
      if (n % p == 0) {
        EXPECT_THROW(ramare_ratio(p, factor(n, pt), 2, gamma, X), DomainError);
        continue;
      }
      const Rational expect = oracle::tau_k_star(n * p, 2, gamma, X) / (Rational(2) * oracle::tau_k_star(n, 2, gamma, X));
      const Rational t = ramare_ratio(p, factor(n, pt), 2, gamma, X);
      EXPECT_EQ(t, expect) << n << " " << p;
      EXPECT_GE(t, Rational(1, 2));
      EXPECT_LE(t, Rational(1));
    }
  }
  EXPECT_THROW(ramare_ratio(11, factor(1, pt), 2, gamma, X), DomainError);  // p above the cutoff
  EXPECT_THROW(ramare_ratio(4, factor(1, pt), 2, gamma, X), DomainError);
}

TEST(Approximant, RatioIsOneWhenNoDivisorNearTheCutoff) {
  // Cutoff 100 exceeds every divisor of 30, so t_n = tau_2(30) / (2 tau_2(15)).
  const auto pt = PrimeTable::build(1000);
  EXPECT_EQ(ramare_ratio(2, factor(15, pt), 2, Rational(1, 2), 10'000, true), Rational(1));
}

TEST(SMembership, SyntheticIntervals) {
  const Params p = derive_params(1'000'000, 100, 2, 0.5,
                                 {{"P1", "1"}, {"Q1", "2"}, {"P2", "2"}, {"Q2", "3"}, {"P3", "4"}, {"Q3", "5"},
                                  {"P4", "6"}, {"Q4", "7"}});
  const auto pt = PrimeTable::build(1000);
  const auto in = s_membership(factor(2 * 3 * 5 * 7, pt), p);
  EXPECT_TRUE(in.in_S);
  EXPECT_EQ(in.omega_total, 4);
  EXPECT_FALSE(s_membership(factor(2 * 3 * 5, pt), p).in_S);
  // Omega bound (k + 1/2) log log 10^6 ~ 6.57
  EXPECT_FALSE(s_membership(factor(2 * 3 * 5 * 7 * 2 * 2 * 3, pt), p).in_S);
  EXPECT_TRUE(s_membership(factor(2 * 3 * 5 * 7 * 2 * 3, pt), p).in_S);
  const Params degenerate = derive_params(1'000'000, 100, 2, 0.5);
  ASSERT_TRUE(degenerate.intervals_degenerate());
  EXPECT_THROW(s_membership(factor(210, pt), degenerate), DomainError);
}
