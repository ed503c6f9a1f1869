#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "dulab/error.hpp"
#include "dulab/sieve.hpp"
#include "oracles.hpp"

using namespace dulab;

TEST(PrimeTable, CountsMatchKnownValues) {
  EXPECT_EQ(PrimeTable::build(100).size(), 25u);
  EXPECT_EQ(PrimeTable::build(1'000'000).size(), 78498u);
  EXPECT_EQ(PrimeTable::build(2).size(), 1u);
  EXPECT_THROW(PrimeTable::build(1), DomainError);
}

TEST(PrimeTable, MembershipAndRange) {
  const auto pt = PrimeTable::build(1000);
  EXPECT_TRUE(pt.is_prime(997));
  EXPECT_FALSE(pt.is_prime(999));
  EXPECT_THROW(pt.is_prime(1001), DomainError);
  const auto r = pt.primes_in(10, 30);  // (10, 30]
  EXPECT_EQ(std::vector<std::uint64_t>(r.begin(), r.end()), (std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29}));
  EXPECT_TRUE(pt.primes_in(30, 30).empty());
}

TEST(PrimeTable, CacheRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "dulab_prime_cache_test.bin";
  const auto pt = PrimeTable::build(50'000);
  pt.save(path);
  const auto back = PrimeTable::load(path);
  EXPECT_EQ(back.limit(), pt.limit());
  EXPECT_TRUE(std::equal(back.primes().begin(), back.primes().end(), pt.primes().begin(), pt.primes().end()));
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "garbage";
  }
  EXPECT_THROW(PrimeTable::load(path), DomainError);
  std::filesystem::remove(path);
  EXPECT_THROW(PrimeTable::load(path), DomainError);
}

TEST(FactorWindow, TauMatchesConvolutionTable) {
  const std::uint64_t N = 20'000;
  const auto pt = PrimeTable::build(200);
  const auto fw = factor_window(0 + 1, N - 1, pt);  // n = 2..N
  for (int k = 2; k <= 4; ++k) {
    const auto table = oracle::tau_k_table(N, k);
    for (std::size_t i = 0; i < fw.length(); ++i) ASSERT_EQ(tau_k(fw.factors_at(i), k), table[fw.n_at(i)]) << fw.n_at(i);
  }
  EXPECT_EQ(tau_k(factor(1, pt), 3), 1u);
}

TEST(FactorWindow, LargeWindowMatchesTrialDivision) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const std::uint64_t x = 1'000'000'000'000ull + rng() % 1'000'000'000ull;
    const auto pt = PrimeTable::build(isqrt(x + 200) + 1);
    const auto fw = factor_window(x, 200, pt, x);
    ASSERT_EQ(fw.ambient_scale(), x);
    for (std::size_t i = 0; i < fw.length(); i += 7) {
      const auto expect = oracle::factorize(fw.n_at(i));
      const auto got = fw.factors_at(i);
      ASSERT_EQ(got.size(), expect.size());
      for (std::size_t j = 0; j < got.size(); ++j) {
        EXPECT_EQ(got[j].p, expect[j].first);
        EXPECT_EQ(got[j].e, expect[j].second);
      }
    }
  }
}

TEST(FactorWindow, RejectsBadInput) {
  const auto pt = PrimeTable::build(100);
  EXPECT_THROW(factor_window(10, 0, pt), DomainError);
  EXPECT_THROW(factor_window(0, 10, pt), DomainError);
  EXPECT_THROW(factor_window(1'000'000, 10, pt), DomainError);  // table too small
  EXPECT_THROW(factor(0, pt), DomainError);
}

TEST(FactorWindow, MembershipHelpers) {
  const auto pt = PrimeTable::build(100);
  const auto fw = factor_window(100, 10, pt);
  EXPECT_TRUE(fw.contains(101));
  EXPECT_TRUE(fw.contains(110));
  EXPECT_FALSE(fw.contains(100));
  EXPECT_FALSE(fw.contains(111));
  EXPECT_EQ(fw.factorization_of(108).n, 108u);
  EXPECT_THROW(fw.factorization_of(100), DomainError);
}

TEST(DivisorFunctions, PrimePowerBinomials) {
  EXPECT_EQ(tau_k_prime_power(0, 5), 1u);
  EXPECT_EQ(tau_k_prime_power(2, 3), 6u);   // C(4,2)
  EXPECT_EQ(tau_k_prime_power(3, 4), 20u);  // C(6,3)
  EXPECT_EQ(tau_k_prime_power(7, 1), 1u);
  EXPECT_THROW(tau_k_prime_power(1, 0), DomainError);
  EXPECT_THROW(tau_k_prime_power(200, 60), DomainError);
}

TEST(DivisorFunctions, TruncatedSumMatchesBruteForce) {
  const auto pt = PrimeTable::build(1000);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint64_t n = 1 + rng() % 500'000;
    const int k = 2 + static_cast<int>(rng() % 3);
    const std::uint64_t T = 1 + rng() % 2000;
    std::uint64_t expect = 0;
    for (auto d : oracle::divisors(n))
      if (d <= T) expect += oracle::tau_k(d, k - 1);
    ASSERT_EQ(truncated_divisor_sum(factor(n, pt), k, T), expect) << n << " " << k << " " << T;
  }
  EXPECT_THROW(truncated_divisor_sum(factor(12, pt), 1, 5), DomainError);
  EXPECT_THROW(truncated_divisor_sum(factor(12, pt), 2, 0), DomainError);
}

TEST(DivisorFunctions, OmegaCounts) {
  const auto pt = PrimeTable::build(1000);
  const auto f = factor(2 * 2 * 3 * 7 * 11 * 11, pt);
  EXPECT_EQ(big_omega(f), 6);
  EXPECT_EQ(omega_in(f, 2, 11), 3);
  EXPECT_EQ(omega_in(f, 1, 2), 1);
  EXPECT_THROW(omega_in(f, 5, 5), DomainError);
  std::vector<std::uint64_t> seen;
  for_each_divisor(f.factors, 30, [&](std::uint64_t d, auto) { seen.push_back(d); });
  std::sort(seen.begin(), seen.end());
  std::vector<std::uint64_t> expect;
  for (auto d : oracle::divisors(f.n))
    if (d <= 30) expect.push_back(d);
  EXPECT_EQ(seen, expect);
}

TEST(DivisorFunctions, IsqrtExact) {
  for (std::uint64_t r : {0ull, 1ull, 2ull, 3037000499ull, 4294967295ull}) {
    EXPECT_EQ(isqrt(r * r), r);
    if (r) {
      EXPECT_EQ(isqrt(r * r - 1), r - 1);
    }
  }
  EXPECT_EQ(isqrt(UINT64_MAX), 4294967295ull);
}
