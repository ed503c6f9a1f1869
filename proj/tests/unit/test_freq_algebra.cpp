#include <gtest/gtest.h>

#include <random>

#include "dulab/error.hpp"
#include "dulab/freq_algebra.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dulab;

namespace {

TorusFrequency freq(long Q, std::vector<Rational> c) { return TorusFrequency(BigInt(Q), std::move(c)); }

}  // namespace

TEST(TorusFrequency, ReducesModuloQ) {
  const auto f = freq(30, {Rational(61, 2), Rational(-1, 3)});
  EXPECT_EQ(f.coord(2), Rational(1, 2));
  EXPECT_EQ(f.coord(1), Rational(89, 3));
  EXPECT_THROW(freq(0, {Rational(1)}), DomainError);
  EXPECT_THROW(freq(1, {}), DomainError);
}

TEST(TorusFrequency, RelationResiduals) {
  const auto a = freq(1, {Rational(1, 7), Rational(1, 3)});
  const auto b = freq(1, {Rational(0), Rational(1, 2)});
  const auto r = relation_residuals(a, b, 2, 5);
  // j = 1: 2/3 - 5/2 = -11/6 -> 1/6;  j = 2: 4/7 - 0 -> 3/7
  EXPECT_EQ(r[0], Rational(1, 6));
  EXPECT_EQ(r[1], Rational(3, 7));
  EXPECT_THROW(relation_residuals(a, freq(1, {Rational(0)}), 2, 5), DomainError);
}

TEST(CombinePair, ExactInputsGiveExactOutput) {
  const auto alpha = Rational(3, 11);
  const auto a1 = freq(1, {Rational(5) * alpha});  // q = 5
  const auto a2 = freq(1, {Rational(3) * alpha});  // p = 3
  const auto out = combine_pair(a1, a2, 3, 5, Rational(1, 100), Rational(1, 100));
  EXPECT_EQ(dist_mod(Rational(3) * out.coord(1) - a2.coord(1), 1), 0);
  EXPECT_EQ(dist_mod(Rational(5) * out.coord(1) - a1.coord(1), 1), 0);
}

TEST(CombinePair, ContractOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const BigInt Q = std::vector<long>{1, 30, 2310}[rng() % 3];
    const auto pool = gen::primes_coprime_to(Q, 200);
    std::vector<std::uint64_t> pq;
    std::sample(pool.begin(), pool.end(), std::back_inserter(pq), 2, rng);
    const std::uint64_t p = pq[0], q = pq[1];
    const int d = 1 + static_cast<int>(rng() % 3);
    const Rational eps(1, 2 + static_cast<long>(rng() % 500)), epsp(1, 2 + static_cast<long>(rng() % 500));
    const auto a1 = gen::random_frequency(rng, Q, d);
    std::vector<Rational> c(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) {
      const Rational e = pow(eps, static_cast<unsigned>(j)) + pow(epsp, static_cast<unsigned>(j));
      c[static_cast<std::size_t>(d - j)] =
          (Rational(pow(from_u64(p), static_cast<unsigned>(j))) * a1.coord(j) - gen::random_signed(rng, e)) /
          Rational(pow(from_u64(q), static_cast<unsigned>(j)));
    }
    const TorusFrequency a2(Q, c);
    const auto out = combine_pair(a1, a2, p, q, eps, epsp);
    for (int j = 1; j <= d; ++j) {
      const Rational pj(pow(from_u64(p), static_cast<unsigned>(j))), qj(pow(from_u64(q), static_cast<unsigned>(j)));
      EXPECT_LE(dist_mod(pj * out.coord(j) - a2.coord(j), Q), pow(epsp / Rational(from_u64(q)), static_cast<unsigned>(j)));
      EXPECT_LE(dist_mod(qj * out.coord(j) - a1.coord(j), Q), pow(eps / Rational(from_u64(p)), static_cast<unsigned>(j)));
    }
  }
}

TEST(CombinePair, RejectsBadInput) {
  const auto a = freq(30, {Rational(1, 2)});
  const auto b = freq(30, {Rational(1, 2)});
  EXPECT_THROW(combine_pair(a, b, 7, 7, 1, 1), DomainError);
  EXPECT_THROW(combine_pair(a, b, 9, 7, 1, 1), DomainError);
  EXPECT_THROW(combine_pair(a, b, 5, 7, 1, 1), DomainError);  // 5 | 30
  EXPECT_THROW(combine_pair(a, b, 11, 7, 0, 1), DomainError);
  // 11/2 - 7/2 = 2 is far from 30Z
  EXPECT_THROW(combine_pair(a, b, 11, 7, Rational(1, 10), Rational(1, 10)), PreconditionError);
}

TEST(Pyramid, PlantedPrePathsHaveExactTopElements) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const BigInt Q = std::vector<long>{1, 30, 2310}[rng() % 3];
    const int k = 1 + static_cast<int>(rng() % 5), d = 1 + static_cast<int>(rng() % 3);
    std::vector<Rational> alpha;
    for (int j = 0; j < d; ++j) alpha.push_back(gen::random_rational(rng, Q));
    const auto pp = gen::planted_prepath(rng, Q, k, d, Rational(1, 100), gen::primes_coprime_to(Q, 1000), alpha);
    const auto py = build_pyramid(pp);
    ASSERT_EQ(py.levels.size(), static_cast<std::size_t>(k + 1));
    for (int ip = 0; ip <= k; ++ip)
      for (const auto& r : top_element_residual(py, ip)) EXPECT_EQ(r, 0);
  }
}

TEST(Pyramid, PerturbedBalancedPrePathsMeetTheCertifiedBound) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 100; ++t) {
    const BigInt Q = std::vector<long>{1, 30, 2310}[rng() % 3];
    const int k = 1 + static_cast<int>(rng() % 5), d = 1 + static_cast<int>(rng() % 3);
    const Rational eps(1, 2 + static_cast<long>(rng() % 1000));
    const auto pp = gen::perturbed_prepath(rng, Q, k, d, eps, gen::primes_coprime_to(Q, 1000));
    ASSERT_TRUE(balanced_products(pp));
    ASSERT_TRUE(verify_prepath(pp).passed);
    const auto py = build_pyramid(pp);
    for (int ip = 0; ip <= k; ++ip) {
      const auto res = top_element_residual(py, ip);
      for (int j = 1; j <= d; ++j) EXPECT_LE(res[static_cast<std::size_t>(j - 1)], certified_top_bound(pp, j));
    }
    for (std::size_t lvl = 1; lvl < py.levels.size(); ++lvl)
      for (const auto& cell : py.levels[lvl])
        for (int j = 0; j < d; ++j) {
          EXPECT_LE(cell.residual_rule1[static_cast<std::size_t>(j)], cell.bound_rule1[static_cast<std::size_t>(j)]);
          EXPECT_LE(cell.residual_rule2[static_cast<std::size_t>(j)], cell.bound_rule2[static_cast<std::size_t>(j)]);
        }
  }
}

TEST(Pyramid, ValidationAndFailureReporting) {
  PrePath pp;
  pp.Q = 1;
  pp.eps = Rational(1, 100);
  pp.p = {3};
  pp.q = {5};
  pp.nodes = {freq(1, {Rational(1, 3)}), freq(1, {Rational(1, 7)})};
  const auto rep = verify_prepath(pp);
  EXPECT_FALSE(rep.passed);
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_EQ(rep.failures[0], std::make_pair(0, 1));
  EXPECT_EQ(rep.residuals[0][0], Rational(2, 7));  // 1 - 5/7
  EXPECT_THROW(build_pyramid(pp), PreconditionError);
  pp.q = {3};
  EXPECT_THROW(verify_prepath(pp), DomainError);  // repeated prime
  pp.q = {4};
  EXPECT_THROW(verify_prepath(pp), DomainError);
  pp.q = {5};
  pp.nodes.pop_back();
  EXPECT_THROW(verify_prepath(pp), DomainError);
}

TEST(Pyramid, BalanceIncludesSingletons) {
  PrePath pp;
  pp.Q = 1;
  pp.eps = 1;
  pp.p = {2, 11};
  pp.q = {7, 3};  // 2/7 < 1/2 on its own, 22/21 overall
  pp.nodes.assign(3, freq(1, {Rational(0)}));
  EXPECT_FALSE(balanced_products(pp));
  pp.p = {5, 7};
  pp.q = {3, 11};  // 5/3, 7/11, 35/33
  EXPECT_TRUE(balanced_products(pp));
  const auto py = build_pyramid(pp);
  EXPECT_THROW(top_element_residual(py, 3), DomainError);
  EXPECT_THROW(top_element_residual(py, -1), DomainError);
  EXPECT_EQ(certified_top_bound(pp, 2), Rational(8));
}

TEST(PrePathJson, RoundTrip) {
  std::mt19937_64 rng(3);
  const auto pp = gen::perturbed_prepath(rng, BigInt(30), 3, 2, Rational(1, 50), gen::primes_coprime_to(BigInt(30), 200));
  const auto back = prepath_from_json(prepath_to_json(pp));
  EXPECT_EQ(back.Q, pp.Q);
  EXPECT_EQ(back.eps, pp.eps);
  EXPECT_EQ(back.p, pp.p);
  EXPECT_EQ(back.q, pp.q);
  EXPECT_EQ(back.nodes, pp.nodes);
  EXPECT_THROW(prepath_from_json("{"), DomainError);
  EXPECT_THROW(prepath_from_json(R"({"Q":1,"eps":"1/2","p":[3],"q":[5]})"), DomainError);
  EXPECT_THROW(prepath_from_json(R"({"Q":1,"eps":0.5,"p":[3],"q":[5],"nodes":[["0"],["0"]]})"), DomainError);
}

TEST(Configuration, SeparationAndJson) {
  std::vector<ConfigElement> els = {{0, freq(1, {Rational(1, 2)})}, {9, freq(1, {Rational(1, 3)})}};
  EXPECT_THROW(Configuration(10, els), DomainError);
  els[1].x = 10;
  const Configuration cfg(10, els, 0.25);
  const auto back = configuration_from_json(configuration_to_json(cfg));
  EXPECT_EQ(back.size(), 2u);
  EXPECT_EQ(back.separation(), 10u);
  EXPECT_EQ(back[1].freq, cfg[1].freq);
  EXPECT_DOUBLE_EQ(back.label(), 0.25);
  els[1].freq = freq(30, {Rational(1, 3)});
  EXPECT_THROW(Configuration(10, els), DomainError);
}

TEST(SplitPaths, AgreeWithExhaustiveEnumeration) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 15; ++t) {
    const BigInt Q = (t % 2) ? 30 : 1;
    const int k = 1 + t % 2;
    const auto pc = gen::planted_configuration(rng, Q, 1 + t % 2, k, 10);
    const auto got = find_split_paths(pc.cfg, pc.pool1, pc.pool2, pc.tol, k);
    const auto expect = oracle::all_paths(pc.cfg, pc.pool1, pc.pool2, pc.tol, k);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].nodes, expect[i].nodes);
      EXPECT_EQ(got[i].p, expect[i].p);
      EXPECT_EQ(got[i].q, expect[i].q);
    }
    const bool has_planted = std::any_of(got.begin(), got.end(), [&](const SplitPath& s) {
      return s.nodes == pc.path_nodes && s.p == pc.path_p && s.q == pc.path_q;
    });
    EXPECT_TRUE(has_planted);

    PathSearchOptions capped;
    capped.cap = 3;
    capped.workers = 3;
    const auto first = find_split_paths(pc.cfg, pc.pool1, pc.pool2, pc.tol, k, capped);
    ASSERT_EQ(first.size(), std::min<std::size_t>(3, got.size()));
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i], got[i]);
  }
}

TEST(SplitPaths, RegularSubsetMatchesFixpoint) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 15; ++t) {
    const auto pc = gen::planted_configuration(rng, BigInt(1), 1, 2, 10);
    const std::size_t target = 1 + t % 3;
    const auto rs = regular_subset(pc.cfg, pc.pool1, pc.pool2, pc.tol, 0.5, target);
    EXPECT_EQ(rs.kept, oracle::regular_fixpoint(pc.cfg, pc.pool1, pc.pool2, pc.tol, target));
    EXPECT_EQ(rs.subset.size(), rs.kept.size());
    EXPECT_EQ(rs.meets_density, static_cast<double>(rs.kept.size()) >= 0.5 * pc.cfg.size());
    if (!rs.kept.empty()) {
      EXPECT_GE(rs.min_degree, target);
    }
  }
}

TEST(SplitPaths, DisjointPairsContainThePlantedPair) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const auto pc = gen::planted_configuration(rng, BigInt(1), 1, 1, 9);
    const auto pairs = find_disjoint_path_pairs(pc.cfg, pc.pool1, pc.pool2, pc.tol, 2, pc.pair_start);
    bool found = false;
    for (const auto& [a, b] : pairs) {
      EXPECT_TRUE(a < b);
      EXPECT_EQ(a.end(), b.end());
      EXPECT_EQ(a.start(), pc.pair_start);
      const auto matches = [](const SplitPath& s, const auto& n, const auto& p, const auto& q) {
        return s.nodes == n && s.p == p && s.q == q;
      };
      found = found || (matches(a, pc.pair_a, pc.pair_a_p, pc.pair_a_q) && matches(b, pc.pair_b, pc.pair_b_p, pc.pair_b_q)) ||
              (matches(b, pc.pair_a, pc.pair_a_p, pc.pair_a_q) && matches(a, pc.pair_b, pc.pair_b_p, pc.pair_b_q));
    }
    EXPECT_TRUE(found);
  }
}

TEST(SplitPaths, InputValidation) {
  std::mt19937_64 rng(67);
  const auto pc = gen::planted_configuration(rng, BigInt(1), 1, 1, 8);
  EXPECT_THROW(find_split_paths(pc.cfg, {}, pc.pool2, pc.tol, 1), DomainError);
  EXPECT_THROW(find_split_paths(pc.cfg, {13, 29}, pc.pool2, pc.tol, 1), DomainError);
  EXPECT_THROW(find_split_paths(pc.cfg, {15}, pc.pool2, pc.tol, 1), DomainError);
  EXPECT_THROW(find_split_paths(pc.cfg, pc.pool1, pc.pool2, pc.tol, 0), DomainError);
  PathSearchOptions bad_start;
  bad_start.start = 100;
  EXPECT_THROW(find_split_paths(pc.cfg, pc.pool1, pc.pool2, pc.tol, 1, bad_start), DomainError);
  EXPECT_THROW(find_disjoint_path_pairs(pc.cfg, pc.pool1, pc.pool2, pc.tol, 1, 100), DomainError);
  auto wrong_q = pc.tol;
  wrong_q.Q = 30;
  EXPECT_THROW(find_split_paths(pc.cfg, pc.pool1, pc.pool2, wrong_q, 1), DomainError);
}

TEST(CycleFrequency, RecoversAPlantedShift) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 200; ++t) {
    const BigInt Q = std::vector<long>{1, 30, 2310}[rng() % 3];
    const int j = 1 + static_cast<int>(rng() % 3);
    const std::vector<std::uint64_t> p = {13, 17}, q = {19, 23}, pr = {29, 31}, qr = {37, 41};
    const std::uint64_t y = 1000 + rng() % 100'000;
    const auto yj = pow(Rational(from_u64(y)), static_cast<unsigned>(j));
    const BigInt A = pow(BigInt(13 * 17 * 37 * 41), static_cast<unsigned>(j));
    const BigInt B = pow(BigInt(29 * 31 * 19 * 23), static_cast<unsigned>(j));
    const BigInt D = A - B;
    // alpha = m Q / D + T0 / (y^j A) with |D T0 / (y^j A)| < Q / 2
    const Rational limit = Rational(Q) * yj * Rational(A) / (Rational(2) * Rational(abs(D)));
    Rational T0 = gen::random_signed(rng, limit * Rational(99, 100));
    T0.canonicalize();
    const BigInt m = static_cast<long>(rng() % 1000);
    const Rational rational = mod_floor(Rational(m * Q) / Rational(D), Q);
    const Rational alpha = mod_floor(rational + T0 / (yj * Rational(A)), Q);
    const auto c = cycle_frequency(alpha, Q, y, j, p, q, pr, qr);
    EXPECT_EQ(c.T, T0);
    EXPECT_EQ(c.rational_part, rational);
    EXPECT_EQ(c.A, A);
    EXPECT_EQ(c.B, B);
  }
  EXPECT_THROW(cycle_frequency(Rational(0), 1, 10, 1, {2}, {3}, {2}, {3}), DomainError);  // A = B
  EXPECT_THROW(cycle_frequency(Rational(0), 1, 10, 1, {2}, {3}, {5}, {}), DomainError);
}
