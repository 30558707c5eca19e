#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coarse/chain.hpp"
#include "coarse/families.hpp"
#include "coarse/family.hpp"
#include "oracles.hpp"

using namespace coarse;

TEST(Chain, Setminus) {
  Chain a{{0, 3}}, b{{0, 1}};
  EXPECT_EQ(setminus(a, b), (Chain{{0, 2}}));
  EXPECT_EQ(meet(a, a), a);
  EXPECT_TRUE(setminus(a, a).empty());
}

TEST(Chain, DistanceAndMeet) {
  Chain a{{0, 2}, {1, 1}}, b{{1, 3}, {2, 1}};
  EXPECT_EQ(l1_distance(a, b), 5u);
  EXPECT_EQ(meet(a, b).norm(), 1u);
  EXPECT_EQ(meet_norm(a, b), 1u);
  EXPECT_EQ(join(a, b), (Chain{{0, 2}, {1, 3}, {2, 1}}));
}

TEST(Chain, NormalFormDropsZerosAndMergesDuplicates) {
  Chain c{{3, 0}, {1, 2}, {1, 1}};
  EXPECT_EQ(c.support(), std::vector<PointId>{1});
  EXPECT_EQ(c[1], 3u);
  EXPECT_EQ(c[3], 0u);
}

TEST(Chain, BaseAndTowers) {
  auto bt = base_and_towers(Chain{{0, 3}, {1, 1}});
  EXPECT_EQ(bt.base, (Chain{{0, 1}, {1, 1}}));
  EXPECT_EQ(bt.towers, (Chain{{0, 2}}));
  EXPECT_TRUE(base_and_towers(Chain::indicator({2, 4, 9})).towers.empty());
  auto single = base_and_towers(Chain{{5, 7}});
  EXPECT_EQ(single.base, (Chain{{5, 1}}));
  EXPECT_EQ(single.towers, (Chain{{5, 6}}));
}

TEST(Chain, Ratio) {
  auto A = Chain::indicator({0, 1, 2}), B = Chain::indicator({1, 2, 3});
  EXPECT_EQ(ratio(A, B), (Ratio{2, 2}));
  EXPECT_EQ(to_string(ratio(A, B)), "1/1");
  EXPECT_EQ(ratio(A, A), (Ratio{0, 1}));
  auto inf = ratio(Chain::indicator({0}), Chain::indicator({1}));
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_EQ(to_string(inf), "inf");
  EXPECT_FALSE(inf.below(Rational(1000)));
}

TEST(Chain, RandomOpsMatchDense) {
  std::mt19937_64 rng(5);
  const std::size_t n = 20;
  for (int t = 0; t < 500; ++t) {
    std::vector<Chain::Entry> ea, eb;
    for (PointId p = 0; p < n; ++p) {
      if (rng() % 2) ea.emplace_back(p, rng() % 5);
      if (rng() % 2) eb.emplace_back(p, rng() % 5);
    }
    Chain a(ea), b(eb);
    auto da = oracle::dense(a, n), db = oracle::dense(b, n);
    auto [num, den] = oracle::counts(da, db);
    EXPECT_EQ(l1_distance(a, b), num);
    EXPECT_EQ(meet_norm(a, b), den);
    EXPECT_EQ(oracle::dense(meet(a, b), n), oracle::meet(da, db));
    EXPECT_EQ(setminus(a, b).norm(), oracle::setminus_norm(da, db));
    EXPECT_EQ(a.leq(b), oracle::leq(da, db));
    EXPECT_EQ(ratio(a, b), (Ratio{num, den}));
  }
}

TEST(Multiset, CountsCells) {
  MultisetFamily m;
  m.params.M = 3;
  m.sets[0] = {{7, 0}, {7, 3}};
  m.sets[1] = {{7, 0}, {9, 1}};
  auto f = family_from_multisets(m);
  EXPECT_EQ(f.chains.at(0), (Chain{{7, 2}}));
  EXPECT_EQ(f.chains.at(1), (Chain{{7, 1}, {9, 1}}));
  m.sets[2] = {{1, 4}};
  EXPECT_THROW(family_from_multisets(m), InvalidInput);
}

TEST(Multiset, InequalitiesAgainstSetArithmetic) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    MultisetFamily m;
    m.params.M = 3;
    std::map<PointId, std::set<std::pair<PointId, std::uint64_t>>> brute;
    for (PointId x = 0; x < 4; ++x) {
      do {
        for (PointId z = 0; z < 20; ++z)
          for (std::uint64_t l = 0; l <= 3; ++l)
            if (rng() % 6 == 0) {
              m.sets[x].push_back({z, l});
              brute[x].insert({z, l});
            }
      } while (m.sets[x].empty());
    }
    m.normalize();
    auto f = family_from_multisets(m);
    std::vector<std::pair<PointId, PointId>> pairs = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    auto rep = check_multiset_inequalities(m, f, pairs);
    EXPECT_TRUE(rep.pass);
    for (auto [x, y] : pairs) {
      auto [sym, inter] = oracle::set_counts(brute[x], brute[y]);
      EXPECT_EQ(intersection_size(m.sets[x], m.sets[y]), inter);
      EXPECT_LE(l1_distance(f.chains.at(x), f.chains.at(y)), sym);
      EXPECT_GE(meet_norm(f.chains.at(x), f.chains.at(y)), inter);
    }
  }
}

TEST(Verify, BallFamilyOnLine) {
  auto z = make_grid(1, -60, 60);
  auto fam = ball_family(z, Rational(10), Rational(1), Rational(1, 8), interior_core(z, Rational(10)));
  auto rep = verify_family(z, fam, true);
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.worst);
  EXPECT_EQ(rep.worst->ratio, (Ratio{2, 20}));
  EXPECT_EQ(rep.max_support_radius, Rational(10));

  // brute force over the same pairs
  std::size_t pairs = 0;
  for (const auto& [x, a] : fam.chains)
    for (const auto& [y, b] : fam.chains)
      if (x < y && z.dist(x, y) <= 1) {
        ++pairs;
        auto [num, den] = oracle::counts(oracle::dense(a, z.size()), oracle::dense(b, z.size()));
        EXPECT_TRUE(oracle::ratio_below(num, den, 1, 8));
      }
  EXPECT_EQ(rep.pairs_checked, pairs);
}

TEST(Verify, ConstantFamilyHasRatioZero) {
  auto z = make_grid(1, 0, 20);
  IndexedFamily fam;
  fam.params = {Rational(2), Rational(1, 10), Rational(20), 0};
  for (PointId x = 0; x < z.size(); ++x) fam.chains.emplace(x, Chain::indicator({3, 4, 5}));
  auto rep = verify_family(z, fam, true);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.worst->ratio, (Ratio{0, 1}));
}

TEST(Verify, EmptyIntersectionIsInfiniteAndFails) {
  auto z = make_grid(1, 0, 10);
  IndexedFamily fam;
  fam.params = {Rational(1), Rational(1, 2), Rational(0), 0};
  for (PointId x = 0; x < z.size(); ++x) fam.chains.emplace(x, Chain::indicator({x}));
  auto rep = verify_family(z, fam, true);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.ratio_ok);
  EXPECT_TRUE(rep.support_ok);
  ASSERT_TRUE(rep.worst);
  EXPECT_TRUE(rep.worst->ratio.is_infinite());
  EXPECT_EQ(rep.ratio_failure_count, 10u);
}

TEST(Verify, SupportAndFlatness) {
  auto z = make_grid(1, 0, 10);
  IndexedFamily fam;
  fam.params = {Rational(1), Rational(1), Rational(1), 0};
  fam.chains.emplace(0, Chain{{0, 1}, {1, 1}});
  fam.chains.emplace(1, Chain{{0, 1}, {1, 2}, {3, 1}});
  auto rep = verify_family(z, fam, true);
  EXPECT_FALSE(rep.support_ok);
  EXPECT_EQ(rep.support_violations, std::vector<PointId>{1});
  EXPECT_FALSE(rep.flat_ok);
  EXPECT_EQ(rep.non_flat, std::vector<PointId>{1});
  EXPECT_TRUE(verify_family(z, fam, false).flat_ok);
}
