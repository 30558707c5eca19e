#include <gtest/gtest.h>

#include <random>

#include "coarse/space.hpp"
#include "oracles.hpp"

using namespace coarse;

namespace {

PointId at(const WindowSpace& s, std::vector<std::int64_t> c) { return *s.point_at(c); }

}  // namespace

TEST(Space, CycleAntipodal) {
  auto c = make_cycle(4);
  EXPECT_EQ(c.dist(0, 2), Rational(2));
  EXPECT_TRUE(c.frontier().empty());
}

TEST(Space, LineWindowEnds) {
  auto g = make_grid(1, -5, 5);
  EXPECT_EQ(g.size(), 11u);
  EXPECT_EQ(g.dist(at(g, {-5}), at(g, {5})), Rational(10));
  EXPECT_EQ(g.frontier(), (std::vector<PointId>{at(g, {-5}), at(g, {5})}));
}

TEST(Space, DisjointUnionSpacing) {
  auto u = make_disjoint_union({make_cycle(3), make_cycle(9)}, {6, 6});
  ASSERT_EQ(u.size(), 12u);
  // basepoints are ids 0 and 3
  EXPECT_EQ(u.dist(0, 3), Rational(6));
  EXPECT_EQ(u.dist(1, 3), Rational(7));
  EXPECT_EQ(u.dist(1, 3 + 4), Rational(1 + 6 + 4));
  EXPECT_EQ(u.dist(3 + 4, 3 + 5), Rational(1));
}

TEST(Space, DisjointUnionMatrixAgreesWithGraph) {
  auto a = make_disjoint_union({make_cycle(3), make_cycle(5)}, {4, 4});
  auto b = make_disjoint_union({make_line_points({Rational(0), Rational(1), Rational(2)}), make_cycle(5)}, {4, 4});
  EXPECT_FALSE(b.is_graph_metric());
  EXPECT_EQ(b.dist(2, 3 + 2), Rational(2 + 4 + 2));
  EXPECT_EQ(a.dist(1, 3 + 2), Rational(1 + 4 + 2));
}

TEST(Space, Balls) {
  auto z = make_grid(1, -10, 10);
  EXPECT_EQ(z.ball(at(z, {0}), Rational(1)),
            (std::vector<PointId>{at(z, {-1}), at(z, {0}), at(z, {1})}));
  auto t = make_regular_tree(3, 3);
  EXPECT_EQ(t.ball(0, Rational(1)).size(), 4u);
  for (auto* s : {&z, &t}) EXPECT_EQ(s->ball(5, Rational(0)), std::vector<PointId>{5});
}

TEST(Space, GrowthProfile) {
  auto z = make_grid(1, -20, 20);
  EXPECT_EQ(growth_profile(z, {Rational(3)}).front().max_ball, 7u);
  EXPECT_EQ(growth_profile(make_cycle(9), {Rational(1)}).front().max_ball, 3u);
  EXPECT_EQ(growth_profile(make_regular_tree(3, 4), {Rational(2)}).front().max_ball, 10u);
}

TEST(Space, GridMatchesL1AndFloyd) {
  auto g = make_grid(2, -3, 3);
  auto fw = oracle::floyd(g.size(), g.edges());
  for (PointId a = 0; a < g.size(); ++a)
    for (PointId b = 0; b < g.size(); ++b) {
      const auto& ca = g.coords()[a];
      const auto& cb = g.coords()[b];
      std::int64_t l1 = std::abs(ca[0] - cb[0]) + std::abs(ca[1] - cb[1]);
      ASSERT_EQ(g.dist(a, b), Rational(l1));
      ASSERT_EQ(fw[a][b], l1);
    }
  for (PointId x = 0; x < g.size(); ++x) {
    const auto& c = g.coords()[x];
    bool edge = std::abs(c[0]) == 3 || std::abs(c[1]) == 3;
    EXPECT_EQ(g.on_frontier(x), edge);
  }
}

TEST(Space, RandomWeightedGraphsAgreeWithFloyd) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<Edge> edges;
    for (PointId v = 1; v < n; ++v) edges.push_back({static_cast<PointId>(rng() % v), v, 1 + static_cast<std::int64_t>(rng() % 5)});
    const std::size_t extra = trial % 2 ? rng() % n : 0;  // odd trials have cycles
    for (std::size_t k = 0; k < extra; ++k) {
      PointId a = rng() % n, b = rng() % n;
      if (a != b) edges.push_back({a, b, 1 + static_cast<std::int64_t>(rng() % 5)});
    }
    auto s = WindowSpace::from_graph(n, edges, {}, "random");
    auto fw = oracle::floyd(n, s.edges());
    for (PointId a = 0; a < n; ++a)
      for (PointId b = 0; b < n; ++b) ASSERT_EQ(s.dist(a, b), Rational(fw[a][b])) << trial;
    for (PointId x = 0; x < n; ++x) {
      Rational R(static_cast<std::int64_t>(rng() % 8));
      std::vector<PointId> brute;
      for (PointId y = 0; y < n; ++y)
        if (fw[x][y] <= R.numerator()) brute.push_back(y);
      ASSERT_EQ(s.ball(x, R), brute);
    }
  }
}

TEST(Space, MetricAxiomsOnGenerators) {
  std::vector<WindowSpace> spaces = {make_cycle(7), make_regular_tree(3, 2), make_rooted_tree(2, 3),
                                     make_product_interval(make_cycle(5), 3),
                                     make_disjoint_union({make_cycle(3), make_grid(1, 0, 4)}, {2, 5})};
  for (const auto& s : spaces)
    for (PointId a = 0; a < s.size(); ++a)
      for (PointId b = 0; b < s.size(); ++b) {
        ASSERT_EQ(s.dist(a, b), s.dist(b, a));
        ASSERT_EQ(s.dist(a, b) == 0, a == b);
        for (PointId c = 0; c < s.size(); ++c) ASSERT_LE(s.dist(a, c), s.dist(a, b) + s.dist(b, c)) << s.label();
      }
}

TEST(Space, ProductIntervalIsSumMetric) {
  auto base = make_cycle(6);
  auto p = make_product_interval(base, 3);
  for (PointId a = 0; a < p.size(); ++a)
    for (PointId b = 0; b < p.size(); ++b)
      ASSERT_EQ(p.dist(a, b), base.dist(a / 3, b / 3) + Rational(std::abs(int(a % 3) - int(b % 3))));
}

TEST(Space, RejectsBadInput) {
  EXPECT_THROW(WindowSpace::from_graph(3, {{0, 1, 1}}, {}, "x"), InvalidInput);
  EXPECT_THROW(WindowSpace::from_graph(2, {{0, 2, 1}}, {}, "x"), UnknownPoint);
  EXPECT_THROW(WindowSpace::from_graph(2, {{0, 1, 0}}, {}, "x"), InvalidInput);
  std::vector<Rational> bad = {Rational(0), Rational(1), Rational(5), Rational(1), Rational(0),
                               Rational(1), Rational(5), Rational(1), Rational(0)};
  EXPECT_THROW(WindowSpace::from_matrix(3, bad, {}, "x"), InvalidInput);
  std::vector<Rational> asym = {Rational(0), Rational(1), Rational(2), Rational(0)};
  EXPECT_THROW(WindowSpace::from_matrix(2, asym, {}, "x"), InvalidInput);
  EXPECT_THROW(make_cycle(4).dist(0, 4), UnknownPoint);
  EXPECT_THROW(WindowSpace::from_graph(2, {{0, 1, 1}}, {7}, "x"), UnknownPoint);
}

TEST(Space, DistanceToFrontier) {
  auto z = make_grid(1, 0, 10);
  EXPECT_EQ(*z.distance_to_frontier(at(z, {3})), Rational(3));
  EXPECT_EQ(*z.distance_to_frontier(at(z, {8})), Rational(2));
  EXPECT_FALSE(make_cycle(5).distance_to_frontier(0).has_value());
}

TEST(Space, LargeTreeUsesExactDistances) {
  auto t = make_rooted_tree(2, 12);
  ASSERT_EQ(t.size(), 8191u);
  // leftmost and rightmost leaves meet at the root
  EXPECT_EQ(t.dist(4095, 8190), Rational(24));
  EXPECT_EQ(t.dist(4095, 4096), Rational(2));
  EXPECT_EQ(t.ball(0, Rational(2)).size(), 7u);
}
