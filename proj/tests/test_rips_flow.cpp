#include <gtest/gtest.h>

#include "coarse/rips.hpp"
#include "coarse/space.hpp"

using namespace coarse;

TEST(Rips, LineWindowIsPath) {
  auto z = make_grid(1, -5, 5);
  auto g = build_rips(z, Rational(1));
  EXPECT_EQ(g.components.size(), 1u);
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_EQ(g.max_degree(), 2u);
}

TEST(Rips, ScaleControlsEdges) {
  auto pts = make_line_points({Rational(0), Rational(10), Rational(20)});
  auto g5 = build_rips(pts, Rational(5));
  EXPECT_EQ(g5.edge_count(), 0u);
  EXPECT_EQ(g5.components.size(), 3u);
  auto g10 = build_rips(pts, Rational(10));
  EXPECT_EQ(g10.edge_count(), 2u);
  EXPECT_EQ(g10.components.size(), 1u);
  EXPECT_THROW(build_rips(pts, Rational(0)), InvalidInput);
}

TEST(Rips, FractionalScale) {
  auto pts = make_line_points({Rational(0), Rational(3, 2), Rational(3)});
  EXPECT_EQ(build_rips(pts, Rational(3, 2)).edge_count(), 2u);
  EXPECT_EQ(build_rips(pts, Rational(7, 5)).edge_count(), 0u);
}

TEST(Unbounded, Verdicts) {
  EXPECT_TRUE(check_coarsely_unbounded(build_rips(make_grid(1, -5, 5), Rational(1))).pass);
  auto cyc = check_coarsely_unbounded(build_rips(make_cycle(9), Rational(1)));
  EXPECT_FALSE(cyc.pass);
  EXPECT_EQ(cyc.bounded_components.size(), 1u);

  auto u = make_disjoint_union({make_grid(1, -5, 5), make_line_points({Rational(0)})}, {3, 3});
  auto rep = check_coarsely_unbounded(build_rips(u, Rational(1)));
  EXPECT_FALSE(rep.pass);
  ASSERT_EQ(rep.bounded_components.size(), 1u);
  EXPECT_EQ(rep.bounded_components.front(), std::vector<PointId>{11});
}

TEST(Flow, PathSinkAtLeftEnd) {
  auto path = make_grid(1, 0, 5);
  auto f = build_flow(build_rips(path, Rational(1)));
  EXPECT_EQ(f.sinks, std::vector<PointId>{0});
  for (PointId i = 1; i <= 5; ++i) EXPECT_EQ(*f.image(i), i - 1);
  EXPECT_FALSE(f.image(0).has_value());
  EXPECT_EQ(sigma_depth(f, 0), 0u);
  EXPECT_EQ(sigma_depth(f, 4), 4u);
  EXPECT_EQ(validate_flow(f, path), "");
}

TEST(Flow, Star) {
  // centre 0, leaves 1 and 2, frontier {1}
  auto star = WindowSpace::from_graph(3, {{0, 1, 1}, {0, 2, 1}}, {1}, "star");
  auto f = build_flow(build_rips(star, Rational(1)));
  EXPECT_EQ(f.sinks, std::vector<PointId>{1});
  EXPECT_EQ(*f.image(0), 1u);
  EXPECT_EQ(*f.image(2), 0u);
  EXPECT_EQ(sigma_depth(f, 2), 2u);
}

TEST(Flow, BoundedComponentThrows) {
  EXPECT_THROW(build_flow(build_rips(make_cycle(9), Rational(1))), NotCoarselyUnbounded);
  try {
    build_flow(build_rips(make_cycle(9), Rational(1)));
  } catch (const NotCoarselyUnbounded& e) {
    EXPECT_EQ(e.bounded_components().size(), 1u);
    EXPECT_EQ(e.bounded_components().front().size(), 9u);
  }
}

TEST(Flow, OneSinkPerComponent) {
  auto u = make_disjoint_union({make_grid(1, 0, 4), make_grid(1, 0, 6)}, {10, 10});
  auto g = build_rips(u, Rational(1));
  auto f = build_flow(u, g);
  EXPECT_EQ(f.sinks, (std::vector<PointId>{0, 5}));
  EXPECT_EQ(validate_flow(f, u), "");
  for (PointId x = 0; x < u.size(); ++x) EXPECT_LE(sigma_depth(f, x), 6u);
}

TEST(Flow, TreeFlowEdgesAreWithinScale) {
  auto t = make_rooted_tree(3, 4);
  for (Rational r : {Rational(1), Rational(2), Rational(5, 2)}) {
    auto g = build_rips(t, r);
    auto f = build_flow(g);
    EXPECT_EQ(validate_flow(f, t), "");
    for (PointId x = 0; x < t.size(); ++x)
      if (auto y = f.image(x)) {
        EXPECT_LE(t.dist(x, *y), r);
      }
  }
}
