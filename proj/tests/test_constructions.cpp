#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coarse/amenability.hpp"
#include "coarse/box_space.hpp"
#include "coarse/coarse_map.hpp"
#include "coarse/families.hpp"
#include "oracles.hpp"

using namespace coarse;

namespace {

std::vector<PointId> ids(const WindowSpace& z, std::int64_t lo, std::int64_t hi) {
  std::vector<PointId> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(*z.point_at({v}));
  return out;
}

std::vector<Offset> interval(std::int64_t lo, std::int64_t hi) {
  std::vector<Offset> F;
  for (auto v = lo; v <= hi; ++v) F.push_back({v});
  return F;
}

}  // namespace

TEST(Boundary, Interval) {
  auto z = make_grid(1, -20, 20);
  auto b = boundary(z, ids(z, 0, 9), Rational(1));
  EXPECT_EQ(b, (std::vector<PointId>{*z.point_at({-1}), *z.point_at({10})}));
  EXPECT_TRUE(is_foelner(b.size(), 10, Rational(1, 5)));
  EXPECT_FALSE(is_foelner(b.size(), 10, Rational(1, 6)));
}

TEST(Boundary, WholeCycleAndEmptySet) {
  auto c = make_cycle(9);
  std::vector<PointId> all(9);
  for (PointId i = 0; i < 9; ++i) all[i] = i;
  EXPECT_TRUE(boundary(c, all, Rational(3)).empty());
  EXPECT_TRUE(boundary(c, {}, Rational(3)).empty());
}

TEST(FoelnerSearch, LineNeedsEightPoints) {
  auto z = make_grid(1, 0, 99);
  auto U = foelner_search(z, Rational(1), Rational(1, 4));
  ASSERT_TRUE(U);
  EXPECT_GE(U->size(), 8u);
  EXPECT_LE(boundary(z, *U, Rational(1)).size() * 4, U->size());
}

TEST(FoelnerSearch, LargeEpsilonAcceptsSingleton) {
  auto z = make_grid(1, 0, 20);
  auto U = foelner_search(z, Rational(1), Rational(2));
  ASSERT_TRUE(U);
  EXPECT_EQ(U->size(), 1u);
}

TEST(FoelnerSearch, BinaryTreeFindsNothing) {
  auto t = make_regular_tree(3, 7);
  EXPECT_FALSE(foelner_search(t, Rational(1), Rational(1, 4), {256}).has_value());
}

TEST(GroupFamily, IntervalTranslates) {
  auto z = make_grid(1, -40, 40);
  auto fam = group_foelner_family(z, interval(0, 9), Rational(1), Rational(1, 4));
  EXPECT_EQ(fam.params.S, Rational(9));
  auto rep = verify_family(z, fam, true);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.worst->ratio, (Ratio{2, 9}));

  auto wide = group_foelner_family(z, interval(0, 19), Rational(1), Rational(1, 8));
  auto rep2 = verify_family(z, wide, true);
  EXPECT_TRUE(rep2.pass);
  EXPECT_EQ(rep2.worst->ratio, (Ratio{2, 19}));
}

TEST(GroupFamily, SingletonIsDisjoint) {
  auto z = make_grid(1, -5, 5);
  auto fam = group_foelner_family(z, {{0}}, Rational(1), Rational(1, 4));
  auto rep = verify_family(z, fam, true);
  EXPECT_FALSE(rep.pass);
  EXPECT_TRUE(rep.worst->ratio.is_infinite());
}

TEST(GroupFamily, ExplicitCoreMustFit) {
  auto z = make_grid(1, 0, 10);
  EXPECT_THROW(group_foelner_family(z, interval(0, 3), Rational(1), Rational(1, 4), std::vector<PointId>{9}),
               TranslateEscapesWindow);
}

TEST(GroupFamily, SquaresInTheGrid) {
  auto g = make_grid(2, 0, 14);
  std::vector<Offset> F;
  for (std::int64_t a = 0; a < 6; ++a)
    for (std::int64_t b = 0; b < 6; ++b) F.push_back({a, b});
  auto fam = group_foelner_family(g, F, Rational(1), Rational(1, 2));
  auto rep = verify_family(g, fam, true);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.worst->ratio, (Ratio{12, 30}));
}

TEST(Pushforward, IdentityKeepsFamily) {
  auto z = make_grid(1, -20, 20);
  auto fam = ball_family(z, Rational(3), Rational(1), Rational(1, 2), interior_core(z, Rational(0)));
  std::vector<PointId> id(z.size());
  for (PointId x = 0; x < z.size(); ++x) id[x] = x;
  auto out = pushforward_injective(fam, z, z, id);
  EXPECT_EQ(out.chains, fam.chains);
}

TEST(Pushforward, DoublingPreservesRatios) {
  auto x = make_grid(1, -20, 20);
  std::vector<Rational> pos;
  for (std::int64_t v = -20; v <= 20; ++v) pos.push_back(Rational(2 * v));
  auto y = make_line_points(pos);
  auto fam = ball_family(x, Rational(4), Rational(1), Rational(1, 2), interior_core(x, Rational(0)));
  std::vector<PointId> f(x.size());
  for (PointId p = 0; p < x.size(); ++p) f[p] = p;
  auto out = pushforward_injective(fam, x, y, f);
  for (auto [a, b] : in_range_pairs(x, fam.indices(), Rational(1)))
    EXPECT_EQ(ratio(out.chains.at(a), out.chains.at(b)), ratio(fam.chains.at(a), fam.chains.at(b)));
}

TEST(Pushforward, EvensIntoIntegers) {
  // X = even integers in [-40, 40] with the induced metric, Y = [-40, 40]
  std::vector<Rational> pos;
  for (std::int64_t v = -40; v <= 40; v += 2) pos.push_back(Rational(v));
  auto X = make_line_points(pos);
  auto Y = make_grid(1, -40, 40);
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) f[p] = *Y.point_at({-40 + 2 * static_cast<std::int64_t>(p)});
  IndexedFamily fam;
  fam.params = {Rational(2), Rational(1), Rational(4), 0};
  for (PointId p = 0; p < X.size(); ++p) {
    std::vector<PointId> pts;
    for (PointId q = p < 2 ? 0 : p - 2; q <= p + 2 && q < X.size(); ++q) pts.push_back(q);
    fam.chains.emplace(p, Chain::indicator(pts));
  }
  auto on_x = verify_family(X, fam, true);
  ASSERT_TRUE(on_x.pass);

  auto out = pushforward_injective(fam, X, Y, f);
  auto base = out.params;
  base.R = Rational(1);
  out.params = base;
  auto on_y = verify_family(Y, out, true);
  EXPECT_EQ(on_y.worst->ratio, on_x.worst->ratio);
  EXPECT_EQ(out.params.S, fam.params.S + Rational(1));
  EXPECT_EQ(on_y.max_support_radius, fam.params.S + Rational(1));
}

TEST(Pushforward, RequiresInjectivity) {
  auto z = make_grid(1, 0, 3);
  auto fam = ball_family(z, Rational(1), Rational(1), Rational(1), interior_core(z, Rational(0)));
  EXPECT_THROW(pushforward_injective(fam, z, z, {0, 0, 1, 2}), InvalidInput);
}

TEST(Project, CollapsesLevels) {
  IndexedFamily fam;
  fam.params = {Rational(1), Rational(1, 4), Rational(3), 0};
  const std::uint64_t M = 2;
  fam.chains.emplace(0, Chain::indicator({5 * M + 0, 5 * M + 1}));
  auto out = project_family(fam, M);
  EXPECT_EQ(out.chains.at(0), Chain::indicator({5}));
  EXPECT_EQ(out.params.epsilon, Rational(1, 2));
}

TEST(Project, RandomCountingInequalities) {
  std::mt19937_64 rng(23);
  auto Z = make_cycle(20);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t M = 1 + rng() % 4;
    IndexedFamily fam;
    fam.params = {Rational(1), Rational(1), Rational(30), 0};
    std::map<PointId, std::set<PointId>> brute;
    for (PointId z = 0; z < Z.size(); ++z) {
      std::vector<PointId> pts;
      while (pts.empty())
        for (PointId w = 0; w < Z.size() * M; ++w)
          if (rng() % 5 == 0) pts.push_back(w);
      fam.chains.emplace(static_cast<PointId>(z * M), Chain::indicator(pts));
      brute[z] = std::set<PointId>(pts.begin(), pts.end());
    }
    auto out = project_family(fam, M);
    for (PointId z = 0; z < Z.size(); ++z)
      for (PointId w : Z.ball(z, Rational(1))) {
        auto [sym, inter] = oracle::set_counts(brute[z], brute[w]);
        std::set<PointId> pa, pb;
        for (PointId p : brute[z]) pa.insert(static_cast<PointId>(p / M));
        for (PointId p : brute[w]) pb.insert(static_cast<PointId>(p / M));
        auto [psym, pinter] = oracle::set_counts(pa, pb);
        EXPECT_EQ(out.chains.at(z), Chain::indicator(std::vector<PointId>(pa.begin(), pa.end())));
        EXPECT_LE(psym, sym);
        EXPECT_GE(M * pinter, inter);
      }
  }
}

TEST(Transfer, CollapsingMapStaysNaive) {
  // X = [-60, 60], Y = the even points of X, f rounds down to an even point
  auto X = make_grid(1, -60, 60);
  std::vector<Rational> pos;
  for (std::int64_t v = -60; v <= 60; v += 2) pos.push_back(Rational(v));
  auto Y = make_line_points(pos);
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) f[p] = p / 2;
  // shift by 2 costs 4/39 < 1/9
  auto fam = ball_family(X, Rational(20), Rational(2), Rational(1, 9), interior_core(X, Rational(20)));
  ASSERT_TRUE(verify_family(X, fam, true).pass);
  auto res = transfer_family(fam, X, Y, f);
  EXPECT_EQ(res.model.M, 3u);  // fibres lie in balls of radius 1
  EXPECT_EQ(res.model.S, Rational(1));
  EXPECT_EQ(res.on_Y.params.epsilon, Rational(1, 3));
  auto rep = verify_family(Y, res.on_Y, true);
  EXPECT_TRUE(rep.ratio_ok);
  EXPECT_TRUE(rep.nonempty_ok);
}

TEST(Moduli, TableInterpolation) {
  ModulusTable rho({{Rational(0), Rational(0)}, {Rational(2), Rational(4)}});
  EXPECT_EQ(rho(Rational(1)), Rational(2));
  EXPECT_EQ(rho(Rational(5)), Rational(10));
  EXPECT_THROW(ModulusTable({{Rational(1), Rational(0)}}), InvalidInput);
  auto z = make_grid(1, 0, 10);
  std::vector<PointId> f(z.size());
  for (PointId p = 0; p < z.size(); ++p) f[p] = p;
  EXPECT_TRUE(check_moduli(z, z, f, ModulusTable({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}),
                           ModulusTable({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}))
                  .pass);
  EXPECT_FALSE(check_moduli(z, z, f, ModulusTable({{Rational(0), Rational(1)}, {Rational(1), Rational(2)}}),
                            ModulusTable({{Rational(0), Rational(5)}, {Rational(1), Rational(6)}}))
                   .pass);
}

TEST(BoxSpace, Schedule) {
  auto model = build_box_space(4, 3, default_box_spacing(Rational(1), 3));
  EXPECT_EQ(model.sizes, (std::vector<std::uint64_t>{4, 16, 64}));
  EXPECT_EQ(model.space.size(), 84u);
  for (PointId a = 0; a < model.space.size(); ++a)
    for (PointId b = 0; b < model.space.size(); ++b)
      if (model.locate(a).first != model.locate(b).first) {
        ASSERT_GT(model.space.dist(a, b), Rational(1));
      }
}

TEST(BoxSpace, ProjectionIsometricOnSmallBalls) {
  auto model = build_box_space(4, 3, default_box_spacing(Rational(1), 3));
  for (std::int64_t c : {-100, 0, 37}) {
    for (std::int64_t g = c - 19; g <= c + 19; ++g)
      for (std::int64_t h = c - 19; h <= c + 19; ++h) {
        PointId pg = model.project(3, g), ph = model.project(3, h);
        ASSERT_EQ(pg == ph, g == h);
      }
  }
  // radius 19 balls are injective but only distances up to 32 survive
  EXPECT_EQ(model.space.dist(model.project(3, 0), model.project(3, 32)), Rational(32));
  EXPECT_EQ(model.space.dist(model.project(3, 0), model.project(3, 38)), Rational(26));
}

TEST(BoxSpace, TranslateFamily) {
  auto model = build_box_space(4, 5, default_box_spacing(Rational(1), 5));
  std::vector<std::int64_t> F;
  for (int v = 0; v <= 9; ++v) F.push_back(v);
  auto res = box_family(model, F, Rational(1), Rational(1, 4));
  EXPECT_EQ(res.S, Rational(9));
  EXPECT_EQ(res.J, 2u);
  EXPECT_TRUE(res.equalities_hold());
  EXPECT_TRUE(res.catch_all_ok);
  EXPECT_EQ(res.worst_ratio, (Ratio{2, 9}));
  EXPECT_TRUE(res.worst_ratio.below(Rational(1, 4)));
  auto rep = verify_family(model.space, res.family, true);
  EXPECT_TRUE(rep.pass);
}

TEST(BoxSpace, TooFewBoxes) {
  auto model = build_box_space(4, 2, default_box_spacing(Rational(1), 2));
  EXPECT_THROW(box_family(model, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, Rational(1), Rational(1, 4)), WindowTooSmall);
}
