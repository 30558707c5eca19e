#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"
#include "coarse/tails.hpp"

namespace coarse {

/// Seeded generator with portable integer draws (std distributions are
/// implementation-defined, which would break byte-identical reruns).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do v = eng_();
    while (v >= limit);
    return v % n;
  }
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 eng_;
};

/// Points at distance >= margin from the frontier (all points if there is none).
inline std::vector<PointId> interior_core(const WindowSpace& space, const Rational& margin) {
  std::vector<PointId> core;
  for (PointId x = 0; x < space.size(); ++x) {
    auto d = space.distance_to_frontier(x);
    if (!d || *d >= margin) core.push_back(x);
  }
  return core;
}

/// a_x(z) = max(0, W - d(x, z)). Needs integer distances. S = W - 1.
inline IndexedFamily tent_family(const WindowSpace& space, std::int64_t W, const Rational& R, const Rational& eps,
                                 const std::vector<PointId>& core) {
  if (W < 1) throw InvalidInput("tent height W must be positive");
  IndexedFamily fam;
  fam.params.R = R;
  fam.params.epsilon = eps;
  fam.params.S = Rational(W - 1);
  fam.params.validate();
  for (PointId x : core) {
    std::vector<Chain::Entry> e;
    for (const auto& [z, d] : space.ball_with_distances(x, Rational(W - 1))) {
      if (d.denominator() != 1) throw InvalidInput("tent family needs integer distances");
      e.emplace_back(z, static_cast<Weight>(W - d.numerator()));
    }
    fam.chains.emplace(x, Chain(std::move(e)));
  }
  if (fam.chains.empty()) throw InvalidInput("tent family has an empty core");
  return fam;
}

/// A_x = B(x, radius).
inline IndexedFamily ball_family(const WindowSpace& space, const Rational& radius, const Rational& R,
                                 const Rational& eps, const std::vector<PointId>& core) {
  IndexedFamily fam;
  fam.params.R = R;
  fam.params.epsilon = eps;
  fam.params.S = radius;
  fam.params.validate();
  for (PointId x : core) fam.chains.emplace(x, Chain::indicator(space.ball(x, radius)));
  if (fam.chains.empty()) throw InvalidInput("ball family has an empty core");
  return fam;
}

namespace detail {

// Path x -> target in a tree given parent pointers and hop depths.
inline std::vector<PointId> tree_path(PointId x, PointId target, const std::vector<PointId>& parent,
                                      const std::vector<std::uint32_t>& depth) {
  std::vector<PointId> up, down;
  PointId a = x, b = target;
  while (depth[a] > depth[b]) {
    up.push_back(a);
    a = parent[a];
  }
  while (depth[b] > depth[a]) {
    down.push_back(b);
    b = parent[b];
  }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = parent[a];
    b = parent[b];
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

}  // namespace detail

/// Randomised height-<=M family on a tree window: A_x holds the first `length`
/// points of the geodesic from x toward the leaf `end`, each point z carrying
/// a random non-empty level set L(z) drawn once and shared by all x. Levels
/// are restricted to those the cover can transport (M - n < |tail of z|).
/// Only points whose geodesic has at least `length` points are indexed.
inline MultisetFamily ray_multiset_family(const WindowSpace& tree, PointId root, PointId end, std::size_t length,
                                          std::uint64_t M, const TailCover& cover, const Rational& R,
                                          const Rational& eps, Rng& rng) {
  tree.check(root);
  tree.check(end);
  if (length < 1) throw InvalidInput("ray length must be positive");
  const std::size_t n = tree.size();
  std::vector<PointId> parent(n, root);
  std::vector<std::uint32_t> depth(n, 0);
  {
    std::vector<char> seen(n, 0);
    std::vector<PointId> queue{root};
    seen[root] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      PointId u = queue[i];
      for (auto [v, w] : tree.neighbors(u))
        if (!seen[v]) {
          seen[v] = 1;
          parent[v] = u;
          depth[v] = depth[u] + 1;
          queue.push_back(v);
        }
    }
    if (queue.size() != n) throw InvalidInput("ray family needs a connected graph space");
  }
  std::vector<std::vector<std::uint64_t>> levels(n);
  for (PointId z = 0; z < n; ++z) {
    const std::uint64_t reach = std::min<std::uint64_t>(cover.tails.at(z).size() - 1, M);
    const std::uint64_t lowest = M - reach;
    for (std::uint64_t l = lowest; l <= M; ++l)
      if (rng.coin()) levels[z].push_back(l);
    if (levels[z].empty()) levels[z].push_back(static_cast<std::uint64_t>(rng.between(
        static_cast<std::int64_t>(lowest), static_cast<std::int64_t>(M))));
  }
  MultisetFamily fam;
  fam.params.R = R;
  fam.params.epsilon = eps;
  fam.params.S = Rational(static_cast<std::int64_t>(length - 1));
  fam.params.M = M;
  for (PointId x = 0; x < n; ++x) {
    auto path = detail::tree_path(x, end, parent, depth);
    if (path.size() < length) continue;
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < length; ++k)
      for (auto l : levels[path[k]]) cells.push_back(Cell{path[k], l});
    fam.sets.emplace(x, std::move(cells));
  }
  fam.normalize();
  return fam;
}

/// Family of sets on Z x {0..M-1} (ids z*M + i): every index (z, i) gets
/// {(w, j) : d(z, w) <= radius, j in L(w)} with random non-empty L(w).
inline IndexedFamily banded_product_family(const WindowSpace& Z, std::uint64_t M, const Rational& radius,
                                           const Rational& R, const Rational& eps, Rng& rng) {
  if (M < 1) throw InvalidInput("M must be positive");
  std::vector<std::vector<std::uint64_t>> levels(Z.size());
  for (PointId w = 0; w < Z.size(); ++w) {
    for (std::uint64_t j = 0; j < M; ++j)
      if (rng.coin()) levels[w].push_back(j);
    if (levels[w].empty()) levels[w].push_back(rng.below(M));
  }
  IndexedFamily fam;
  fam.params.R = R;
  fam.params.epsilon = eps;
  fam.params.S = radius + Rational(static_cast<std::int64_t>(M - 1));
  for (PointId z = 0; z < Z.size(); ++z) {
    std::vector<PointId> pts;
    for (PointId w : Z.ball(z, radius))
      for (auto j : levels[w]) pts.push_back(static_cast<PointId>(w * M + j));
    Chain c = Chain::indicator(pts);
    for (std::uint64_t i = 0; i < M; ++i) fam.chains.emplace(static_cast<PointId>(z * M + i), c);
  }
  return fam;
}

}  // namespace coarse
