#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// R-boundary: points outside U within distance R of U. Sorted.
inline std::vector<PointId> boundary(const WindowSpace& space, const std::vector<PointId>& U, const Rational& R) {
  std::vector<char> in_u(space.size(), 0), mark(space.size(), 0);
  for (PointId u : U) {
    space.check(u);
    in_u[u] = 1;
  }
  std::vector<PointId> out;
  for (PointId u : U)
    for (PointId y : space.ball(u, R))
      if (!in_u[y] && !mark[y]) {
        mark[y] = 1;
        out.push_back(y);
      }
  std::sort(out.begin(), out.end());
  return out;
}

/// |boundary| <= eps |U| by cross-multiplication.
inline bool is_foelner(std::size_t boundary_size, std::size_t set_size, const Rational& eps) {
  return static_cast<__int128>(boundary_size) * eps.denominator() <=
         static_cast<__int128>(eps.numerator()) * static_cast<__int128>(set_size);
}

struct FoelnerSearchOptions {
  std::size_t max_set_size = 1024;
};

/// Greedy growth from each admissible centre (in id order): start from {c}
/// and repeatedly add the boundary point whose addition leaves the smallest
/// boundary, ties to the smallest id. Only points farther than R from the
/// frontier are used, so the window boundary equals the boundary in the
/// infinite model. Returns the first U with |d_R U| <= eps |U|, or nullopt
/// (which says nothing about non-amenability).
inline std::optional<std::vector<PointId>> foelner_search(const WindowSpace& space, const Rational& R,
                                                          const Rational& eps, FoelnerSearchOptions opts = {}) {
  if (eps <= 0) throw InvalidInput("epsilon must be positive");
  if (R < 0) throw InvalidInput("R must be nonnegative");
  const std::size_t n = space.size();
  std::vector<char> admissible(n, 1);
  for (PointId x = 0; x < n; ++x) {
    auto d = space.distance_to_frontier(x);
    admissible[x] = !d || *d > R;
  }
  std::vector<std::vector<PointId>> balls(n);
  for (PointId x = 0; x < n; ++x) balls[x] = space.ball(x, R);

  for (PointId c = 0; c < n; ++c) {
    if (!admissible[c]) continue;
    std::vector<char> in_u(n, 0), in_b(n, 0);
    std::vector<PointId> U{c};
    in_u[c] = 1;
    std::size_t bsize = 0;
    for (PointId y : balls[c])
      if (y != c) {
        in_b[y] = 1;
        ++bsize;
      }
    while (true) {
      if (is_foelner(bsize, U.size(), eps)) {
        std::sort(U.begin(), U.end());
        return U;
      }
      if (U.size() >= opts.max_set_size) break;
      std::optional<PointId> best;
      std::size_t best_size = 0;
      for (PointId p = 0; p < n; ++p) {
        if (!in_b[p] || !admissible[p]) continue;
        std::size_t fresh = 0;
        for (PointId q : balls[p])
          if (!in_u[q] && !in_b[q] && q != p) ++fresh;
        std::size_t next = bsize - 1 + fresh;
        if (!best || next < best_size) {
          best = p;
          best_size = next;
        }
      }
      if (!best) break;
      PointId p = *best;
      in_b[p] = 0;
      in_u[p] = 1;
      U.push_back(p);
      for (PointId q : balls[p])
        if (!in_u[q] && !in_b[q]) in_b[q] = 1;
      bsize = best_size;
    }
  }
  return std::nullopt;
}

using Offset = std::vector<std::int64_t>;

/// A_x = x + F for x in `core` (default: every point whose translate fits in
/// the window). S is the largest word length of an element of F.
inline IndexedFamily group_foelner_family(const WindowSpace& space, const std::vector<Offset>& F, const Rational& R,
                                          const Rational& eps, std::optional<std::vector<PointId>> core = {}) {
  if (!space.has_coords()) throw InvalidInput("translation needs a grid space");
  if (F.empty()) throw InvalidInput("F must be non-empty");
  const std::size_t dim = space.coords().front().size();
  std::int64_t s = 0;
  for (const auto& f : F) {
    if (f.size() != dim) throw InvalidInput("offset dimension does not match the grid");
    std::int64_t len = 0;
    for (auto c : f) len += std::abs(c);
    s = std::max(s, len);
  }
  IndexedFamily fam;
  fam.params.R = R;
  fam.params.epsilon = eps;
  fam.params.S = Rational(s);
  fam.params.validate();

  auto translate = [&](PointId x) -> std::optional<Chain> {
    std::vector<PointId> pts;
    for (const auto& f : F) {
      Offset c = space.coords()[x];
      for (std::size_t k = 0; k < dim; ++k) c[k] += f[k];
      auto p = space.point_at(c);
      if (!p) return std::nullopt;
      pts.push_back(*p);
    }
    return Chain::indicator(pts);
  };
  if (core) {
    for (PointId x : *core) {
      space.check(x);
      auto a = translate(x);
      if (!a) throw TranslateEscapesWindow(x);
      fam.chains.emplace(x, std::move(*a));
    }
  } else {
    for (PointId x = 0; x < space.size(); ++x)
      if (auto a = translate(x)) fam.chains.emplace(x, std::move(*a));
    if (fam.chains.empty()) throw InvalidInput("no translate of F fits in the window");
  }
  return fam;
}

}  // namespace coarse
