#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/rips.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// Finite prefixes (t^x_0 = x, t^x_1, ...) of a uniform cover by tails, one per
/// point, each cut where it meets the frontier. `r` bounds consecutive steps
/// and `K` bounds how many tails pass through a single point.
struct TailCover {
  Rational r{1};
  std::uint64_t K = 1;
  std::vector<std::vector<PointId>> tails;
};

struct TailReport {
  bool pass = true;
  std::uint64_t measured_K = 0;
  Rational measured_r{0};
  PointId busiest_point = 0;
  std::vector<PointId> bad_start;             // t^x_0 != x or empty tail
  std::vector<PointId> repeated_points;       // tail of x revisits a point
  std::vector<PointId> long_steps;            // some step exceeds r
  std::vector<PointId> overloaded_points;     // z covered by more than K tails
  std::vector<PointId> unterminated;          // tail does not end on the frontier
};

/// Checks every cover condition exactly. Frontier termination is only
/// required when the space has a frontier at all.
inline TailReport verify_tail_cover(const TailCover& cover, const WindowSpace& space) {
  TailReport rep;
  if (cover.tails.size() != space.size())
    throw InvalidInput("tail cover has " + std::to_string(cover.tails.size()) + " tails for " +
                       std::to_string(space.size()) + " points");
  std::vector<std::uint64_t> load(space.size(), 0);
  const bool need_frontier = !space.frontier().empty();
  for (PointId x = 0; x < cover.tails.size(); ++x) {
    const auto& t = cover.tails[x];
    if (t.empty() || t.front() != x) {
      rep.bad_start.push_back(x);
      if (t.empty()) continue;
    }
    for (PointId p : t) space.check(p);
    std::vector<PointId> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    bool repeats = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    if (repeats) rep.repeated_points.push_back(x);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (PointId p : sorted) ++load[p];
    bool long_step = false;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
      Rational step = space.dist(t[j], t[j + 1]);
      rep.measured_r = std::max(rep.measured_r, step);
      if (step > cover.r) long_step = true;
    }
    if (long_step) rep.long_steps.push_back(x);
    if (need_frontier && !space.on_frontier(t.back())) rep.unterminated.push_back(x);
  }
  for (PointId z = 0; z < space.size(); ++z) {
    if (load[z] > rep.measured_K) {
      rep.measured_K = load[z];
      rep.busiest_point = z;
    }
    if (load[z] > cover.K) rep.overloaded_points.push_back(z);
  }
  rep.pass = rep.bad_start.empty() && rep.repeated_points.empty() && rep.long_steps.empty() &&
             rep.overloaded_points.empty() && rep.unterminated.empty();
  return rep;
}

/// Greedy outward routing on a rooted tree (the BFS tree of the r-Rips graph
/// from `root`). Tails only move away from the root; the tails arriving at a
/// vertex, followed by the vertex's own tail, are dealt round-robin to its
/// children in id order. With >= 2 children everywhere at most one foreign
/// tail enters each vertex, so every point lies on at most 2 tails.
inline TailCover build_tree_tails(const WindowSpace& space, PointId root = 0, const Rational& r = Rational(1)) {
  space.check(root);
  const RipsGraph rips = build_rips(space, r);
  const std::size_t n = space.size();
  if (rips.components.size() != 1) throw InvalidInput("tail builder needs a connected Rips graph");

  std::vector<std::vector<PointId>> children(n);
  std::vector<PointId> order;
  order.reserve(n);
  {
    std::vector<char> seen(n, 0);
    std::queue<PointId> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
      PointId u = q.front();
      q.pop();
      order.push_back(u);
      for (PointId v : rips.adjacency[u])
        if (!seen[v]) {
          seen[v] = 1;
          children[u].push_back(v);
          q.push(v);
        }
    }
  }
  for (PointId v : order) {
    if (space.on_frontier(v)) continue;
    if (children[v].size() < 2) throw BranchingTooLow(v, children[v].size());
  }

  TailCover cover;
  cover.r = r;
  cover.K = 2;
  cover.tails.assign(n, {});
  std::vector<std::vector<PointId>> arriving(n);
  for (PointId v : order) {
    cover.tails[v].push_back(v);
    auto& queue = arriving[v];
    queue.push_back(v);
    if (space.on_frontier(v)) continue;
    std::size_t turn = 0;
    for (PointId owner : queue) {
      PointId child = children[v][turn++ % children[v].size()];
      cover.tails[owner].push_back(child);
      arriving[child].push_back(owner);
    }
    queue.clear();
    queue.shrink_to_fit();
  }
  return cover;
}

/// T(y, n) = t^y_{M-n}.
inline PointId transport_cell(const TailCover& cover, const Cell& cell, std::uint64_t M) {
  if (cell.level > M) throw InvalidInput("level " + std::to_string(cell.level) + " exceeds M = " + std::to_string(M));
  if (cell.point >= cover.tails.size()) throw UnknownPoint(cell.point);
  const auto& tail = cover.tails[cell.point];
  const std::uint64_t j = M - cell.level;
  if (j >= tail.size()) throw TailTooShort(cell.point, static_cast<std::size_t>(j), tail.size());
  return tail[static_cast<std::size_t>(j)];
}

/// T(Z) as a sorted set of points.
inline std::vector<PointId> transport_set(const TailCover& cover, const std::vector<Cell>& cells, std::uint64_t M) {
  std::vector<PointId> img;
  img.reserve(cells.size());
  for (const auto& c : cells) img.push_back(transport_cell(cover, c, M));
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

/// ~A_x = T(A_x); the output is 0,1-valued with S' = M r + S. Ratios grow
/// by at most a factor K, so epsilon is scaled by K.
inline IndexedFamily tail_transport(const MultisetFamily& fam, const TailCover& cover) {
  IndexedFamily out;
  out.params = fam.params;
  out.params.epsilon = fam.params.epsilon * Rational(static_cast<std::int64_t>(cover.K));
  out.params.S = fam.params.S + cover.r * Rational(static_cast<std::int64_t>(fam.params.M));
  out.params.M = 0;
  out.space_ref = fam.space_ref;
  for (const auto& [x, cells] : fam.sets) {
    if (cells.empty()) throw InvalidInput("empty set at index " + std::to_string(x));
    out.chains.emplace(x, Chain::indicator(transport_set(cover, cells, fam.params.M)));
  }
  return out;
}

}  // namespace coarse
