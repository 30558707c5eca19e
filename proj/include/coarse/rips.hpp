#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// 1-skeleton of the r-Rips complex: {x,y} is an edge iff 0 < d(x,y) <= r.
struct RipsGraph {
  Rational r;
  std::vector<std::vector<PointId>> adjacency;  // sorted neighbour lists
  std::vector<std::uint32_t> component;         // component index per point
  std::vector<std::vector<PointId>> components; // ordered by smallest member
  std::vector<PointId> frontier;                // copied from the space

  std::size_t size() const { return adjacency.size(); }
  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adjacency) twice += a.size();
    return twice / 2;
  }
  std::size_t max_degree() const {
    std::size_t m = 0;
    for (const auto& a : adjacency) m = std::max(m, a.size());
    return m;
  }
};

namespace detail {

inline void label_components(RipsGraph& g) {
  const std::size_t n = g.adjacency.size();
  constexpr auto kNone = static_cast<std::uint32_t>(-1);
  g.component.assign(n, kNone);
  g.components.clear();
  for (PointId s = 0; s < n; ++s) {
    if (g.component[s] != kNone) continue;
    auto c = static_cast<std::uint32_t>(g.components.size());
    g.components.emplace_back();
    std::queue<PointId> q;
    q.push(s);
    g.component[s] = c;
    while (!q.empty()) {
      PointId u = q.front();
      q.pop();
      g.components.back().push_back(u);
      for (PointId v : g.adjacency[u])
        if (g.component[v] == kNone) {
          g.component[v] = c;
          q.push(v);
        }
    }
    std::sort(g.components.back().begin(), g.components.back().end());
  }
}

}  // namespace detail

inline RipsGraph build_rips(const WindowSpace& space, const Rational& r) {
  if (r <= 0) throw InvalidInput("Rips scale must be positive, got " + to_string(r));
  RipsGraph g;
  g.r = r;
  g.adjacency.resize(space.size());
  for (PointId x = 0; x < space.size(); ++x)
    for (PointId y : space.ball(x, r))
      if (y != x) g.adjacency[x].push_back(y);
  g.frontier = space.frontier();
  detail::label_components(g);
  return g;
}

/// Rebuilds a graph from stored parts (edges as unordered pairs).
inline RipsGraph make_rips(std::size_t n, const Rational& r, const std::vector<std::pair<PointId, PointId>>& edges,
                           std::vector<PointId> frontier) {
  RipsGraph g;
  g.r = r;
  g.adjacency.resize(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw UnknownPoint(std::max(u, v));
    if (u == v) throw InvalidInput("Rips self-loop at " + std::to_string(u));
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& a : g.adjacency) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  for (PointId f : frontier)
    if (f >= n) throw UnknownPoint(f);
  std::sort(frontier.begin(), frontier.end());
  g.frontier = std::move(frontier);
  detail::label_components(g);
  return g;
}

struct UnboundednessReport {
  bool pass = true;
  std::size_t component_count = 0;
  /// Components without a frontier point, each sorted.
  std::vector<std::vector<PointId>> bounded_components;
};

/// Every component must reach the frontier, the finite stand-in for being
/// unbounded.
inline UnboundednessReport check_coarsely_unbounded(const RipsGraph& rips) {
  UnboundednessReport rep;
  rep.component_count = rips.components.size();
  std::vector<char> touches(rips.components.size(), 0);
  for (PointId f : rips.frontier) touches[rips.component[f]] = 1;
  for (std::size_t c = 0; c < rips.components.size(); ++c)
    if (!touches[c]) rep.bounded_components.push_back(rips.components[c]);
  rep.pass = rep.bounded_components.empty();
  return rep;
}

/// sigma: each non-sink point's unique outgoing tree edge, oriented toward
/// the sink of its component.
struct FlowField {
  static constexpr PointId kNoImage = static_cast<PointId>(-1);

  std::vector<PointId> sigma;  // kNoImage exactly at sinks
  std::vector<PointId> sinks;  // one per component, sorted
  Rational r;

  std::size_t size() const { return sigma.size(); }
  bool is_sink(PointId x) const { return sigma.at(x) == kNoImage; }
  std::optional<PointId> image(PointId x) const {
    if (x >= sigma.size()) throw UnknownPoint(x);
    if (sigma[x] == kNoImage) return std::nullopt;
    return sigma[x];
  }
};

/// Per component: sink = smallest frontier point; BFS tree from the sink
/// with neighbours visited in id order; sigma(x) = BFS parent.
inline FlowField build_flow(const RipsGraph& rips) {
  auto rep = check_coarsely_unbounded(rips);
  if (!rep.pass) throw NotCoarselyUnbounded(std::move(rep.bounded_components));
  const std::size_t n = rips.size();
  FlowField flow;
  flow.r = rips.r;
  flow.sigma.assign(n, FlowField::kNoImage);
  std::vector<char> seen(n, 0);
  // frontier is sorted, so the first frontier point met in each component is its smallest
  for (PointId f : rips.frontier) {
    if (seen[f]) continue;
    flow.sinks.push_back(f);
    std::queue<PointId> q;
    q.push(f);
    seen[f] = 1;
    while (!q.empty()) {
      PointId u = q.front();
      q.pop();
      for (PointId v : rips.adjacency[u])
        if (!seen[v]) {
          seen[v] = 1;
          flow.sigma[v] = u;
          q.push(v);
        }
    }
  }
  std::sort(flow.sinks.begin(), flow.sinks.end());
  return flow;
}

inline FlowField build_flow(const WindowSpace& space, const RipsGraph& rips) {
  if (rips.size() != space.size()) throw InvalidInput("Rips graph was not built from this space");
  return build_flow(rips);
}

/// Number of sigma steps from x to its sink.
inline std::uint64_t sigma_depth(const FlowField& flow, PointId x) {
  if (x >= flow.size()) throw UnknownPoint(x);
  std::uint64_t steps = 0;
  while (flow.sigma[x] != FlowField::kNoImage) {
    x = flow.sigma[x];
    if (++steps > flow.size()) throw InvalidInput("flow contains a cycle");
  }
  return steps;
}

/// Checks the structural invariants of a flow against its space: sigma edges
/// are within r, orbits are injective and end at a sink, exactly one sink per
/// orbit basin. Returns an empty string when valid, else a description.
inline std::string validate_flow(const FlowField& flow, const WindowSpace& space) {
  if (flow.size() != space.size()) return "flow size does not match space";
  std::vector<char> is_sink(flow.size(), 0);
  for (PointId s : flow.sinks) {
    if (s >= flow.size()) return "sink out of range";
    if (flow.sigma[s] != FlowField::kNoImage) return "sink " + std::to_string(s) + " has an image";
    is_sink[s] = 1;
  }
  for (PointId x = 0; x < flow.size(); ++x) {
    if (flow.sigma[x] == FlowField::kNoImage) {
      if (!is_sink[x]) return "point " + std::to_string(x) + " has no image but is not a sink";
      continue;
    }
    if (flow.sigma[x] >= flow.size()) return "image of " + std::to_string(x) + " out of range";
    if (space.dist(x, flow.sigma[x]) > flow.r) return "flow edge at " + std::to_string(x) + " longer than r";
    PointId y = x;
    std::size_t steps = 0;
    while (flow.sigma[y] != FlowField::kNoImage) {
      y = flow.sigma[y];
      if (++steps >= flow.size()) return "sigma orbit of " + std::to_string(x) + " does not terminate";
    }
  }
  return {};
}

}  // namespace coarse
