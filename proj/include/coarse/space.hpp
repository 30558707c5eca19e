#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/rational.hpp"

namespace coarse {

/// Undirected edge of an integer-weighted graph metric.
struct Edge {
  PointId u = 0;
  PointId v = 0;
  std::int64_t w = 1;
};

namespace detail {

inline constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

// Graphs up to this size get a dense all-pairs table at construction.
inline constexpr std::size_t kDenseLimit = 2048;

struct SpaceData {
  std::size_t n = 0;
  bool is_graph = false;
  std::string label;
  std::vector<PointId> frontier;     // sorted
  std::vector<char> frontier_mask;   // size n
  std::vector<std::vector<std::int64_t>> coords;

  // matrix metric
  std::vector<Rational> matrix;  // row-major n*n

  // graph metric
  std::vector<Edge> edges;  // u < v, deduplicated
  std::vector<std::size_t> adj_offset;
  std::vector<std::pair<PointId, std::int64_t>> adj;
  std::vector<std::int64_t> dense;  // n*n when n <= kDenseLimit
  // tree fast path (connected graph with n-1 edges), rooted at 0
  std::vector<PointId> parent;
  std::vector<std::uint32_t> hops;
  std::vector<std::int64_t> depth;
};

}  // namespace detail

/// A finite window of a discrete metric space. Distances are exact: either a
/// rational matrix or the shortest-path metric of a connected graph with
/// positive integer weights. `frontier` marks points whose neighbourhoods are
/// cut off by the window, i.e. the directions toward infinity.
///
/// Values are immutable and cheap to copy (shared, read-only state).
class WindowSpace {
 public:
  WindowSpace() : data_(std::make_shared<detail::SpaceData>()) {}

  /// Validates symmetry, zero diagonal and positivity always; the triangle
  /// inequality only when n <= 300 (cubic).
  static WindowSpace from_matrix(std::size_t n, std::vector<Rational> entries, std::vector<PointId> frontier,
                                 std::string label) {
    if (entries.size() != n * n) throw InvalidInput("distance matrix must have n*n entries");
    auto d = std::make_shared<detail::SpaceData>();
    d->n = n;
    d->is_graph = false;
    d->label = std::move(label);
    d->matrix = std::move(entries);
    for (std::size_t i = 0; i < n; ++i) {
      if (d->matrix[i * n + i] != 0) throw InvalidInput("nonzero diagonal entry at " + std::to_string(i));
      for (std::size_t j = i + 1; j < n; ++j) {
        if (d->matrix[i * n + j] != d->matrix[j * n + i])
          throw InvalidInput("asymmetric distance between " + std::to_string(i) + " and " + std::to_string(j));
        if (d->matrix[i * n + j] <= 0)
          throw InvalidInput("nonpositive distance between distinct points " + std::to_string(i) + " and " +
                             std::to_string(j));
      }
    }
    if (n <= 300) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            if (d->matrix[i * n + k] > d->matrix[i * n + j] + d->matrix[j * n + k])
              throw InvalidInput("triangle inequality fails for (" + std::to_string(i) + "," + std::to_string(j) +
                                 "," + std::to_string(k) + ")");
    }
    set_frontier(*d, std::move(frontier));
    return WindowSpace(std::move(d));
  }

  /// Shortest-path metric. The graph must be connected with positive weights.
  static WindowSpace from_graph(std::size_t n, std::vector<Edge> edges, std::vector<PointId> frontier,
                                std::string label) {
    auto d = std::make_shared<detail::SpaceData>();
    d->n = n;
    d->is_graph = true;
    d->label = std::move(label);
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n) throw UnknownPoint(std::max(e.u, e.v));
      if (e.u == e.v) throw InvalidInput("self-loop at " + std::to_string(e.u));
      if (e.w <= 0) throw InvalidInput("edge weights must be positive");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
    });
    // parallel edges: keep the lightest
    std::vector<Edge> unique;
    for (const auto& e : edges)
      if (unique.empty() || unique.back().u != e.u || unique.back().v != e.v) unique.push_back(e);
    d->edges = std::move(unique);

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : d->edges) {
      ++degree[e.u];
      ++degree[e.v];
    }
    d->adj_offset.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) d->adj_offset[i + 1] = d->adj_offset[i] + degree[i];
    d->adj.resize(d->adj_offset[n]);
    std::vector<std::size_t> fill(d->adj_offset.begin(), d->adj_offset.end() - 1);
    for (const auto& e : d->edges) {
      d->adj[fill[e.u]++] = {e.v, e.w};
      d->adj[fill[e.v]++] = {e.u, e.w};
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(d->adj.begin() + static_cast<std::ptrdiff_t>(d->adj_offset[i]),
                d->adj.begin() + static_cast<std::ptrdiff_t>(d->adj_offset[i + 1]));

    if (n > 0) {
      auto from0 = dijkstra(*d, 0, detail::kUnreached);
      for (std::size_t i = 0; i < n; ++i)
        if (from0[i] == detail::kUnreached)
          throw InvalidInput("graph metric is disconnected (point " + std::to_string(i) + " unreachable from 0)");
    }
    if (n > 0 && d->edges.size() == n - 1) build_tree_index(*d);
    if (n <= detail::kDenseLimit && d->parent.empty()) {
      d->dense.resize(n * n);
      for (PointId s = 0; s < n; ++s) {
        auto row = dijkstra(*d, s, detail::kUnreached);
        std::copy(row.begin(), row.end(), d->dense.begin() + static_cast<std::ptrdiff_t>(s * n));
      }
    }
    set_frontier(*d, std::move(frontier));
    return WindowSpace(std::move(d));
  }

  std::size_t size() const { return data_->n; }
  bool is_graph_metric() const { return data_->is_graph; }
  const std::string& label() const { return data_->label; }
  const std::vector<PointId>& frontier() const { return data_->frontier; }
  bool on_frontier(PointId x) const {
    check(x);
    return data_->frontier_mask[x] != 0;
  }
  const std::vector<Edge>& edges() const { return data_->edges; }
  const std::vector<Rational>& matrix() const { return data_->matrix; }

  /// Integer grid coordinates when the space came from the grid generator.
  const std::vector<std::vector<std::int64_t>>& coords() const { return data_->coords; }
  bool has_coords() const { return !data_->coords.empty(); }
  std::optional<PointId> point_at(const std::vector<std::int64_t>& c) const {
    auto it = std::lower_bound(data_->coords.begin(), data_->coords.end(), c);
    if (it == data_->coords.end() || *it != c) return std::nullopt;
    return static_cast<PointId>(it - data_->coords.begin());
  }

  /// Graph neighbours with weights; empty for matrix metrics.
  std::vector<std::pair<PointId, std::int64_t>> neighbors(PointId x) const {
    check(x);
    if (!data_->is_graph) return {};
    return {data_->adj.begin() + static_cast<std::ptrdiff_t>(data_->adj_offset[x]),
            data_->adj.begin() + static_cast<std::ptrdiff_t>(data_->adj_offset[x + 1])};
  }

  Rational dist(PointId x, PointId y) const {
    check(x);
    check(y);
    const auto& d = *data_;
    if (!d.is_graph) return d.matrix[std::size_t{x} * d.n + y];
    return Rational(graph_dist(x, y));
  }

  /// Closed ball B(x, R), sorted by id.
  std::vector<PointId> ball(PointId x, const Rational& radius) const {
    std::vector<PointId> out;
    for (const auto& [p, dist] : ball_with_distances(x, radius)) out.push_back(p);
    return out;
  }

  /// Closed ball with exact distances, sorted by id.
  std::vector<std::pair<PointId, Rational>> ball_with_distances(PointId x, const Rational& radius) const {
    check(x);
    std::vector<std::pair<PointId, Rational>> out;
    if (radius < 0) return out;
    const auto& d = *data_;
    if (!d.is_graph) {
      for (PointId y = 0; y < d.n; ++y)
        if (d.matrix[std::size_t{x} * d.n + y] <= radius) out.emplace_back(y, d.matrix[std::size_t{x} * d.n + y]);
      return out;
    }
    // integer distances: d <= R iff d <= floor(R)
    std::int64_t limit = radius.numerator() / radius.denominator();
    if (!d.dense.empty()) {
      for (PointId y = 0; y < d.n; ++y)
        if (d.dense[std::size_t{x} * d.n + y] <= limit) out.emplace_back(y, Rational(d.dense[std::size_t{x} * d.n + y]));
      return out;
    }
    for (const auto& [p, dist] : bounded_search(d, x, limit)) out.emplace_back(p, Rational(dist));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  /// min over frontier points; nullopt when the frontier is empty.
  std::optional<Rational> distance_to_frontier(PointId x) const {
    check(x);
    std::optional<Rational> best;
    for (PointId f : data_->frontier) {
      Rational v = dist(x, f);
      if (!best || v < *best) best = v;
    }
    return best;
  }

  void check(PointId x) const {
    if (x >= data_->n) throw UnknownPoint(x);
  }

 private:
  explicit WindowSpace(std::shared_ptr<const detail::SpaceData> d) : data_(std::move(d)) {}

  static void set_frontier(detail::SpaceData& d, std::vector<PointId> frontier) {
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    d.frontier_mask.assign(d.n, 0);
    for (PointId f : frontier) {
      if (f >= d.n) throw UnknownPoint(f);
      d.frontier_mask[f] = 1;
    }
    d.frontier = std::move(frontier);
  }

  static std::vector<std::int64_t> dijkstra(const detail::SpaceData& d, PointId s, std::int64_t limit) {
    std::vector<std::int64_t> dist(d.n, detail::kUnreached);
    using Item = std::pair<std::int64_t, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      for (std::size_t k = d.adj_offset[u]; k < d.adj_offset[u + 1]; ++k) {
        auto [v, w] = d.adj[k];
        std::int64_t dv = du + w;
        if (dv <= limit && dv < dist[v]) {
          dist[v] = dv;
          pq.emplace(dv, v);
        }
      }
    }
    return dist;
  }

  // Dijkstra touching only the explored region; returns (point, dist) pairs.
  static std::vector<std::pair<PointId, std::int64_t>> bounded_search(const detail::SpaceData& d, PointId s,
                                                                      std::int64_t limit) {
    std::map<PointId, std::int64_t> dist;
    using Item = std::pair<std::int64_t, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.emplace(0, s);
    std::vector<std::pair<PointId, std::int64_t>> settled;
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      settled.emplace_back(u, du);
      for (std::size_t k = d.adj_offset[u]; k < d.adj_offset[u + 1]; ++k) {
        auto [v, w] = d.adj[k];
        std::int64_t dv = du + w;
        if (dv > limit) continue;
        auto it = dist.find(v);
        if (it == dist.end() || dv < it->second) {
          dist[v] = dv;
          pq.emplace(dv, v);
        }
      }
    }
    return settled;
  }

  static void build_tree_index(detail::SpaceData& d) {
    d.parent.assign(d.n, 0);
    d.hops.assign(d.n, 0);
    d.depth.assign(d.n, 0);
    std::vector<char> seen(d.n, 0);
    std::queue<PointId> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      PointId u = q.front();
      q.pop();
      for (std::size_t k = d.adj_offset[u]; k < d.adj_offset[u + 1]; ++k) {
        auto [v, w] = d.adj[k];
        if (seen[v]) continue;
        seen[v] = 1;
        d.parent[v] = u;
        d.hops[v] = d.hops[u] + 1;
        d.depth[v] = d.depth[u] + w;
        q.push(v);
      }
    }
  }

  std::int64_t graph_dist(PointId x, PointId y) const {
    const auto& d = *data_;
    if (!d.dense.empty()) return d.dense[std::size_t{x} * d.n + y];
    if (!d.parent.empty()) {
      PointId a = x, b = y;
      while (d.hops[a] > d.hops[b]) a = d.parent[a];
      while (d.hops[b] > d.hops[a]) b = d.parent[b];
      while (a != b) {
        a = d.parent[a];
        b = d.parent[b];
      }
      return d.depth[x] + d.depth[y] - 2 * d.depth[a];
    }
    // plain Dijkstra with early exit at y
    std::map<PointId, std::int64_t> dist;
    using Item = std::pair<std::int64_t, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[x] = 0;
    pq.emplace(0, x);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      if (u == y) return du;
      for (std::size_t k = d.adj_offset[u]; k < d.adj_offset[u + 1]; ++k) {
        auto [v, w] = d.adj[k];
        auto it = dist.find(v);
        if (it == dist.end() || du + w < it->second) {
          dist[v] = du + w;
          pq.emplace(du + w, v);
        }
      }
    }
    return detail::kUnreached;
  }

  friend WindowSpace with_coords(WindowSpace s, std::vector<std::vector<std::int64_t>> coords);

  std::shared_ptr<const detail::SpaceData> data_;
};

/// Attaches grid coordinates (must be sorted lexicographically, one per point).
inline WindowSpace with_coords(WindowSpace s, std::vector<std::vector<std::int64_t>> coords) {
  if (coords.size() != s.size()) throw InvalidInput("coordinate count does not match point count");
  if (!std::is_sorted(coords.begin(), coords.end())) throw InvalidInput("coordinates must be sorted");
  auto d = std::make_shared<detail::SpaceData>(*s.data_);
  d->coords = std::move(coords);
  return WindowSpace(std::move(d));
}

// ---------------------------------------------------------------------------
// Generators

/// Integer grid [lo, hi]^dim with the L1 word metric. Ids follow
/// lexicographic coordinate order; the frontier is the boundary layer.
inline WindowSpace make_grid(int dim, std::int64_t lo, std::int64_t hi) {
  if (dim < 1) throw InvalidInput("grid dimension must be positive");
  if (hi < lo) throw InvalidInput("grid range is empty");
  const std::int64_t side = hi - lo + 1;
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) {
    n *= static_cast<std::size_t>(side);
    if (n > 50'000'000) throw InvalidInput("grid window too large");
  }
  std::vector<std::vector<std::int64_t>> coords(n, std::vector<std::int64_t>(static_cast<std::size_t>(dim)));
  std::vector<Edge> edges;
  std::vector<PointId> frontier;
  for (std::size_t id = 0; id < n; ++id) {
    std::size_t rest = id;
    for (int k = dim - 1; k >= 0; --k) {
      coords[id][static_cast<std::size_t>(k)] = lo + static_cast<std::int64_t>(rest % static_cast<std::size_t>(side));
      rest /= static_cast<std::size_t>(side);
    }
    bool boundary = false;
    std::size_t stride = 1;
    for (int k = dim - 1; k >= 0; --k) {
      auto c = coords[id][static_cast<std::size_t>(k)];
      if (c == lo || c == hi) boundary = true;
      if (c < hi) edges.push_back({static_cast<PointId>(id), static_cast<PointId>(id + stride), 1});
      stride *= static_cast<std::size_t>(side);
    }
    if (boundary) frontier.push_back(static_cast<PointId>(id));
  }
  std::string label = "grid(dim=" + std::to_string(dim) + ", [" + std::to_string(lo) + "," + std::to_string(hi) + "])";
  return with_coords(WindowSpace::from_graph(n, std::move(edges), std::move(frontier), std::move(label)),
                     std::move(coords));
}

namespace detail {

// Breadth-first tree: root 0, children of each vertex numbered consecutively.
inline WindowSpace make_tree(std::size_t root_children, std::size_t children, int depth, bool frontier_leaves,
                             std::string label) {
  std::vector<Edge> edges;
  std::vector<PointId> frontier;
  std::vector<int> level{0};
  std::size_t n = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (level[i] == depth) {
      if (frontier_leaves) frontier.push_back(static_cast<PointId>(i));
      continue;
    }
    std::size_t k = i == 0 ? root_children : children;
    for (std::size_t c = 0; c < k; ++c) {
      edges.push_back({static_cast<PointId>(i), static_cast<PointId>(n), 1});
      level.push_back(level[i] + 1);
      ++n;
      if (n > 20'000'000) throw InvalidInput("tree window too large");
    }
  }
  return WindowSpace::from_graph(n, std::move(edges), std::move(frontier), std::move(label));
}

}  // namespace detail

/// Ball of radius `depth` around a vertex of the infinite `degree`-regular tree.
inline WindowSpace make_regular_tree(int degree, int depth) {
  if (degree < 1 || depth < 0) throw InvalidInput("regular tree needs degree >= 1 and depth >= 0");
  bool truncated = degree >= 2 || depth == 0;
  return detail::make_tree(static_cast<std::size_t>(degree), static_cast<std::size_t>(degree - 1), depth, truncated,
                           "regular_tree(degree=" + std::to_string(degree) + ", depth=" + std::to_string(depth) + ")");
}

/// Rooted tree where every vertex has `branching` children, cut at `depth`.
inline WindowSpace make_rooted_tree(int branching, int depth) {
  if (branching < 1 || depth < 0) throw InvalidInput("rooted tree needs branching >= 1 and depth >= 0");
  return detail::make_tree(static_cast<std::size_t>(branching), static_cast<std::size_t>(branching), depth, true,
                           "rooted_tree(branching=" + std::to_string(branching) + ", depth=" + std::to_string(depth) +
                               ")");
}

inline WindowSpace make_cycle(std::size_t length) {
  if (length < 1) throw InvalidInput("cycle length must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < length; ++i) edges.push_back({static_cast<PointId>(i), static_cast<PointId>(i + 1), 1});
  if (length > 2) edges.push_back({static_cast<PointId>(length - 1), 0, 1});
  return WindowSpace::from_graph(length, std::move(edges), {}, "cycle(" + std::to_string(length) + ")");
}

/// Points on the rational line with d(x, y) = |x - y|.
inline WindowSpace make_line_points(std::vector<Rational> positions, std::vector<PointId> frontier = {}) {
  const std::size_t n = positions.size();
  std::vector<Rational> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = boost::abs(positions[i] - positions[j]);
  return WindowSpace::from_matrix(n, std::move(m), std::move(frontier), "line_points(" + std::to_string(n) + ")");
}

/// Disjoint union with d((i,x),(j,y)) = spacing[max(i,j)] + d_i(x, 0) + d_j(y, 0),
/// the basepoint of each part being its point 0. `spacing[i]` is read for
/// i >= 1; the schedule must be positive and nondecreasing. Ids are assigned
/// part by part; `offsets` receives the first id of each part.
inline WindowSpace make_disjoint_union(const std::vector<WindowSpace>& parts, const std::vector<std::int64_t>& spacing,
                                       std::vector<PointId>* offsets = nullptr) {
  if (parts.empty()) throw InvalidInput("disjoint union of zero spaces");
  if (spacing.size() < parts.size()) throw InvalidInput("spacing schedule shorter than the number of parts");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (spacing[i] <= 0) throw InvalidInput("spacing must be positive");
    if (i >= 2 && spacing[i] < spacing[i - 1]) throw InvalidInput("spacing schedule must be nondecreasing");
  }
  std::vector<PointId> off(parts.size() + 1, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() == 0) throw InvalidInput("empty part in disjoint union");
    off[i + 1] = off[i] + static_cast<PointId>(parts[i].size());
  }
  const std::size_t n = off.back();
  std::vector<PointId> frontier;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (PointId f : parts[i].frontier()) frontier.push_back(off[i] + f);
  std::string label = "union(";
  for (std::size_t i = 0; i < parts.size(); ++i) label += (i ? "," : "") + parts[i].label();
  label += ")";
  if (offsets) offsets->assign(off.begin(), off.end() - 1);

  bool all_graph = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.is_graph_metric(); });
  if (all_graph) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (const auto& e : parts[i].edges()) edges.push_back({off[i] + e.u, off[i] + e.v, e.w});
    // Basepoint edges realise the convention exactly: with a nondecreasing
    // schedule no detour through a third part is shorter.
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < parts.size(); ++j) edges.push_back({off[i], off[j], spacing[j]});
    return WindowSpace::from_graph(n, std::move(edges), std::move(frontier), std::move(label));
  }
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (PointId p = off[i]; p < off[i + 1]; ++p) owner[p] = i;
  std::vector<Rational> m(n * n);
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b) {
      std::size_t i = owner[a], j = owner[b];
      if (i == j)
        m[std::size_t{a} * n + b] = parts[i].dist(a - off[i], b - off[i]);
      else
        m[std::size_t{a} * n + b] =
            Rational(spacing[std::max(i, j)]) + parts[i].dist(a - off[i], 0) + parts[j].dist(b - off[j], 0);
    }
  return WindowSpace::from_matrix(n, std::move(m), std::move(frontier), std::move(label));
}

/// X x {0..levels-1} with d((x,i),(y,j)) = d(x,y) + |i-j|. Point (x,i) gets
/// id x*levels + i; the frontier is frontier(X) on every level.
inline WindowSpace make_product_interval(const WindowSpace& base, std::size_t levels) {
  if (levels < 1) throw InvalidInput("interval length must be positive");
  const std::size_t n = base.size() * levels;
  auto id = [&](PointId x, std::size_t i) { return static_cast<PointId>(x * levels + i); };
  std::vector<PointId> frontier;
  for (PointId f : base.frontier())
    for (std::size_t i = 0; i < levels; ++i) frontier.push_back(id(f, i));
  std::string label = base.label() + "x[0," + std::to_string(levels - 1) + "]";
  if (base.is_graph_metric()) {
    std::vector<Edge> edges;
    for (const auto& e : base.edges())
      for (std::size_t i = 0; i < levels; ++i) edges.push_back({id(e.u, i), id(e.v, i), e.w});
    for (PointId x = 0; x < base.size(); ++x)
      for (std::size_t i = 0; i + 1 < levels; ++i) edges.push_back({id(x, i), id(x, i + 1), 1});
    return WindowSpace::from_graph(n, std::move(edges), std::move(frontier), std::move(label));
  }
  std::vector<Rational> m(n * n);
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b) {
      auto ia = static_cast<std::int64_t>(a % levels), ib = static_cast<std::int64_t>(b % levels);
      m[std::size_t{a} * n + b] =
          base.dist(static_cast<PointId>(a / levels), static_cast<PointId>(b / levels)) + Rational(std::abs(ia - ib));
    }
  return WindowSpace::from_matrix(n, std::move(m), std::move(frontier), std::move(label));
}

/// Metric subspace on `points` (renumbered 0.. in the given order), as a
/// matrix metric. The frontier is inherited.
inline WindowSpace make_subspace(const WindowSpace& space, const std::vector<PointId>& points) {
  const std::size_t n = points.size();
  std::vector<Rational> m(n * n);
  std::vector<PointId> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (space.on_frontier(points[i])) frontier.push_back(static_cast<PointId>(i));
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = space.dist(points[i], points[j]);
  }
  return WindowSpace::from_matrix(n, std::move(m), std::move(frontier), "sub(" + space.label() + ")");
}

// ---------------------------------------------------------------------------

struct GrowthEntry {
  Rational radius;
  std::size_t max_ball = 0;
  /// Points at distance > R from the frontier. When zero, max_ball is taken
  /// over all points and no longer reflects the infinite model.
  std::size_t interior_points = 0;
};
using GrowthProfile = std::vector<GrowthEntry>;

/// Max |B(x,R)| over points whose R-ball does not meet the frontier.
inline GrowthProfile growth_profile(const WindowSpace& space, const std::vector<Rational>& radii) {
  GrowthProfile out;
  std::vector<std::optional<Rational>> to_frontier(space.size());
  for (PointId x = 0; x < space.size(); ++x) to_frontier[x] = space.distance_to_frontier(x);
  for (const auto& R : radii) {
    if (R < 0) throw InvalidInput("negative radius " + to_string(R));
    GrowthEntry e{R, 0, 0};
    std::size_t any = 0;
    for (PointId x = 0; x < space.size(); ++x) {
      std::size_t b = space.ball(x, R).size();
      any = std::max(any, b);
      if (!to_frontier[x] || *to_frontier[x] > R) {
        ++e.interior_points;
        e.max_ball = std::max(e.max_ball, b);
      }
    }
    if (e.interior_points == 0) e.max_ball = any;
    out.push_back(e);
  }
  return out;
}

}  // namespace coarse
