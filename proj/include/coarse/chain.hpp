#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/rational.hpp"

namespace coarse {

using Weight = std::uint64_t;

/// A positive integer 0-chain: finitely many points with weight >= 1.
/// Stored as a vector sorted by point id; absent points have weight 0.
class Chain {
 public:
  using Entry = std::pair<PointId, Weight>;

  Chain() = default;
  Chain(std::initializer_list<Entry> entries) : Chain(std::vector<Entry>(entries)) {}

  /// Duplicate ids are summed; zero weights dropped.
  explicit Chain(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const auto& [p, w] : entries_) {
      if (w == 0) continue;
      if (!merged.empty() && merged.back().first == p)
        merged.back().second += w;
      else
        merged.emplace_back(p, w);
    }
    entries_ = std::move(merged);
  }

  /// Characteristic function of a set of points.
  static Chain indicator(const std::vector<PointId>& points) {
    std::vector<Entry> e;
    e.reserve(points.size());
    for (PointId p : points) e.emplace_back(p, 1);
    Chain c(std::move(e));
    for (auto& [p, w] : c.entries_) w = 1;
    return c;
  }

  Weight operator[](PointId p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const Entry& e, PointId q) { return e.first < q; });
    return it != entries_.end() && it->first == p ? it->second : 0;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<PointId> support() const {
    std::vector<PointId> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  Weight norm() const {
    Weight s = 0;
    for (const auto& e : entries_) s += e.second;
    return s;
  }

  /// 0,1-valued.
  bool is_flat() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second == 1; });
  }

  Chain scaled(Weight k) const {
    if (k == 0) return {};
    Chain c = *this;
    for (auto& e : c.entries_) e.second *= k;
    return c;
  }

  /// Pointwise a <= b.
  bool leq(const Chain& other) const {
    return std::all_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.second <= other[e.first]; });
  }

  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  std::vector<Entry> entries_;
};

namespace detail {

// Walks the union of both supports in id order.
template <typename F>
void merge_walk(const Chain& a, const Chain& b, F&& f) {
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      f(i->first, i->second, Weight{0});
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      f(j->first, Weight{0}, j->second);
      ++j;
    } else {
      f(i->first, i->second, j->second);
      ++i;
      ++j;
    }
  }
}

template <typename Op>
Chain combine(const Chain& a, const Chain& b, Op op) {
  std::vector<Chain::Entry> out;
  merge_walk(a, b, [&](PointId p, Weight x, Weight y) {
    Weight w = op(x, y);
    if (w) out.emplace_back(p, w);
  });
  return Chain(std::move(out));
}

}  // namespace detail

/// Pointwise minimum.
inline Chain meet(const Chain& a, const Chain& b) {
  return detail::combine(a, b, [](Weight x, Weight y) { return std::min(x, y); });
}

/// Pointwise maximum.
inline Chain join(const Chain& a, const Chain& b) {
  return detail::combine(a, b, [](Weight x, Weight y) { return std::max(x, y); });
}

inline Chain sum(const Chain& a, const Chain& b) {
  return detail::combine(a, b, [](Weight x, Weight y) { return x + y; });
}

/// a \ b = a - (a ^ b) = (a - b) v 0.
inline Chain setminus(const Chain& a, const Chain& b) {
  return detail::combine(a, b, [](Weight x, Weight y) { return x > y ? x - y : Weight{0}; });
}

/// ||a - b||_1 without materialising the difference.
inline Weight l1_distance(const Chain& a, const Chain& b) {
  Weight s = 0;
  detail::merge_walk(a, b, [&](PointId, Weight x, Weight y) { s += x > y ? x - y : y - x; });
  return s;
}

inline Weight meet_norm(const Chain& a, const Chain& b) {
  Weight s = 0;
  detail::merge_walk(a, b, [&](PointId, Weight x, Weight y) { s += std::min(x, y); });
  return s;
}

/// Base b(a) (indicator of the support) and towers t(a) = a - b(a).
struct BaseTowers {
  Chain base;
  Chain towers;
};

inline BaseTowers base_and_towers(const Chain& a) {
  std::vector<Chain::Entry> base, towers;
  base.reserve(a.support_size());
  for (const auto& [p, w] : a) {
    base.emplace_back(p, 1);
    if (w > 1) towers.emplace_back(p, w - 1);
  }
  return {Chain(std::move(base)), Chain(std::move(towers))};
}

/// ||t(a)||_1 = ||a||_1 - |supp a|.
inline Weight tower_norm(const Chain& a) { return a.norm() - a.support_size(); }

/// ||a - b||_1 / ||a ^ b||_1; infinite when the meet vanishes. For indicator
/// chains this is |A (+) B| / |A n B|.
inline Ratio ratio(const Chain& a, const Chain& b) {
  Weight num = 0, den = 0;
  detail::merge_walk(a, b, [&](PointId, Weight x, Weight y) {
    num += x > y ? x - y : y - x;
    den += std::min(x, y);
  });
  return Ratio{num, den};
}

}  // namespace coarse
