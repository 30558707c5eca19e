#pragma once

// Brute-force reference implementations for the tests. Everything here works
// on dense vectors or std::set and shares no code with the library beyond the
// basic types.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/space.hpp"

namespace oracle {

using Dense = std::vector<std::uint64_t>;

inline Dense dense(const coarse::Chain& c, std::size_t n) {
  Dense d(n, 0);
  for (const auto& [p, w] : c) d.at(p) = w;
  return d;
}

inline std::uint64_t norm(const Dense& a) {
  std::uint64_t s = 0;
  for (auto w : a) s += w;
  return s;
}

/// s1(a)(x) = [a(x) > 0] + sum over sigma(y) = x of (a(y) - 1)^+, evaluated literally
/// by scattering each tower to its image. `sigma[y] == none` marks sinks;
/// returns false if a sink carries tower mass.
inline bool s1(const Dense& a, const std::vector<std::uint32_t>& sigma, std::uint32_t none, Dense& out) {
  const std::size_t n = a.size();
  out.assign(n, 0);
  for (std::size_t y = 0; y < n; ++y) {
    if (a[y] > 0) out[y] += 1;
    if (a[y] > 1) {
      if (sigma[y] == none) return false;
      out[sigma[y]] += a[y] - 1;
    }
  }
  return true;
}

inline bool flat(const Dense& a) {
  return std::all_of(a.begin(), a.end(), [](auto w) { return w <= 1; });
}

inline bool leq(const Dense& a, const Dense& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Dense meet(const Dense& a, const Dense& b) {
  Dense m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::min(a[i], b[i]);
  return m;
}

inline std::uint64_t setminus_norm(const Dense& a, const Dense& b) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] > b[i] ? a[i] - b[i] : 0;
  return s;
}

/// (|a - b|_1, |a ^ b|_1).
inline std::pair<std::uint64_t, std::uint64_t> counts(const Dense& a, const Dense& b) {
  std::uint64_t num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    den += std::min(a[i], b[i]);
  }
  return {num, den};
}

/// (|A (+) B|, |A n B|) for plain sets.
template <typename T>
std::pair<std::size_t, std::size_t> set_counts(const std::set<T>& A, const std::set<T>& B) {
  std::size_t inter = 0;
  for (const auto& a : A) inter += B.count(a);
  return {A.size() + B.size() - 2 * inter, inter};
}

/// num/den < p/q with den = 0 meaning infinity.
inline bool ratio_below(std::uint64_t num, std::uint64_t den, std::int64_t p, std::int64_t q) {
  if (den == 0) return false;
  return static_cast<__int128>(num) * q < static_cast<__int128>(p) * static_cast<__int128>(den);
}

/// a/b <= c/d for nonnegative counts, infinity when the denominator is 0.
inline bool ratio_leq(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  if (d == 0) return true;
  if (b == 0) return false;
  return static_cast<unsigned __int128>(a) * d <= static_cast<unsigned __int128>(c) * b;
}

/// All-pairs shortest paths by Floyd-Warshall on an edge list.
inline std::vector<std::vector<std::int64_t>> floyd(std::size_t n, const std::vector<coarse::Edge>& edges) {
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.w);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace oracle
