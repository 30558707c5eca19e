#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/parallel.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"

namespace coarse {

struct FamilyParams {
  Rational R{1};        // range of the ratio condition
  Rational epsilon{1};  // strict bound on in-range ratios
  Rational S{0};        // support radius
  std::uint64_t M = 0;  // height bound of multiset families

  void validate() const {
    if (R < 0) throw InvalidInput("R must be nonnegative");
    if (epsilon <= 0) throw InvalidInput("epsilon must be positive");
    if (S < 0) throw InvalidInput("S must be nonnegative");
  }
};

/// {a_x}: one positive chain per index point. A family of sets is the case
/// where every chain is 0,1-valued.
struct IndexedFamily {
  FamilyParams params;
  std::map<PointId, Chain> chains;
  /// Path of the base space file when loaded from or written to disk.
  std::string space_ref;

  std::vector<PointId> indices() const {
    std::vector<PointId> v;
    v.reserve(chains.size());
    for (const auto& [x, c] : chains) v.push_back(x);
    return v;
  }
  bool is_flat() const {
    return std::all_of(chains.begin(), chains.end(), [](const auto& kv) { return kv.second.is_flat(); });
  }
};

/// An element (z, n) of X x {0..M}.
struct Cell {
  PointId point = 0;
  std::uint64_t level = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// {A_x} with A_x a finite subset of X x {0..M}; each set sorted, no repeats.
struct MultisetFamily {
  FamilyParams params;
  std::map<PointId, std::vector<Cell>> sets;
  std::string space_ref;

  std::vector<PointId> indices() const {
    std::vector<PointId> v;
    v.reserve(sets.size());
    for (const auto& [x, s] : sets) v.push_back(x);
    return v;
  }
  void normalize() {
    for (auto& [x, s] : sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
  }
};

/// Sorted pairs (x, y), x < y, of indices with d(x, y) <= R.
inline std::vector<std::pair<PointId, PointId>> in_range_pairs(const WindowSpace& space,
                                                               const std::vector<PointId>& indices, const Rational& R) {
  std::vector<char> member(space.size(), 0);
  for (PointId x : indices) member[x] = 1;
  std::vector<std::pair<PointId, PointId>> pairs;
  for (PointId x : indices)
    for (PointId y : space.ball(x, R))
      if (y > x && member[y]) pairs.emplace_back(x, y);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

/// a_x(z) = |A_x n ({z} x N)|.
inline IndexedFamily family_from_multisets(const MultisetFamily& fam) {
  IndexedFamily out;
  out.params = fam.params;
  out.space_ref = fam.space_ref;
  for (const auto& [x, cells] : fam.sets) {
    if (cells.empty()) throw InvalidInput("empty set at index " + std::to_string(x));
    std::vector<Chain::Entry> e;
    e.reserve(cells.size());
    std::set<Cell> distinct(cells.begin(), cells.end());
    for (const auto& c : distinct) {
      if (c.level > fam.params.M)
        throw InvalidInput("level " + std::to_string(c.level) + " exceeds M at index " + std::to_string(x));
      e.emplace_back(c.point, 1);
    }
    out.chains.emplace(x, Chain(std::move(e)));
  }
  return out;
}

inline std::size_t intersection_size(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  std::size_t i = 0, j = 0, k = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++k;
      ++i;
      ++j;
    }
  }
  return k;
}

struct MultisetInequalityReport {
  bool pass = true;
  std::size_t pairs_checked = 0;
  std::vector<std::pair<PointId, PointId>> violations;
};

/// ||a_x - a_y||_1 <= |A_x (+) A_y| and ||a_x ^ a_y||_1 >= |A_x n A_y| on the
/// given pairs (A sorted). The chain family must come from family_from_multisets.
inline MultisetInequalityReport check_multiset_inequalities(const MultisetFamily& sets, const IndexedFamily& chains,
                                                            const std::vector<std::pair<PointId, PointId>>& pairs) {
  MultisetInequalityReport rep;
  for (auto [x, y] : pairs) {
    const auto& A = sets.sets.at(x);
    const auto& B = sets.sets.at(y);
    std::size_t inter = intersection_size(A, B);
    std::size_t symdiff = A.size() + B.size() - 2 * inter;
    const auto& a = chains.chains.at(x);
    const auto& b = chains.chains.at(y);
    ++rep.pairs_checked;
    if (l1_distance(a, b) > symdiff || meet_norm(a, b) < inter) rep.violations.emplace_back(x, y);
  }
  rep.pass = rep.violations.empty();
  return rep;
}

struct PairWitness {
  PointId x = 0;
  PointId y = 0;
  Rational distance;
  Ratio ratio;
};

struct FamilyReport {
  bool pass = true;
  bool ratio_ok = true;
  bool support_ok = true;
  bool flat_ok = true;
  bool nonempty_ok = true;
  bool require_flat = false;
  std::size_t index_count = 0;
  std::size_t pairs_checked = 0;
  std::optional<PairWitness> worst;
  std::size_t ratio_failure_count = 0;
  std::vector<PairWitness> ratio_failures;  // first kMaxListed, in pair order
  Rational max_support_radius{0};
  std::optional<PointId> max_support_index;
  std::vector<PointId> support_violations;
  std::vector<PointId> non_flat;
  std::vector<PointId> empty_chains;

  static constexpr std::size_t kMaxListed = 64;
};

/// Checks, for all index pairs with d(x,y) <= R, ratio(a_x, a_y) < epsilon,
/// and supp(a_x) within B(x, S); optionally that every chain is 0,1-valued.
/// Failures are reported, never thrown.
inline FamilyReport verify_family(const WindowSpace& space, const IndexedFamily& fam, bool require_flat,
                                  unsigned jobs = 1) {
  fam.params.validate();
  FamilyReport rep;
  rep.require_flat = require_flat;
  const auto indices = fam.indices();
  rep.index_count = indices.size();
  for (PointId x : indices) space.check(x);

  for (const auto& [x, c] : fam.chains) {
    if (c.empty()) rep.empty_chains.push_back(x);
    if (!c.is_flat()) rep.non_flat.push_back(x);
  }
  rep.nonempty_ok = rep.empty_chains.empty();
  rep.flat_ok = !require_flat || rep.non_flat.empty();

  std::vector<Rational> radius(indices.size(), Rational(0));
  parallel_for(indices.size(), jobs, [&](std::size_t i) {
    PointId x = indices[i];
    Rational best(0);
    for (const auto& [z, w] : fam.chains.at(x)) best = std::max(best, space.dist(x, z));
    radius[i] = best;
  });
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (radius[i] > fam.params.S) rep.support_violations.push_back(indices[i]);
    if (!rep.max_support_index || radius[i] > rep.max_support_radius) {
      rep.max_support_radius = radius[i];
      rep.max_support_index = indices[i];
    }
  }
  rep.support_ok = rep.support_violations.empty();

  const auto pairs = in_range_pairs(space, indices, fam.params.R);
  rep.pairs_checked = pairs.size();
  std::vector<Ratio> ratios(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    ratios[i] = ratio(fam.chains.at(pairs[i].first), fam.chains.at(pairs[i].second));
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    if (!rep.worst || ratios[i] > rep.worst->ratio) rep.worst = PairWitness{x, y, space.dist(x, y), ratios[i]};
    if (!ratios[i].below(fam.params.epsilon)) {
      ++rep.ratio_failure_count;
      if (rep.ratio_failures.size() < FamilyReport::kMaxListed)
        rep.ratio_failures.push_back(PairWitness{x, y, space.dist(x, y), ratios[i]});
    }
  }
  rep.ratio_ok = rep.ratio_failure_count == 0;
  rep.pass = rep.ratio_ok && rep.support_ok && rep.flat_ok && rep.nonempty_ok;
  return rep;
}

}  // namespace coarse
