#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iterator>
#include <optional>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// Box space of Z for N_j = m^j Z, j = 1..boxes: the cycles Z/m^j glued by
/// the disjoint-union convention with spacing[j-1] as the spacing of box j.
struct BoxSpaceModel {
  std::uint64_t m = 2;
  std::size_t boxes = 1;
  std::vector<std::int64_t> spacing;  // spacing[j-1] for box j
  std::vector<PointId> offsets;       // first id of box j at offsets[j-1]
  std::vector<std::uint64_t> sizes;   // m^j
  WindowSpace space;

  /// pi_j(g) as a point id.
  PointId project(std::size_t j, std::int64_t g) const {
    const auto L = static_cast<std::int64_t>(sizes.at(j - 1));
    return offsets[j - 1] + static_cast<PointId>(((g % L) + L) % L);
  }
  /// Box index (1-based) and coset representative in [0, m^j) of a point.
  std::pair<std::size_t, std::int64_t> locate(PointId p) const {
    space.check(p);
    std::size_t j = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), p) - offsets.begin());
    return {j, static_cast<std::int64_t>(p - offsets[j - 1])};
  }
};

/// spacing(j) = floor(R) + j, which exceeds R for every box.
inline std::vector<std::int64_t> default_box_spacing(const Rational& R, std::size_t boxes) {
  std::vector<std::int64_t> s;
  const std::int64_t base = R.numerator() / R.denominator();
  for (std::size_t j = 1; j <= boxes; ++j) s.push_back(base + static_cast<std::int64_t>(j));
  return s;
}

inline BoxSpaceModel build_box_space(std::uint64_t m, std::size_t boxes, std::vector<std::int64_t> spacing) {
  if (m < 2) throw InvalidInput("box space needs m >= 2");
  if (boxes < 1) throw InvalidInput("box space needs at least one box");
  if (spacing.size() != boxes) throw InvalidInput("spacing schedule must have one entry per box");
  for (std::size_t j = 1; j < boxes; ++j)
    if (spacing[j] <= spacing[j - 1]) throw InvalidInput("spacing schedule must be strictly increasing");
  if (spacing.front() <= 0) throw InvalidInput("spacing must be positive");
  BoxSpaceModel model;
  model.m = m;
  model.boxes = boxes;
  model.spacing = std::move(spacing);
  std::vector<WindowSpace> parts;
  std::uint64_t L = 1;
  for (std::size_t j = 1; j <= boxes; ++j) {
    L *= m;
    if (L > 5'000'000) throw InvalidInput("box sizes too large");
    model.sizes.push_back(L);
    parts.push_back(make_cycle(L));
  }
  model.space = make_disjoint_union(parts, model.spacing, &model.offsets);
  return model;
}

struct BoxFamilyResult {
  IndexedFamily family;
  Rational S{0};  // max(diam F, d(e, F))
  std::size_t J = 0;
  std::size_t J_isometry = 0;  // least J with m^j >= 2(R + 2S) + 1 for all j > J
  std::size_t J_spacing = 0;   // least J with spacing(k) > R for all k > J
  std::size_t pairs_checked = 0;
  std::size_t equality_failures = 0;
  Ratio worst_ratio{0, 1};     // over in-range pairs in boxes j > J
  std::optional<std::pair<PointId, PointId>> worst_pair;
  std::size_t catch_all_pairs = 0;
  bool catch_all_ok = true;

  bool equalities_hold() const { return equality_failures == 0; }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> interval_counts(const std::vector<std::int64_t>& a,
                                                           const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  return {a.size() + b.size() - 2 * inter.size(), inter.size()};
}

}  // namespace detail

/// A_g = g pi_j(F) in boxes past J and the union of boxes 1..J below it.
/// For every in-range pair past J, the cardinalities of symmetric difference
/// and intersection are compared with those of the lifted translates in Z.
inline BoxFamilyResult box_family(const BoxSpaceModel& model, std::vector<std::int64_t> F, const Rational& R,
                                  const Rational& eps) {
  if (F.empty()) throw InvalidInput("F must be non-empty");
  if (R < 0 || eps <= 0) throw InvalidInput("need R >= 0 and eps > 0");
  std::sort(F.begin(), F.end());
  F.erase(std::unique(F.begin(), F.end()), F.end());
  BoxFamilyResult res;
  std::int64_t diam = F.back() - F.front();
  std::int64_t to_e = std::abs(F.front());
  for (auto f : F) to_e = std::min(to_e, std::abs(f));
  res.S = Rational(std::max(diam, to_e));

  const Rational rho = R + res.S * 2;
  const Rational needed = rho * 2 + 1;
  // smallest j with m^j >= 2(R + 2S) + 1
  const std::int64_t needed_int = (needed.numerator() + needed.denominator() - 1) / needed.denominator();
  std::size_t j_min = 1;
  for (__int128 L = model.m; L < needed_int; L *= model.m) ++j_min;
  res.J_isometry = j_min - 1;
  std::size_t k0 = 1;
  while (k0 <= model.boxes && Rational(model.spacing[k0 - 1]) <= R) ++k0;
  res.J_spacing = k0 - 1;
  res.J = std::max(res.J_isometry, res.J_spacing);
  if (res.J >= model.boxes) throw WindowTooSmall(model.boxes, res.J);

  IndexedFamily& fam = res.family;
  fam.params.R = R;
  fam.params.epsilon = eps;
  std::vector<PointId> catch_all;
  for (std::size_t j = 1; j <= res.J; ++j)
    for (std::uint64_t g = 0; g < model.sizes[j - 1]; ++g)
      catch_all.push_back(model.project(j, static_cast<std::int64_t>(g)));
  const Chain catch_all_chain = Chain::indicator(catch_all);
  for (std::size_t j = 1; j <= model.boxes; ++j)
    for (std::uint64_t g = 0; g < model.sizes[j - 1]; ++g) {
      PointId p = model.project(j, static_cast<std::int64_t>(g));
      if (j <= res.J) {
        fam.chains.emplace(p, catch_all_chain);
      } else {
        std::vector<PointId> pts;
        for (auto f : F) pts.push_back(model.project(j, static_cast<std::int64_t>(g) + f));
        fam.chains.emplace(p, Chain::indicator(pts));
      }
    }
  Rational radius(0);
  for (const auto& [x, c] : fam.chains)
    for (const auto& [z, w] : c) radius = std::max(radius, model.space.dist(x, z));
  fam.params.S = radius;

  for (auto [x, y] : in_range_pairs(model.space, fam.indices(), R)) {
    auto [jx, gx] = model.locate(x);
    auto [jy, gy] = model.locate(y);
    if (jx <= res.J || jy <= res.J) {
      ++res.catch_all_pairs;
      if (jx != jy && (jx > res.J || jy > res.J)) res.catch_all_ok = false;
      if (!(ratio(fam.chains.at(x), fam.chains.at(y)) == Ratio{0, 1})) res.catch_all_ok = false;
      continue;
    }
    if (jx != jy) {
      ++res.equality_failures;  // boxes past J must be more than R apart
      continue;
    }
    ++res.pairs_checked;
    const auto L = static_cast<std::int64_t>(model.sizes[jx - 1]);
    std::int64_t delta = ((gy - gx) % L + L) % L;
    if (delta > L / 2) delta -= L;
    std::vector<std::int64_t> gF, hF;
    for (auto f : F) {
      gF.push_back(gx + f);
      hF.push_back(gx + delta + f);
    }
    auto [sym_z, inter_z] = detail::interval_counts(gF, hF);
    Ratio r = ratio(fam.chains.at(x), fam.chains.at(y));
    if (r.num != sym_z || r.den != inter_z) ++res.equality_failures;
    if (!res.worst_pair || r > res.worst_ratio) {
      res.worst_ratio = r;
      res.worst_pair = {x, y};
    }
  }
  return res;
}

}  // namespace coarse
