#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/rational.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// Nondecreasing piecewise-linear function through (t_i, v_i), t_0 = 0,
/// extended past the last knot with the last slope (flat for one knot).
class ModulusTable {
 public:
  ModulusTable() = default;
  explicit ModulusTable(std::vector<std::pair<Rational, Rational>> knots) : knots_(std::move(knots)) {
    if (knots_.empty() || knots_.front().first != 0) throw InvalidInput("modulus table must start at t = 0");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (knots_[i].first <= knots_[i - 1].first) throw InvalidInput("modulus knots must be strictly increasing in t");
      if (knots_[i].second < knots_[i - 1].second) throw InvalidInput("modulus must be nondecreasing");
    }
  }

  Rational operator()(const Rational& t) const {
    if (knots_.empty()) throw InvalidInput("empty modulus table");
    if (knots_.size() == 1) return knots_.front().second;
    std::size_t i = 1;
    while (i + 1 < knots_.size() && knots_[i].first < t) ++i;
    const auto& [t0, v0] = knots_[i - 1];
    const auto& [t1, v1] = knots_[i];
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  }

  const std::vector<std::pair<Rational, Rational>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<Rational, Rational>> knots_;
};

struct ModuliReport {
  bool pass = true;
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  std::optional<std::pair<PointId, PointId>> first_violation;
};

/// rho_minus(d(x,x')) <= d(f x, f x') <= rho_plus(d(x,x')) for all pairs.
inline ModuliReport check_moduli(const WindowSpace& X, const WindowSpace& Y, const std::vector<PointId>& f,
                                 const ModulusTable& rho_minus, const ModulusTable& rho_plus) {
  if (f.size() != X.size()) throw InvalidInput("map must assign an image to every point");
  ModuliReport rep;
  for (PointId a = 0; a < X.size(); ++a)
    for (PointId b = a + 1; b < X.size(); ++b) {
      ++rep.pairs_checked;
      Rational dx = X.dist(a, b), dy = Y.dist(f[a], f[b]);
      if (rho_minus(dx) > dy || dy > rho_plus(dx)) {
        ++rep.violations;
        if (!rep.first_violation) rep.first_violation = {a, b};
      }
    }
  rep.pass = rep.violations == 0;
  return rep;
}

/// Reduction data for a (not necessarily injective) coarse map f: X -> Y.
/// g picks the smallest preimage of each image point; Z = g(f(X)); iota
/// sends x to (g f x, rank of x within its fibre), which is injective into
/// Z x {0..M-1} because each fibre lies in B(g f x, S) and |B(., S)| <= M.
struct CoarseMapModel {
  std::vector<PointId> f;
  std::map<PointId, PointId> section;  // y in f(X) -> g(y)
  std::vector<PointId> Z;              // sorted X-ids
  Rational S{0};
  std::uint64_t M = 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> iota;  // x -> (index into Z, level)

  PointId iota_id(PointId x) const {
    return static_cast<PointId>(iota.at(x).first * M + iota.at(x).second);
  }
};

inline CoarseMapModel build_coarse_model(const WindowSpace& X, const WindowSpace& Y, std::vector<PointId> f) {
  if (f.size() != X.size()) throw InvalidInput("map must assign an image to every point");
  if (f.empty()) throw EmptyImage();
  for (PointId y : f) Y.check(y);
  CoarseMapModel m;
  m.f = std::move(f);
  for (PointId x = 0; x < X.size(); ++x) m.section.try_emplace(m.f[x], x);
  for (const auto& [y, x] : m.section) m.Z.push_back(x);
  std::sort(m.Z.begin(), m.Z.end());
  for (PointId x = 0; x < X.size(); ++x) m.S = std::max(m.S, X.dist(x, m.section.at(m.f[x])));
  std::uint64_t M = 1;
  for (PointId x = 0; x < X.size(); ++x) M = std::max<std::uint64_t>(M, X.ball(x, m.S).size());
  m.M = M;
  std::map<PointId, std::uint32_t> next_level;
  m.iota.resize(X.size());
  for (PointId x = 0; x < X.size(); ++x) {
    PointId z = m.section.at(m.f[x]);
    auto zi = static_cast<std::uint32_t>(std::lower_bound(m.Z.begin(), m.Z.end(), z) - m.Z.begin());
    std::uint32_t level = next_level[z]++;
    if (level >= M) throw InvalidInput("fibre larger than M; S-balls bound violated");
    m.iota[x] = {zi, level};
  }
  return m;
}

struct PushforwardOptions {
  /// When set, S on Y is rho_plus(S) + codensity of the image; otherwise the
  /// measured support radius.
  std::optional<ModulusTable> rho_plus;
};

/// B_y = f(A_{x(y)}) where f(x(y)) is a nearest image point to y (ties: the
/// smallest x). f must be injective on the family's indices and supports.
inline IndexedFamily pushforward_injective(const IndexedFamily& fam, const WindowSpace& X, const WindowSpace& Y,
                                           const std::vector<PointId>& f, const PushforwardOptions& opts = {}) {
  if (f.size() != X.size()) throw InvalidInput("map must assign an image to every point");
  if (fam.chains.empty()) throw EmptyImage();
  {
    std::vector<PointId> img = f;
    std::sort(img.begin(), img.end());
    if (std::adjacent_find(img.begin(), img.end()) != img.end()) throw InvalidInput("map is not injective");
    for (PointId y : img) Y.check(y);
  }
  IndexedFamily out;
  out.params = fam.params;
  const auto indices = fam.indices();
  Rational codensity(0);
  Rational measured(0);
  for (PointId y = 0; y < Y.size(); ++y) {
    PointId chosen = indices.front();
    Rational best = Y.dist(f[chosen], y);
    for (PointId x : indices) {
      Rational d = Y.dist(f[x], y);
      if (d < best) {
        best = d;
        chosen = x;
      }
    }
    codensity = std::max(codensity, best);
    std::vector<Chain::Entry> e;
    for (const auto& [z, w] : fam.chains.at(chosen)) {
      e.emplace_back(f[z], w);
      measured = std::max(measured, Y.dist(y, f[z]));
    }
    out.chains.emplace(y, Chain(std::move(e)));
  }
  out.params.S = opts.rho_plus ? (*opts.rho_plus)(fam.params.S) + codensity : measured;
  return out;
}

/// ~A_z = {w : A_(z,0) meets {w} x {0..M-1}}, on a family over the product
/// Z x {0..M-1} with ids z*M + i. Ratios below eps' become ratios below
/// M eps', which is what epsilon is set to.
inline IndexedFamily project_family(const IndexedFamily& fam, std::uint64_t M) {
  if (M < 1) throw InvalidInput("M must be positive");
  IndexedFamily out;
  out.params = fam.params;
  out.params.epsilon = fam.params.epsilon * Rational(static_cast<std::int64_t>(M));
  out.params.M = 0;
  for (const auto& [id, chain] : fam.chains) {
    if (id % M != 0) continue;
    std::vector<PointId> pts;
    for (const auto& [p, w] : chain) pts.push_back(static_cast<PointId>(p / M));
    out.chains.emplace(static_cast<PointId>(id / M), Chain::indicator(pts));
  }
  if (out.chains.empty()) throw InvalidInput("family has no index on level 0");
  return out;
}

/// Every stage of moving a naive family on X to Y along a coarse map.
struct TransferResult {
  CoarseMapModel model;
  WindowSpace Z;        // subspace g(f(X)) of X
  WindowSpace product;  // Z x {0..M-1}
  IndexedFamily on_product;
  IndexedFamily on_Z;
  IndexedFamily on_Y;
};

/// X -> Z x {0..M-1} by iota, project to Z, then Z -> Y by f (injective on Z).
/// epsilon of the input should be the target epsilon divided by M.
inline TransferResult transfer_family(const IndexedFamily& fam, const WindowSpace& X, const WindowSpace& Y,
                                      const std::vector<PointId>& f) {
  TransferResult res{build_coarse_model(X, Y, f), {}, {}, {}, {}, {}};
  const auto& m = res.model;
  res.Z = make_subspace(X, m.Z);
  res.product = make_product_interval(res.Z, m.M);
  std::vector<PointId> iota_map(X.size());
  for (PointId x = 0; x < X.size(); ++x) iota_map[x] = m.iota_id(x);
  res.on_product = pushforward_injective(fam, X, res.product, iota_map);
  res.on_Z = project_family(res.on_product, m.M);
  std::vector<PointId> fz(m.Z.size());
  for (std::size_t i = 0; i < m.Z.size(); ++i) fz[i] = m.f[m.Z[i]];
  res.on_Y = pushforward_injective(res.on_Z, res.Z, Y, fz);
  return res;
}

}  // namespace coarse
