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
#include "coarse/parallel.hpp"
#include "coarse/rips.hpp"
#include "coarse/space.hpp"

namespace coarse {

/// One application of the tower shift:
///   s1(a)(x) = b(a)(x) + sum over y with sigma(y) = x of t(a)(y).
/// Base and towers are read from the input snapshot and all tower mass moves
/// at once. Throws FlowEscaped when a sink carries tower mass.
inline Chain shift_step(const Chain& a, const FlowField& flow, std::uint64_t steps_done = 0) {
  std::vector<Chain::Entry> out;
  out.reserve(a.support_size() * 2);
  for (const auto& [x, w] : a) {
    if (x >= flow.size()) throw UnknownPoint(x);
    out.emplace_back(x, 1);
    if (w > 1) {
      PointId next = flow.sigma[x];
      if (next == FlowField::kNoImage) throw FlowEscaped(x, steps_done);
      out.emplace_back(next, w - 1);
    }
  }
  return Chain(std::move(out));
}

struct FlattenTrace {
  std::uint64_t steps = 0;
  std::uint64_t bound = 0;  // ||a||_1 * ||t(a)||_1
  Rational support_radius_growth{0};  // r * steps
  bool escaped = false;
};

/// s_infinity(a): iterate the shift until the chain is 0,1-valued. Flat
/// chains are fixed points, so iteration stops as soon as flatness holds.
/// Exhausting the budget ||a||_1 * ||t(a)||_1 throws ContradictsClaim2.
inline std::pair<Chain, FlattenTrace> flatten(const Chain& a, const FlowField& flow) {
  if (a.empty()) throw InvalidInput("cannot flatten the empty chain");
  FlattenTrace trace;
  trace.bound = a.norm() * tower_norm(a);
  Chain cur = a;
  while (!cur.is_flat()) {
    if (trace.steps >= trace.bound) throw ContradictsClaim2(trace.bound, tower_norm(cur));
    cur = shift_step(cur, flow, trace.steps);
    ++trace.steps;
  }
  trace.support_radius_growth = flow.r * Rational(static_cast<std::int64_t>(trace.steps));
  return {std::move(cur), trace};
}

/// All iterates a, s1(a), ..., s_n(a) = s_infinity(a).
inline std::vector<Chain> flatten_orbit(const Chain& a, const FlowField& flow) {
  std::vector<Chain> orbit{a};
  const std::uint64_t bound = a.norm() * tower_norm(a);
  while (!orbit.back().is_flat()) {
    if (orbit.size() - 1 >= bound) throw ContradictsClaim2(bound, tower_norm(orbit.back()));
    orbit.push_back(shift_step(orbit.back(), flow, orbit.size() - 1));
  }
  return orbit;
}

/// Cheap precheck: the smallest sigma-depth over supp(a) against the step
/// budget. A shallow point only *may* escape; this is a warning, not a gate.
struct EscapeWarning {
  PointId shallowest = 0;
  std::uint64_t depth = 0;
  std::uint64_t budget = 0;
  bool at_risk = false;
};

inline EscapeWarning escape_precheck(const Chain& a, const FlowField& flow) {
  EscapeWarning w;
  w.budget = a.norm() * tower_norm(a);
  bool first = true;
  for (const auto& [x, weight] : a) {
    std::uint64_t d = sigma_depth(flow, x);
    if (first || d < w.depth) {
      w.depth = d;
      w.shallowest = x;
      first = false;
    }
  }
  w.at_risk = tower_norm(a) > 0 && w.depth < w.budget;
  return w;
}

struct EscapeRecord {
  PointId index = 0;
  PointId sink = 0;
  std::uint64_t steps_done = 0;
  std::uint64_t bound = 0;
};

struct FlattenFamilyReport {
  Ratio worst_ratio_before{0, 1};
  Ratio worst_ratio_after{0, 1};
  std::optional<std::pair<PointId, PointId>> worst_pair_before;
  std::optional<std::pair<PointId, PointId>> worst_pair_after;
  std::uint64_t max_steps = 0;
  std::uint64_t max_bound = 0;
  Rational new_S{0};
  std::size_t pairs_checked = 0;
  bool pairwise_monotone = true;  // after <= before on every in-range pair
  std::vector<std::pair<PointId, PointId>> monotonicity_violations;
  std::vector<EscapeRecord> escaped;
  std::map<PointId, FlattenTrace> traces;
};

/// Raised by flatten_family when some chains escape; carries every escape.
class FamilyFlowEscaped : public Error {
 public:
  FamilyFlowEscaped(std::vector<EscapeRecord> records, FlattenFamilyReport partial)
      : Error("FlowEscaped", describe(records)), records_(std::move(records)), partial_(std::move(partial)) {}
  const std::vector<EscapeRecord>& records() const noexcept { return records_; }
  const FlattenFamilyReport& partial_report() const noexcept { return partial_; }

 private:
  static std::string describe(const std::vector<EscapeRecord>& r) {
    return "flattening escaped the window at " + std::to_string(r.size()) + " index(es), first at index " +
           std::to_string(r.empty() ? 0 : r.front().index) + " (sink " +
           std::to_string(r.empty() ? 0 : r.front().sink) + ")";
  }
  std::vector<EscapeRecord> records_;
  FlattenFamilyReport partial_;
};

/// Flattens every chain against one shared flow. The result has the same
/// indices, is 0,1-valued, and S' = S + r * max steps. The report compares
/// in-range ratios before and after.
inline std::pair<IndexedFamily, FlattenFamilyReport> flatten_family(const WindowSpace& space,
                                                                    const IndexedFamily& fam, const FlowField& flow,
                                                                    unsigned jobs = 1) {
  if (flow.size() != space.size()) throw InvalidInput("flow was not built on this space");
  const auto indices = fam.indices();
  std::vector<std::optional<std::pair<Chain, FlattenTrace>>> results(indices.size());
  std::vector<std::optional<EscapeRecord>> escapes(indices.size());
  parallel_for(indices.size(), jobs, [&](std::size_t i) {
    const Chain& a = fam.chains.at(indices[i]);
    try {
      results[i] = flatten(a, flow);
    } catch (const FlowEscaped& e) {
      escapes[i] = EscapeRecord{indices[i], e.sink(), e.steps_done(), a.norm() * tower_norm(a)};
    } catch (const Error& e) {
      throw Error(e.kind(), "index " + std::to_string(indices[i]) + ": " + e.what());
    }
  });

  FlattenFamilyReport rep;
  IndexedFamily out;
  out.params = fam.params;
  out.space_ref = fam.space_ref;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (escapes[i]) {
      rep.escaped.push_back(*escapes[i]);
      continue;
    }
    auto& [chain, trace] = *results[i];
    rep.max_steps = std::max(rep.max_steps, trace.steps);
    rep.max_bound = std::max(rep.max_bound, trace.bound);
    rep.traces.emplace(indices[i], trace);
    out.chains.emplace(indices[i], std::move(chain));
  }
  rep.new_S = fam.params.S + flow.r * Rational(static_cast<std::int64_t>(rep.max_steps));
  out.params.S = rep.new_S;

  const auto pairs = in_range_pairs(space, indices, fam.params.R);
  for (auto [x, y] : pairs) {
    if (!out.chains.count(x) || !out.chains.count(y)) continue;
    ++rep.pairs_checked;
    Ratio before = ratio(fam.chains.at(x), fam.chains.at(y));
    Ratio after = ratio(out.chains.at(x), out.chains.at(y));
    if (!rep.worst_pair_before || before > rep.worst_ratio_before) {
      rep.worst_ratio_before = before;
      rep.worst_pair_before = {x, y};
    }
    if (!rep.worst_pair_after || after > rep.worst_ratio_after) {
      rep.worst_ratio_after = after;
      rep.worst_pair_after = {x, y};
    }
    if (after > before) {
      rep.pairwise_monotone = false;
      rep.monotonicity_violations.emplace_back(x, y);
    }
  }
  if (!rep.escaped.empty()) throw FamilyFlowEscaped(rep.escaped, rep);
  return {std::move(out), std::move(rep)};
}

}  // namespace coarse
