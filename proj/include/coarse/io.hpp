#pragma once

// JSON interchange. Rationals travel as "p/q" strings, never as floats.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarse/amenability.hpp"
#include "coarse/box_space.hpp"
#include "coarse/chain.hpp"
#include "coarse/error.hpp"
#include "coarse/family.hpp"
#include "coarse/flatten.hpp"
#include "coarse/rational.hpp"
#include "coarse/rips.hpp"
#include "coarse/space.hpp"
#include "coarse/tails.hpp"

namespace coarse::io {

using json = nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

/// Accepts inline JSON text or a path to a JSON file.
inline json json_from_arg(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw InvalidInput(std::string("malformed inline JSON: ") + e.what());
    }
  }
  return read_json_file(arg);
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad field '") + key + "': " + e.what());
  }
}

inline Rational rational_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(std::string("bad rational in '") + key + "': " + e.what());
  }
  throw InvalidInput(std::string("field '") + key + "' must be a \"p/q\" string or an integer");
}

inline Rational rational_field_or(const json& j, const char* key, Rational fallback) {
  return j.is_object() && j.contains(key) ? rational_field(j, key) : fallback;
}

// ---------------------------------------------------------------- spaces

inline json to_json(const WindowSpace& s) {
  json j;
  j["points"] = s.size();
  j["label"] = s.label();
  j["frontier"] = s.frontier();
  if (s.is_graph_metric()) {
    json edges = json::array();
    for (const auto& e : s.edges()) edges.push_back({e.u, e.v, e.w});
    j["metric"] = {{"type", "graph"}, {"edges", edges}};
  } else {
    json rows = json::array();
    const auto n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(to_string(s.matrix()[i * n + k]));
      rows.push_back(row);
    }
    j["metric"] = {{"type", "matrix"}, {"entries", rows}};
  }
  if (s.has_coords()) j["coords"] = s.coords();
  return j;
}

inline WindowSpace space_from_json(const json& j) {
  const auto n = get<std::size_t>(j, "points");
  const auto& metric = j.contains("metric") ? j.at("metric") : throw InvalidInput("missing field 'metric'");
  auto type = get<std::string>(metric, "type");
  std::vector<PointId> frontier = j.contains("frontier") ? j.at("frontier").get<std::vector<PointId>>() : std::vector<PointId>{};
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string("space");
  WindowSpace s;
  if (type == "graph") {
    std::vector<Edge> edges;
    for (const auto& e : get<json>(metric, "edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw InvalidInput("graph edge must be [u, v] or [u, v, w]");
      edges.push_back({e[0].get<PointId>(), e[1].get<PointId>(), e.size() == 3 ? e[2].get<std::int64_t>() : 1});
    }
    s = WindowSpace::from_graph(n, std::move(edges), std::move(frontier), std::move(label));
  } else if (type == "matrix") {
    const auto& rows = get<json>(metric, "entries");
    if (!rows.is_array() || rows.size() != n) throw InvalidInput("matrix must have one row per point");
    std::vector<Rational> m;
    m.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) throw InvalidInput("matrix rows must have one entry per point");
      for (const auto& v : row) {
        try {
          m.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<std::int64_t>()));
        } catch (const std::invalid_argument& e) {
          throw InvalidInput(e.what());
        }
      }
    }
    s = WindowSpace::from_matrix(n, std::move(m), std::move(frontier), std::move(label));
  } else {
    throw InvalidInput("unknown metric type '" + type + "'");
  }
  if (j.contains("coords")) s = with_coords(s, j.at("coords").get<std::vector<std::vector<std::int64_t>>>());
  return s;
}

/// Builds a space from a generator descriptor: grid, regular_tree,
/// rooted_tree, cycle, line_points, union, product, or an inline space
/// (object with "points") / {"type": "file", "path": ...}.
inline WindowSpace generate(const json& spec) {
  if (spec.is_object() && spec.contains("points") && spec.contains("metric")) return space_from_json(spec);
  auto type = get<std::string>(spec, "type");
  if (type == "grid") return make_grid(get<int>(spec, "dim"), get<std::int64_t>(spec, "lo"), get<std::int64_t>(spec, "hi"));
  if (type == "regular_tree") return make_regular_tree(get<int>(spec, "degree"), get<int>(spec, "depth"));
  if (type == "rooted_tree") return make_rooted_tree(get<int>(spec, "branching"), get<int>(spec, "depth"));
  if (type == "cycle") {
    auto len = get<std::int64_t>(spec, "length");
    if (len < 1) throw InvalidInput("cycle length must be positive");
    return make_cycle(static_cast<std::size_t>(len));
  }
  if (type == "line_points") {
    std::vector<Rational> pos;
    for (const auto& v : get<json>(spec, "positions"))
      pos.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<std::int64_t>()));
    std::vector<PointId> frontier =
        spec.contains("frontier") ? spec.at("frontier").get<std::vector<PointId>>() : std::vector<PointId>{};
    return make_line_points(std::move(pos), std::move(frontier));
  }
  if (type == "union") {
    std::vector<WindowSpace> parts;
    for (const auto& p : get<json>(spec, "parts")) parts.push_back(generate(p));
    std::vector<std::int64_t> spacing;
    const auto& sp = get<json>(spec, "spacing");
    if (sp.is_number_integer())
      spacing.assign(parts.size(), sp.get<std::int64_t>());
    else
      spacing = sp.get<std::vector<std::int64_t>>();
    return make_disjoint_union(parts, spacing);
  }
  if (type == "product") {
    auto M = get<std::int64_t>(spec, "M");
    if (M < 1) throw InvalidInput("product interval length must be positive");
    return make_product_interval(generate(get<json>(spec, "base")), static_cast<std::size_t>(M));
  }
  if (type == "file") return space_from_json(read_json_file(get<std::string>(spec, "path")));
  throw InvalidInput("unknown generator type '" + type + "'");
}

inline json to_json(const GrowthProfile& g) {
  json arr = json::array();
  for (const auto& e : g)
    arr.push_back({{"R", to_string(e.radius)}, {"max_ball", e.max_ball}, {"interior_points", e.interior_points}});
  return arr;
}

// ---------------------------------------------------------------- rips / flow

inline json to_json(const RipsGraph& g) {
  json edges = json::array();
  for (PointId u = 0; u < g.size(); ++u)
    for (PointId v : g.adjacency[u])
      if (u < v) edges.push_back({u, v});
  return {{"points", g.size()},       {"r", to_string(g.r)},         {"edges", edges},
          {"frontier", g.frontier},  {"components", g.components.size()}};
}

inline RipsGraph rips_from_json(const json& j) {
  std::vector<std::pair<PointId, PointId>> edges;
  for (const auto& e : get<json>(j, "edges")) edges.emplace_back(e.at(0).get<PointId>(), e.at(1).get<PointId>());
  return make_rips(get<std::size_t>(j, "points"), rational_field(j, "r"), edges, get<std::vector<PointId>>(j, "frontier"));
}

inline json to_json(const UnboundednessReport& r) {
  return {{"pass", r.pass}, {"components", r.component_count}, {"bounded_components", r.bounded_components}};
}

inline json to_json(const FlowField& f) {
  json sigma = json::array();
  for (PointId x = 0; x < f.size(); ++x)
    if (f.sigma[x] != FlowField::kNoImage) sigma.push_back({x, f.sigma[x]});
  return {{"points", f.size()}, {"sigma", sigma}, {"sinks", f.sinks}, {"r", to_string(f.r)}};
}

inline FlowField flow_from_json(const json& j) {
  FlowField f;
  f.r = rational_field(j, "r");
  f.sinks = get<std::vector<PointId>>(j, "sinks");
  std::size_t n = 0;
  std::vector<std::pair<PointId, PointId>> pairs;
  for (const auto& p : get<json>(j, "sigma")) {
    pairs.emplace_back(p.at(0).get<PointId>(), p.at(1).get<PointId>());
    n = std::max<std::size_t>(n, std::max(pairs.back().first, pairs.back().second) + std::size_t{1});
  }
  for (PointId s : f.sinks) n = std::max<std::size_t>(n, s + std::size_t{1});
  if (j.contains("points")) n = get<std::size_t>(j, "points");
  f.sigma.assign(n, FlowField::kNoImage);
  for (auto [x, y] : pairs) {
    if (x >= n || y >= n) throw UnknownPoint(std::max(x, y));
    f.sigma[x] = y;
  }
  std::sort(f.sinks.begin(), f.sinks.end());
  return f;
}

// ---------------------------------------------------------------- chains / families

inline json to_json(const Chain& c) {
  json w = json::array();
  for (const auto& [p, v] : c) w.push_back({p, v});
  return {{"weights", w}};
}

inline Chain chain_from_json(const json& j) {
  std::vector<Chain::Entry> e;
  for (const auto& p : get<json>(j, "weights")) {
    auto w = p.at(1).get<std::int64_t>();
    if (w < 0) throw InvalidInput("chain weights must be nonnegative");
    e.emplace_back(p.at(0).get<PointId>(), static_cast<Weight>(w));
  }
  return Chain(std::move(e));
}

inline json to_json(const FamilyParams& p) {
  return {{"R", to_string(p.R)}, {"epsilon", to_string(p.epsilon)}, {"S", to_string(p.S)}, {"M", p.M}};
}

inline FamilyParams params_from_json(const json& j) {
  FamilyParams p;
  p.R = rational_field(j, "R");
  p.epsilon = rational_field(j, "epsilon");
  p.S = rational_field(j, "S");
  p.M = j.contains("M") ? j.at("M").get<std::uint64_t>() : 0;
  p.validate();
  return p;
}

inline json to_json(const IndexedFamily& f) {
  json chains = json::array();
  for (const auto& [x, c] : f.chains) chains.push_back({x, to_json(c)});
  json j = {{"params", to_json(f.params)}, {"chains", chains}};
  if (!f.space_ref.empty()) j["space"] = f.space_ref;
  return j;
}

inline IndexedFamily family_from_json(const json& j) {
  IndexedFamily f;
  f.params = params_from_json(get<json>(j, "params"));
  for (const auto& e : get<json>(j, "chains")) {
    auto x = e.at(0).get<PointId>();
    if (!f.chains.emplace(x, chain_from_json(e.at(1))).second)
      throw InvalidInput("duplicate family index " + std::to_string(x));
  }
  if (j.contains("space")) f.space_ref = j.at("space").get<std::string>();
  return f;
}

inline json to_json(const MultisetFamily& f) {
  json sets = json::array();
  for (const auto& [x, cells] : f.sets) {
    json cs = json::array();
    for (const auto& c : cells) cs.push_back({c.point, c.level});
    sets.push_back({x, cs});
  }
  json j = {{"params", to_json(f.params)}, {"sets", sets}};
  if (!f.space_ref.empty()) j["space"] = f.space_ref;
  return j;
}

inline MultisetFamily multiset_family_from_json(const json& j) {
  MultisetFamily f;
  f.params = params_from_json(get<json>(j, "params"));
  for (const auto& e : get<json>(j, "sets")) {
    std::vector<Cell> cells;
    for (const auto& c : e.at(1)) cells.push_back(Cell{c.at(0).get<PointId>(), c.at(1).get<std::uint64_t>()});
    f.sets.emplace(e.at(0).get<PointId>(), std::move(cells));
  }
  if (j.contains("space")) f.space_ref = j.at("space").get<std::string>();
  f.normalize();
  return f;
}

inline json to_json(const PairWitness& w) {
  return {{"x", w.x}, {"y", w.y}, {"distance", to_string(w.distance)}, {"ratio", to_string(w.ratio)}};
}

inline json to_json(const FamilyReport& r) {
  json j;
  j["pass"] = r.pass;
  j["ratio_ok"] = r.ratio_ok;
  j["support_ok"] = r.support_ok;
  j["flat_ok"] = r.flat_ok;
  j["nonempty_ok"] = r.nonempty_ok;
  j["require_flat"] = r.require_flat;
  j["indices"] = r.index_count;
  j["pairs_checked"] = r.pairs_checked;
  j["worst"] = r.worst ? to_json(*r.worst) : json(nullptr);
  j["worst_ratio"] = r.worst ? to_string(r.worst->ratio) : std::string("0/1");
  j["ratio_failure_count"] = r.ratio_failure_count;
  json fails = json::array();
  for (const auto& w : r.ratio_failures) fails.push_back(to_json(w));
  j["ratio_failures"] = fails;
  j["max_support_radius"] = to_string(r.max_support_radius);
  j["max_support_index"] = r.max_support_index ? json(*r.max_support_index) : json(nullptr);
  j["support_violations"] = r.support_violations;
  j["non_flat"] = r.non_flat;
  j["empty_chains"] = r.empty_chains;
  return j;
}

inline json to_json(const FlattenFamilyReport& r) {
  json j;
  j["worst_ratio_before"] = to_string(r.worst_ratio_before);
  j["worst_ratio_after"] = to_string(r.worst_ratio_after);
  j["worst_pair_before"] = r.worst_pair_before ? json{r.worst_pair_before->first, r.worst_pair_before->second} : json(nullptr);
  j["worst_pair_after"] = r.worst_pair_after ? json{r.worst_pair_after->first, r.worst_pair_after->second} : json(nullptr);
  j["max_steps"] = r.max_steps;
  j["max_bound"] = r.max_bound;
  j["new_S"] = to_string(r.new_S);
  j["pairs_checked"] = r.pairs_checked;
  j["pairwise_monotone"] = r.pairwise_monotone;
  json viol = json::array();
  for (auto [x, y] : r.monotonicity_violations) viol.push_back({x, y});
  j["monotonicity_violations"] = viol;
  json esc = json::array(), idx = json::array();
  for (const auto& e : r.escaped) {
    idx.push_back(e.index);
    esc.push_back({{"index", e.index}, {"sink", e.sink}, {"steps_done", e.steps_done}, {"bound", e.bound}});
  }
  j["escaped_indices"] = idx;
  j["escapes"] = esc;
  return j;
}

inline json to_json(const TailCover& c) {
  json tails = json::array();
  for (PointId x = 0; x < c.tails.size(); ++x) tails.push_back({x, c.tails[x]});
  return {{"r", to_string(c.r)}, {"K", c.K}, {"tails", tails}};
}

inline TailCover tails_from_json(const json& j) {
  TailCover c;
  c.r = rational_field(j, "r");
  c.K = get<std::uint64_t>(j, "K");
  std::map<PointId, std::vector<PointId>> m;
  for (const auto& e : get<json>(j, "tails")) m[e.at(0).get<PointId>()] = e.at(1).get<std::vector<PointId>>();
  std::size_t n = m.empty() ? 0 : m.rbegin()->first + std::size_t{1};
  c.tails.assign(n, {});
  for (auto& [x, t] : m) c.tails[x] = std::move(t);
  return c;
}

inline json to_json(const TailReport& r) {
  return {{"pass", r.pass},
          {"measured_K", r.measured_K},
          {"measured_r", to_string(r.measured_r)},
          {"busiest_point", r.busiest_point},
          {"bad_start", r.bad_start},
          {"repeated_points", r.repeated_points},
          {"long_steps", r.long_steps},
          {"overloaded_points", r.overloaded_points},
          {"unterminated", r.unterminated}};
}

inline json to_json(const BoxFamilyResult& r) {
  return {{"S", to_string(r.S)},
          {"J", r.J},
          {"J_isometry", r.J_isometry},
          {"J_spacing", r.J_spacing},
          {"pairs_checked", r.pairs_checked},
          {"equality_failures", r.equality_failures},
          {"equalities_hold", r.equalities_hold()},
          {"worst_ratio", to_string(r.worst_ratio)},
          {"worst_pair", r.worst_pair ? json{r.worst_pair->first, r.worst_pair->second} : json(nullptr)},
          {"catch_all_pairs", r.catch_all_pairs},
          {"catch_all_ok", r.catch_all_ok},
          {"family_S", to_string(r.family.params.S)}};
}

/// "0..9", "0,3,7" or "-2..2,5".
inline std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      auto v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
      throw InvalidInput("bad integer '" + s + "' in list '" + text + "'");
    }
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dots = item.find("..", 1);
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    auto lo = to_int(item.substr(0, dots)), hi = to_int(item.substr(dots + 2));
    if (hi < lo) throw InvalidInput("empty range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

}  // namespace coarse::io
