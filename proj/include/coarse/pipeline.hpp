#pragma once

// Stage runner: reads a JSON config, executes stages in order, writes each
// artifact plus report.json, and maps outcomes to exit codes.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "coarse/amenability.hpp"
#include "coarse/box_space.hpp"
#include "coarse/families.hpp"
#include "coarse/flatten.hpp"
#include "coarse/io.hpp"
#include "coarse/rips.hpp"
#include "coarse/space.hpp"
#include "coarse/tails.hpp"

namespace coarse::pipeline {

using io::json;

enum ExitCode : int { kPass = 0, kVerificationFailed = 1, kConfigError = 2, kInternalError = 3 };

inline constexpr const char* kOutEnv = "COARSEKIT_OUT";

/// Default output directory: $COARSEKIT_OUT, else "coarsekit-out".
inline std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "coarsekit-out";
}

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

struct RunResult {
  int exit_code = kPass;
  json report;
  std::filesystem::path out_dir;
};

/// Raised for malformed configs; names the offending stage or reference.
class SchemaError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Exit code for a library error kind.
inline int exit_code_for(const std::string& kind) {
  if (kind == "ContradictsClaim2") return kInternalError;
  if (kind == "FlowEscaped" || kind == "NotCoarselyUnbounded" || kind == "BranchingTooLow" || kind == "TailTooShort")
    return kVerificationFailed;
  return kConfigError;
}

namespace detail {

using Value = std::variant<WindowSpace, RipsGraph, FlowField, IndexedFamily, MultisetFamily, TailCover>;

inline const char* kind_name(const Value& v) {
  static constexpr const char* names[] = {"space", "rips", "flow", "family", "multiset family", "tails"};
  return names[v.index()];
}

struct Artifact {
  Value value;
  std::string space;  // name of the space stage this artifact lives on
  std::string file;
};

// Fields of each stage type that name earlier stages, and the artifact kind expected.
inline const std::map<std::string, std::vector<std::pair<std::string, std::size_t>>>& reference_fields() {
  static const std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> refs = {
      {"generate", {}},
      {"rips", {{"space", 0}}},
      {"flow", {{"rips", 1}}},
      {"family", {{"space", 0}, {"tails", 5}}},
      {"flatten", {{"family", 3}, {"flow", 2}}},
      {"tails", {{"space", 0}}},
      {"transport", {{"family", 4}, {"tails", 5}}},
      {"verify", {{"family", 3}}},
      {"box", {}},
      {"amen", {{"space", 0}}},
  };
  return refs;
}

class Runner {
 public:
  Runner(const json& config, RunOptions opts) : config_(config), opts_(std::move(opts)) {}

  RunResult run() {
    RunResult res;
    report_ = json::object();
    report_["stages"] = json::array();
    report_["checks"] = json::array();
    try {
      validate();
    } catch (const Error& e) {
      report_["error"] = {{"kind", "SchemaError"}, {"message", e.what()}};
      return finish(res, kConfigError);
    } catch (const json::exception& e) {
      report_["error"] = {{"kind", "SchemaError"}, {"message", e.what()}};
      return finish(res, kConfigError);
    }
    report_["seed"] = seed_;
    try {
      std::filesystem::create_directories(out_);
    } catch (const std::filesystem::filesystem_error& e) {
      report_["error"] = {{"kind", "InvalidInput"}, {"message", e.what()}};
      out_.clear();
      return finish(res, kConfigError);
    }
    const auto& stages = config_.at("stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& st = stages[i];
      const std::string name = st.at("name").get<std::string>();
      const std::string type = st.at("stage").get<std::string>();
      json summary;
      try {
        summary = run_stage(i, name, type, st);
      } catch (const FamilyFlowEscaped& e) {
        json esc = escape_details(st, e.records());
        add_check(name, "flatten_within_window", false, {{"escapes", esc}});
        report_["stages"].push_back({{"index", i}, {"name", name}, {"stage", type}, {"failed", true}});
        report_["error"] = error_json(i, name, e);
        report_["error"]["escapes"] = esc;
        return finish(res, kVerificationFailed);
      } catch (const Error& e) {
        report_["stages"].push_back({{"index", i}, {"name", name}, {"stage", type}, {"failed", true}});
        report_["error"] = error_json(i, name, e);
        if (e.kind() == "NotCoarselyUnbounded" || e.kind() == "BranchingTooLow" || e.kind() == "TailTooShort" ||
            e.kind() == "FlowEscaped")
          add_check(name, e.kind(), false, {{"message", e.what()}});
        return finish(res, exit_code_for(e.kind()));
      } catch (const json::exception& e) {
        report_["stages"].push_back({{"index", i}, {"name", name}, {"stage", type}, {"failed", true}});
        report_["error"] = {{"stage", name}, {"index", i}, {"kind", "InvalidInput"}, {"message", e.what()}};
        return finish(res, kConfigError);
      } catch (const std::exception& e) {
        report_["stages"].push_back({{"index", i}, {"name", name}, {"stage", type}, {"failed", true}});
        report_["error"] = {{"stage", name}, {"index", i}, {"kind", "Internal"}, {"message", e.what()}};
        return finish(res, kInternalError);
      }
      json entry = {{"index", i}, {"name", name}, {"stage", type}, {"summary", summary}};
      if (auto it = artifacts_.find(name); it != artifacts_.end()) entry["artifact"] = it->second.file;
      report_["stages"].push_back(entry);
    }
    bool all = true;
    for (const auto& c : report_["checks"]) all = all && c.at("pass").get<bool>();
    return finish(res, all ? kPass : kVerificationFailed);
  }

 private:
  const json& config_;
  RunOptions opts_;
  std::filesystem::path out_;
  std::uint64_t seed_ = 0;
  json report_;
  std::map<std::string, Artifact> artifacts_;

  RunResult& finish(RunResult& res, int code) {
    std::size_t passed = 0, total = report_["checks"].size();
    for (const auto& c : report_["checks"]) passed += c.at("pass").get<bool>();
    report_["checks_passed"] = passed;
    report_["checks_total"] = total;
    report_["pass"] = code == kPass;
    report_["exit_code"] = code;
    res.exit_code = code;
    res.report = report_;
    res.out_dir = out_;
    if (!out_.empty()) {
      try {
        io::write_json_file(out_ / "report.json", report_);
      } catch (const Error&) {
        if (code == kPass) res.exit_code = kConfigError;
      }
    }
    return res;
  }

  static json error_json(std::size_t i, const std::string& name, const Error& e) {
    return {{"stage", name}, {"index", i}, {"kind", e.kind()}, {"message", e.what()}};
  }

  void validate() {
    if (!config_.is_object()) throw SchemaError("config must be a JSON object");
    if (opts_.seed)
      seed_ = *opts_.seed;
    else if (config_.contains("seed"))
      seed_ = config_.at("seed").get<std::uint64_t>();
    if (opts_.out)
      out_ = *opts_.out;
    else if (config_.contains("out"))
      out_ = config_.at("out").get<std::string>();
    else
      out_ = default_out_dir();
    if (!config_.contains("stages") || !config_.at("stages").is_array() || config_.at("stages").empty())
      throw SchemaError("config needs a non-empty 'stages' array");
    std::map<std::string, std::set<std::size_t>> produced;  // stage name -> artifact kinds
    const auto& refs = reference_fields();
    std::size_t i = 0;
    for (const auto& st : config_.at("stages")) {
      const std::string where = "stage " + std::to_string(i);
      if (!st.is_object() || !st.contains("stage") || !st.at("stage").is_string())
        throw SchemaError(where + ": missing 'stage' type");
      const auto type = st.at("stage").get<std::string>();
      auto it = refs.find(type);
      if (it == refs.end()) throw SchemaError(where + ": unknown stage type '" + type + "'");
      if (!st.contains("name") || !st.at("name").is_string()) throw SchemaError(where + ": missing 'name'");
      const auto name = st.at("name").get<std::string>();
      if (produced.count(name)) throw SchemaError(where + ": duplicate stage name '" + name + "'");
      for (const auto& [field, kind] : it->second) {
        if (!st.contains(field)) {
          if (type == "family" && field == "tails") continue;
          throw SchemaError("stage '" + name + "' is missing the reference field '" + field + "'");
        }
        const auto ref = st.at(field).get<std::string>();
        auto p = produced.find(ref);
        if (p == produced.end())
          throw SchemaError("stage '" + name + "' references '" + ref + "' in field '" + field +
                            "', but no earlier stage has that name");
        bool ok = p->second.count(kind) || (type == "verify" && p->second.count(4));
        if (!ok) throw SchemaError("stage '" + name + "': '" + ref + "' does not produce a " + field);
      }
      std::set<std::size_t> kinds;
      if (type == "generate") kinds = {0};
      if (type == "rips") kinds = {1};
      if (type == "flow") kinds = {2};
      if (type == "family") {
        auto k = st.value("kind", std::string());
        kinds = {k == "ray" ? std::size_t{4} : std::size_t{3}};
      }
      if (type == "flatten" || type == "transport") kinds = {3};
      if (type == "tails") kinds = {5};
      if (type == "box") {
        kinds = {0};
        produced[name + "-family"] = {3};
      }
      produced[name] = kinds;
      ++i;
    }
  }

  template <typename T>
  const T& fetch(const json& st, const char* field, std::string* space = nullptr) {
    const auto& a = artifacts_.at(st.at(field).get<std::string>());
    if (space) *space = a.space;
    if (const T* v = std::get_if<T>(&a.value)) return *v;
    throw SchemaError(std::string("field '") + field + "' must reference a " +
                      kind_name(Value(std::in_place_type<T>)) + ", got a " + kind_name(a.value));
  }

  void store(std::size_t i, const std::string& name, Value v, const std::string& space, const json& body,
             const std::string& suffix = "") {
    std::ostringstream file;
    file << (i < 10 ? "0" : "") << i << '-' << name << suffix << ".json";
    io::write_json_file(out_ / file.str(), body);
    artifacts_[name + suffix] = Artifact{std::move(v), space, file.str()};
  }

  void add_check(const std::string& stage, const std::string& name, bool pass, json detail = json::object()) {
    report_["checks"].push_back({{"stage", stage}, {"check", name}, {"pass", pass}, {"detail", detail}});
  }

  std::uint64_t stage_seed(std::size_t i) const { return seed_ ^ (0x9E3779B97F4A7C15ULL * (i + 1)); }

  json escape_details(const json& st, const std::vector<EscapeRecord>& recs) {
    std::string fam_space;
    const auto& fam = fetch<IndexedFamily>(st, "family", &fam_space);
    const auto& flow = fetch<FlowField>(st, "flow");
    json out = json::array();
    for (const auto& e : recs) {
      Rational margin = flow.r * Rational(static_cast<std::int64_t>(e.bound)) + fam.params.S;
      out.push_back({{"index", e.index},
                     {"sink", e.sink},
                     {"steps_done", e.steps_done},
                     {"bound", e.bound},
                     {"r", to_string(flow.r)},
                     {"S", to_string(fam.params.S)},
                     {"suggested_margin", to_string(margin)}});
    }
    return out;
  }

  json run_stage(std::size_t i, const std::string& name, const std::string& type, const json& st) {
    if (type == "generate") return stage_generate(i, name, st);
    if (type == "rips") return stage_rips(i, name, st);
    if (type == "flow") return stage_flow(i, name, st);
    if (type == "family") return stage_family(i, name, st);
    if (type == "flatten") return stage_flatten(i, name, st);
    if (type == "tails") return stage_tails(i, name, st);
    if (type == "transport") return stage_transport(i, name, st);
    if (type == "verify") return stage_verify(name, st);
    if (type == "box") return stage_box(i, name, st);
    return stage_amen(st);
  }

  json stage_generate(std::size_t i, const std::string& name, const json& st) {
    WindowSpace s = io::generate(io::get<json>(st, "spec"));
    json summary = {{"points", s.size()}, {"frontier", s.frontier().size()}, {"label", s.label()}};
    if (st.contains("radii")) {
      std::vector<Rational> radii;
      for (const auto& r : st.at("radii")) radii.push_back(r.is_string() ? parse_rational(r.get<std::string>())
                                                                         : Rational(r.get<std::int64_t>()));
      summary["growth"] = io::to_json(growth_profile(s, radii));
    }
    json body = io::to_json(s);
    store(i, name, std::move(s), name, body);
    return summary;
  }

  json stage_rips(std::size_t i, const std::string& name, const json& st) {
    std::string sp;
    const auto& s = fetch<WindowSpace>(st, "space", &sp);
    RipsGraph g = build_rips(s, io::rational_field(st, "r"));
    auto rep = check_coarsely_unbounded(g);
    add_check(name, "coarsely_unbounded", rep.pass, io::to_json(rep));
    json summary = {{"edges", g.edge_count()}, {"max_degree", g.max_degree()}, {"components", g.components.size()}};
    json body = io::to_json(g);
    store(i, name, std::move(g), sp, body);
    return summary;
  }

  json stage_flow(std::size_t i, const std::string& name, const json& st) {
    std::string sp;
    const auto& g = fetch<RipsGraph>(st, "rips", &sp);
    FlowField f = build_flow(g);
    std::uint64_t depth = 0;
    for (PointId x = 0; x < f.size(); ++x) depth = std::max(depth, sigma_depth(f, x));
    json summary = {{"sinks", f.sinks}, {"max_depth", depth}};
    json body = io::to_json(f);
    store(i, name, std::move(f), sp, body);
    return summary;
  }

  std::vector<PointId> core_of(const WindowSpace& s, const json& st) {
    if (!st.contains("core")) return interior_core(s, Rational(0));
    const auto& c = st.at("core");
    if (c.is_array()) return c.get<std::vector<PointId>>();
    return interior_core(s, io::rational_field(c, "margin"));
  }

  json stage_family(std::size_t i, const std::string& name, const json& st) {
    std::string sp = st.at("space").get<std::string>();
    const auto& s = fetch<WindowSpace>(st, "space");
    const auto kind = io::get<std::string>(st, "kind");
    const Rational R = io::rational_field_or(st, "R", Rational(1));
    const Rational eps = io::rational_field(st, "epsilon");
    if (kind == "ray") {
      const auto& cover = fetch<TailCover>(st, "tails");
      Rng rng(stage_seed(i));
      PointId end = st.contains("end") ? st.at("end").get<PointId>()
                                       : (s.frontier().empty() ? throw SchemaError("ray family needs 'end'")
                                                               : s.frontier().back());
      auto fam = ray_multiset_family(s, st.value("root", PointId{0}), end, io::get<std::size_t>(st, "length"),
                                     io::get<std::uint64_t>(st, "M"), cover, R, eps, rng);
      fam.space_ref = artifacts_.at(sp).file;
      json summary = {{"indices", fam.sets.size()}, {"M", fam.params.M}, {"S", to_string(fam.params.S)}};
      json body = io::to_json(fam);
      store(i, name, std::move(fam), sp, body);
      return summary;
    }
    IndexedFamily fam;
    if (kind == "tent") {
      fam = tent_family(s, io::get<std::int64_t>(st, "W"), R, eps, core_of(s, st));
    } else if (kind == "ball") {
      fam = ball_family(s, io::rational_field(st, "radius"), R, eps, core_of(s, st));
    } else if (kind == "translates") {
      std::vector<Offset> F = io::get<std::vector<Offset>>(st, "F");
      std::optional<std::vector<PointId>> core;
      if (st.contains("core")) core = core_of(s, st);
      fam = group_foelner_family(s, F, R, eps, core);
    } else if (kind == "file") {
      fam = io::family_from_json(io::read_json_file(io::get<std::string>(st, "path")));
      for (const auto& [x, c] : fam.chains) {
        s.check(x);
        for (const auto& [z, w] : c) s.check(z);
      }
    } else {
      throw SchemaError("stage '" + name + "': unknown family kind '" + kind + "'");
    }
    fam.space_ref = artifacts_.at(sp).file;
    json summary = {{"indices", fam.chains.size()}, {"S", to_string(fam.params.S)}, {"flat", fam.is_flat()}};
    json body = io::to_json(fam);
    store(i, name, std::move(fam), sp, body);
    return summary;
  }

  json stage_flatten(std::size_t i, const std::string& name, const json& st) {
    std::string fam_space, flow_space;
    const auto& fam = fetch<IndexedFamily>(st, "family", &fam_space);
    const auto& flow = fetch<FlowField>(st, "flow", &flow_space);
    if (fam_space != flow_space)
      throw SchemaError("stage '" + name + "': family and flow live on different spaces");
    const auto& space = std::get<WindowSpace>(artifacts_.at(fam_space).value);
    auto [out, rep] = flatten_family(space, fam, flow, opts_.jobs);
    add_check(name, "flatten_monotone", rep.pairwise_monotone,
              {{"pairs_checked", rep.pairs_checked},
               {"violations", rep.monotonicity_violations.size()},
               {"worst_ratio_before", to_string(rep.worst_ratio_before)},
               {"worst_ratio_after", to_string(rep.worst_ratio_after)}});
    add_check(name, "flatten_within_bound", true, {{"max_steps", rep.max_steps}, {"max_bound", rep.max_bound}});
    json summary = io::to_json(rep);
    json body = io::to_json(out);
    store(i, name, std::move(out), fam_space, body);
    return summary;
  }

  json stage_tails(std::size_t i, const std::string& name, const json& st) {
    std::string sp;
    const auto& s = fetch<WindowSpace>(st, "space", &sp);
    TailCover cover = build_tree_tails(s, st.value("root", PointId{0}), io::rational_field_or(st, "r", Rational(1)));
    auto rep = verify_tail_cover(cover, s);
    add_check(name, "tail_cover", rep.pass, io::to_json(rep));
    json summary = {{"K", cover.K}, {"measured_K", rep.measured_K}, {"measured_r", to_string(rep.measured_r)}};
    json body = io::to_json(cover);
    store(i, name, std::move(cover), sp, body);
    return summary;
  }

  json stage_transport(std::size_t i, const std::string& name, const json& st) {
    std::string fam_space, tail_space;
    const auto& fam = fetch<MultisetFamily>(st, "family", &fam_space);
    const auto& cover = fetch<TailCover>(st, "tails", &tail_space);
    if (fam_space != tail_space) throw SchemaError("stage '" + name + "': family and tails live on different spaces");
    const auto& space = std::get<WindowSpace>(artifacts_.at(fam_space).value);
    IndexedFamily out = tail_transport(fam, cover);
    std::size_t overlap_bad = 0, radius_bad = 0;
    const Rational bound = fam.params.S + cover.r * Rational(static_cast<std::int64_t>(fam.params.M));
    for (const auto& [x, cells] : fam.sets) {
      const auto& img = out.chains.at(x);
      if (cells.size() > cover.K * img.support_size()) ++overlap_bad;
      for (const auto& [z, w] : img)
        if (space.dist(x, z) > bound) {
          ++radius_bad;
          break;
        }
    }
    add_check(name, "transport_overlap", overlap_bad == 0, {{"violations", overlap_bad}});
    add_check(name, "transport_radius", radius_bad == 0, {{"violations", radius_bad}, {"bound", to_string(bound)}});
    json summary = {{"indices", out.chains.size()}, {"S", to_string(out.params.S)},
                    {"epsilon", to_string(out.params.epsilon)}};
    json body = io::to_json(out);
    store(i, name, std::move(out), fam_space, body);
    return summary;
  }

  json stage_verify(const std::string& name, const json& st) {
    const auto& a = artifacts_.at(st.at("family").get<std::string>());
    const auto& space = std::get<WindowSpace>(artifacts_.at(a.space).value);
    IndexedFamily fam;
    if (const auto* m = std::get_if<MultisetFamily>(&a.value))
      fam = family_from_multisets(*m);
    else
      fam = std::get<IndexedFamily>(a.value);
    const bool flat = st.value("flat", false);
    auto rep = verify_family(space, fam, flat, opts_.jobs);
    json detail = io::to_json(rep);
    add_check(name, "ratio", rep.ratio_ok,
              {{"pairs_checked", rep.pairs_checked},
               {"epsilon", to_string(fam.params.epsilon)},
               {"R", to_string(fam.params.R)},
               {"worst", detail["worst"]},
               {"failures", detail["ratio_failures"]},
               {"failure_count", rep.ratio_failure_count}});
    add_check(name, "support", rep.support_ok,
              {{"S", to_string(fam.params.S)},
               {"max_support_radius", detail["max_support_radius"]},
               {"violations", rep.support_violations}});
    add_check(name, "nonempty", rep.nonempty_ok, {{"empty", rep.empty_chains}});
    if (flat) add_check(name, "flat", rep.flat_ok, {{"non_flat", rep.non_flat}});
    return detail;
  }

  json stage_box(std::size_t i, const std::string& name, const json& st) {
    const auto m = io::get<std::uint64_t>(st, "m");
    const auto boxes = io::get<std::size_t>(st, "boxes");
    const Rational R = io::rational_field_or(st, "R", Rational(1));
    const Rational eps = io::rational_field(st, "epsilon");
    std::vector<std::int64_t> F = st.at("F").is_string() ? io::parse_int_list(st.at("F").get<std::string>())
                                                         : st.at("F").get<std::vector<std::int64_t>>();
    auto spacing = st.contains("spacing") ? st.at("spacing").get<std::vector<std::int64_t>>()
                                          : default_box_spacing(R, boxes);
    auto model = build_box_space(m, boxes, spacing);
    auto res = box_family(model, F, R, eps);
    const bool ratio_ok = res.worst_ratio.below(eps);
    add_check(name, "box_equalities", res.equalities_hold(),
              {{"pairs_checked", res.pairs_checked}, {"failures", res.equality_failures}});
    add_check(name, "box_catch_all", res.catch_all_ok, {{"pairs", res.catch_all_pairs}});
    add_check(name, "box_ratio", ratio_ok,
              {{"worst_ratio", to_string(res.worst_ratio)},
               {"epsilon", to_string(eps)},
               {"worst_pair", res.worst_pair ? json{res.worst_pair->first, res.worst_pair->second} : json(nullptr)}});
    json summary = io::to_json(res);
    const std::string fam_name = name + "-family";
    res.family.space_ref = "";
    json space_body = io::to_json(model.space);
    store(i, name, model.space, name, space_body);
    res.family.space_ref = artifacts_.at(name).file;
    json fam_body = io::to_json(res.family);
    store(i, name, std::move(res.family), name, fam_body, "-family");
    return summary;
  }

  json stage_amen(const json& st) {
    const auto& s = fetch<WindowSpace>(st, "space");
    FoelnerSearchOptions o;
    o.max_set_size = st.value("max_set_size", o.max_set_size);
    const Rational R = io::rational_field(st, "R");
    auto U = foelner_search(s, R, io::rational_field(st, "epsilon"), o);
    if (!U) return {{"found", false}};
    return {{"found", true}, {"size", U->size()}, {"boundary", boundary(s, *U, R).size()}, {"set", *U}};
  }
};

}  // namespace detail

/// Runs a config. Never throws for config or stage errors; they are recorded
/// in the report and reflected in the exit code.
inline RunResult run(const json& config, RunOptions opts = {}) {
  return detail::Runner(config, std::move(opts)).run();
}

namespace detail {

inline const char* condition_for(const std::string& check) {
  static const std::map<std::string, const char*> names = {
      {"coarsely_unbounded", "every Rips component reaches the frontier"},
      {"flatten_monotone", "flattening never increases an in-range ratio"},
      {"flatten_within_bound", "each chain is flat within ||a||*||t(a)|| shift steps"},
      {"flatten_within_window", "tower mass stays off the sinks while flattening"},
      {"tail_cover", "uniform cover by tails (step <= r, overlap <= K, proper)"},
      {"transport_overlap", "|Z| <= K |T(Z)| for every transported set"},
      {"transport_radius", "transported points lie within M r + S of their index"},
      {"ratio", "ratio condition |A_x (+) A_y| < eps |A_x n A_y| for d(x, y) <= R"},
      {"support", "support condition A_x within B(x, S)"},
      {"nonempty", "every A_x is non-empty"},
      {"flat", "naive condition: every A_x is a set"},
      {"box_equalities", "box translates match |gF (+) hF| and |gF n hF| past J"},
      {"box_catch_all", "boxes up to J use the catch-all set"},
      {"box_ratio", "box worst ratio below eps"},
      {"NotCoarselyUnbounded", "every Rips component reaches the frontier"},
      {"BranchingTooLow", "tree branching allows a tail cover"},
      {"TailTooShort", "tails are long enough for the family height"},
      {"FlowEscaped", "tower mass stays off the sinks while flattening"},
  };
  auto it = names.find(check);
  return it == names.end() ? "unnamed check" : it->second;
}

}  // namespace detail

/// Human-readable summary of a report.
inline std::string explain(const json& report) {
  if (!report.is_object() || !report.contains("checks") || !report.at("checks").is_array())
    throw InvalidInput("malformed report: no 'checks' array");
  std::ostringstream out;
  const auto& checks = report.at("checks");
  std::size_t failed = 0;
  for (const auto& c : checks) failed += !c.at("pass").get<bool>();
  if (report.contains("error")) {
    const auto& e = report.at("error");
    out << "stage " << e.value("stage", std::string("?")) << " stopped with " << e.value("kind", std::string("?"))
        << ": " << e.value("message", std::string()) << '\n';
    if (e.contains("escapes")) {
      for (const auto& x : e.at("escapes"))
        out << "  index " << x.at("index").get<PointId>() << " reached sink " << x.at("sink").get<PointId>()
            << " after " << x.at("steps_done").get<std::uint64_t>() << " steps; needs a window margin of at least "
            << x.at("suggested_margin").get<std::string>() << " (r * bound + S = " << x.at("r").get<std::string>()
            << " * " << x.at("bound").get<std::uint64_t>() << " + " << x.at("S").get<std::string>() << ")\n";
    }
  }
  if (failed == 0 && !report.contains("error")) {
    out << "all " << checks.size() << " checks pass\n";
  } else {
    out << failed << " of " << checks.size() << " checks fail\n";
  }
  for (const auto& c : checks) {
    const auto name = c.at("check").get<std::string>();
    const bool pass = c.at("pass").get<bool>();
    out << (pass ? "  ok    " : "  FAIL  ") << c.at("stage").get<std::string>() << '/' << name << ": "
        << detail::condition_for(name) << '\n';
    const auto& d = c.value("detail", json::object());
    if (name == "ratio" && d.contains("worst") && !d.at("worst").is_null()) {
      const auto& w = d.at("worst");
      out << "        worst pair (" << w.at("x") << ", " << w.at("y") << "), d = " << w.at("distance").get<std::string>()
          << ", ratio " << w.at("ratio").get<std::string>() << " vs eps " << d.at("epsilon").get<std::string>() << '\n';
    }
    if (!pass && name == "ratio" && d.contains("failures")) {
      for (const auto& w : d.at("failures"))
        out << "        pair (" << w.at("x") << ", " << w.at("y") << "), d = " << w.at("distance").get<std::string>()
            << ", ratio " << w.at("ratio").get<std::string>() << '\n';
    }
    if (name == "box_ratio")
      out << "        worst ratio " << d.at("worst_ratio").get<std::string>() << " vs eps "
          << d.at("epsilon").get<std::string>() << '\n';
    if (name == "flatten_monotone")
      out << "        worst ratio " << d.at("worst_ratio_before").get<std::string>() << " before, "
          << d.at("worst_ratio_after").get<std::string>() << " after\n";
    if (!pass && name == "support")
      out << "        max support radius " << d.at("max_support_radius").get<std::string>() << " vs S "
          << d.at("S").get<std::string>() << '\n';
  }
  return out.str();
}

}  // namespace coarse::pipeline
