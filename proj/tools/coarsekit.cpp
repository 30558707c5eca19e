#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/amenability.hpp"
#include "coarse/box_space.hpp"
#include "coarse/coarse_map.hpp"
#include "coarse/flatten.hpp"
#include "coarse/io.hpp"
#include "coarse/pipeline.hpp"
#include "coarse/rips.hpp"
#include "coarse/space.hpp"
#include "coarse/tails.hpp"

namespace fs = std::filesystem;
using coarse::io::json;

namespace {

void emit(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    coarse::io::write_json_file(out, j);
}

coarse::WindowSpace load_space(const std::string& path) {
  return coarse::io::space_from_json(coarse::io::read_json_file(path));
}

// The space a family lives on: --space if given, else the family's own "space" path,
// read relative to the family file.
coarse::WindowSpace space_for_family(const std::string& explicit_space, const std::string& family_path,
                                     const std::string& space_ref) {
  if (!explicit_space.empty()) return load_space(explicit_space);
  if (space_ref.empty()) throw coarse::InvalidInput("family has no 'space' field; pass --space");
  fs::path p(space_ref);
  if (p.is_relative()) p = fs::path(family_path).parent_path() / p;
  return load_space(p.string());
}

std::vector<coarse::Rational> parse_radii(const std::string& text) {
  std::vector<coarse::Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(coarse::parse_rational(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

coarse::Rational rat(const std::string& s) {
  try {
    return coarse::parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw coarse::InvalidInput(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarsekit: exact constructions of naive Foelner-type families on finite metric windows"};
  app.require_subcommand(1);
  int exit_code = 0;

  std::string out, space_path, family_path, flow_path, rips_path, tails_path, spec, radii = "1,2,5";
  std::string r_text = "1", R_text = "1", eps_text, U_text, F_text, config_path, report_path, from_path, to_path,
              map_path;
  bool flat = false;
  unsigned jobs = 1;
  std::uint32_t root = 0;
  std::uint64_t M = 0, m = 4;
  std::size_t boxes = 5, max_set = 1024;
  std::optional<std::uint64_t> seed_opt;

  // space
  auto* space = app.add_subcommand("space", "generate or inspect window spaces");
  space->require_subcommand(1);
  auto* space_gen = space->add_subcommand("gen", "build a space from a generator spec");
  space_gen->add_option("--spec", spec, "generator JSON (file path or inline)")->required();
  space_gen->add_option("--out", out, "output file (default stdout)");
  space_gen->callback([&] { emit(coarse::io::to_json(coarse::io::generate(coarse::io::json_from_arg(spec))), out); });
  auto* space_info = space->add_subcommand("info", "size, frontier and growth profile");
  space_info->add_option("--space", space_path)->required();
  space_info->add_option("--radii", radii, "comma-separated radii");
  space_info->callback([&] {
    auto s = load_space(space_path);
    emit({{"points", s.size()},
          {"label", s.label()},
          {"frontier", s.frontier().size()},
          {"graph_metric", s.is_graph_metric()},
          {"growth", coarse::io::to_json(coarse::growth_profile(s, parse_radii(radii)))}},
         out);
  });

  // rips / flow
  auto* rips = app.add_subcommand("rips", "Rips graphs");
  rips->require_subcommand(1);
  auto* rips_build = rips->add_subcommand("build", "r-Rips 1-skeleton of a space");
  rips_build->add_option("--space", space_path)->required();
  rips_build->add_option("--r", r_text)->required();
  rips_build->add_option("--out", out);
  rips_build->callback([&] {
    auto g = coarse::build_rips(load_space(space_path), rat(r_text));
    auto rep = coarse::check_coarsely_unbounded(g);
    emit(coarse::io::to_json(g), out);
    if (!out.empty()) std::cout << coarse::io::to_json(rep).dump(2) << '\n';
    if (!rep.pass) exit_code = 1;
  });
  auto* flow = app.add_subcommand("flow", "flows toward the frontier");
  flow->require_subcommand(1);
  auto* flow_build = flow->add_subcommand("build", "BFS flow on a Rips graph");
  flow_build->add_option("--rips", rips_path)->required();
  flow_build->add_option("--out", out);
  flow_build->callback([&] {
    emit(coarse::io::to_json(coarse::build_flow(coarse::io::rips_from_json(coarse::io::read_json_file(rips_path)))),
         out);
  });

  // family
  auto* family = app.add_subcommand("family", "families of chains or sets");
  family->require_subcommand(1);
  auto* family_verify = family->add_subcommand("verify", "check ratio and support conditions");
  family_verify->add_option("--family", family_path)->required();
  family_verify->add_option("--space", space_path, "space file (default: the family's 'space' field)");
  family_verify->add_flag("--flat", flat, "also require every chain to be 0,1-valued");
  family_verify->add_option("--jobs", jobs);
  family_verify->add_option("--out", out);
  family_verify->callback([&] {
    auto j = coarse::io::read_json_file(family_path);
    coarse::IndexedFamily fam = j.contains("sets")
                                    ? coarse::family_from_multisets(coarse::io::multiset_family_from_json(j))
                                    : coarse::io::family_from_json(j);
    auto s = space_for_family(space_path, family_path, j.value("space", std::string()));
    auto rep = coarse::verify_family(s, fam, flat, jobs);
    emit(coarse::io::to_json(rep), out);
    if (!rep.pass) exit_code = 1;
  });

  // flatten
  auto* flatten = app.add_subcommand("flatten", "tower flattening");
  flatten->require_subcommand(1);
  std::string report_out;
  auto* flatten_run = flatten->add_subcommand("run", "flatten every chain of a family along a flow");
  flatten_run->add_option("--family", family_path)->required();
  flatten_run->add_option("--flow", flow_path)->required();
  flatten_run->add_option("--space", space_path);
  flatten_run->add_option("--out", out, "flattened family");
  flatten_run->add_option("--report", report_out, "report file (default stdout)");
  flatten_run->add_option("--jobs", jobs);
  flatten_run->callback([&] {
    auto j = coarse::io::read_json_file(family_path);
    auto fam = coarse::io::family_from_json(j);
    auto s = space_for_family(space_path, family_path, fam.space_ref);
    auto fl = coarse::io::flow_from_json(coarse::io::read_json_file(flow_path));
    try {
      auto [flat_fam, rep] = coarse::flatten_family(s, fam, fl, jobs);
      if (!out.empty()) coarse::io::write_json_file(out, coarse::io::to_json(flat_fam));
      emit(coarse::io::to_json(rep), report_out);
    } catch (const coarse::FamilyFlowEscaped& e) {
      json rep = coarse::io::to_json(e.partial_report());
      for (auto& x : rep["escapes"])
        x["suggested_margin"] = coarse::to_string(
            fl.r * coarse::Rational(x["bound"].get<std::int64_t>()) + fam.params.S);
      emit(rep, report_out);
      std::cerr << "FlowEscaped: " << e.what() << '\n';
      exit_code = 1;
    }
  });

  // tails
  auto* tails = app.add_subcommand("tails", "uniform covers by tails");
  tails->require_subcommand(1);
  auto* tails_build = tails->add_subcommand("build", "greedy tail cover of a tree window");
  tails_build->add_option("--space", space_path)->required();
  tails_build->add_option("--root", root);
  tails_build->add_option("--r", r_text);
  tails_build->add_option("--out", out);
  tails_build->callback([&] {
    emit(coarse::io::to_json(coarse::build_tree_tails(load_space(space_path), root, rat(r_text))), out);
  });
  auto* tails_verify = tails->add_subcommand("verify", "check a tail cover");
  tails_verify->add_option("--tails", tails_path)->required();
  tails_verify->add_option("--space", space_path)->required();
  tails_verify->add_option("--out", out);
  tails_verify->callback([&] {
    auto rep = coarse::verify_tail_cover(coarse::io::tails_from_json(coarse::io::read_json_file(tails_path)),
                                         load_space(space_path));
    emit(coarse::io::to_json(rep), out);
    if (!rep.pass) exit_code = 1;
  });
  auto* tails_transport = tails->add_subcommand("transport", "push a height-M family along the tails");
  tails_transport->add_option("--family", family_path, "multiset family")->required();
  tails_transport->add_option("--tails", tails_path)->required();
  tails_transport->add_option("--M", M, "height (default: the family's M)");
  tails_transport->add_option("--out", out);
  tails_transport->callback([&] {
    auto fam = coarse::io::multiset_family_from_json(coarse::io::read_json_file(family_path));
    if (M) fam.params.M = M;
    emit(coarse::io::to_json(
             coarse::tail_transport(fam, coarse::io::tails_from_json(coarse::io::read_json_file(tails_path)))),
         out);
  });

  // amen
  auto* amen = app.add_subcommand("amen", "boundaries and Foelner sets");
  amen->require_subcommand(1);
  auto* amen_boundary = amen->add_subcommand("boundary", "R-boundary of a set");
  amen_boundary->add_option("--space", space_path)->required();
  amen_boundary->add_option("--U", U_text, "point ids, e.g. 0..9 or 1,4,7")->required();
  amen_boundary->add_option("--R", R_text)->required();
  amen_boundary->add_option("--out", out);
  amen_boundary->callback([&] {
    auto s = load_space(space_path);
    std::vector<coarse::PointId> U;
    for (auto v : coarse::io::parse_int_list(U_text)) {
      if (v < 0) throw coarse::InvalidInput("point ids are nonnegative");
      U.push_back(static_cast<coarse::PointId>(v));
    }
    auto b = coarse::boundary(s, U, rat(R_text));
    emit({{"boundary", b}, {"size", b.size()}, {"set_size", U.size()}}, out);
  });
  auto* amen_search = amen->add_subcommand("search", "greedy search for a Foelner set");
  amen_search->add_option("--space", space_path)->required();
  amen_search->add_option("--R", R_text)->required();
  amen_search->add_option("--eps", eps_text)->required();
  amen_search->add_option("--max-size", max_set);
  amen_search->add_option("--out", out);
  amen_search->callback([&] {
    auto s = load_space(space_path);
    auto U = coarse::foelner_search(s, rat(R_text), rat(eps_text), {max_set});
    if (!U) {
      emit({{"found", false}}, out);
      exit_code = 1;
      return;
    }
    emit({{"found", true}, {"set", *U}, {"size", U->size()}, {"boundary", coarse::boundary(s, *U, rat(R_text)).size()}},
         out);
  });

  // coarse maps
  auto* cm = app.add_subcommand("coarse", "moving families along coarse maps");
  cm->require_subcommand(1);
  auto* cm_push = cm->add_subcommand("push", "transfer a naive family along a coarse map");
  cm_push->add_option("--family", family_path)->required();
  cm_push->add_option("--from", from_path, "source space")->required();
  cm_push->add_option("--to", to_path, "target space")->required();
  cm_push->add_option("--map", map_path, "JSON {\"map\": [f(0), f(1), ...]}")->required();
  cm_push->add_option("--out", out);
  cm_push->callback([&] {
    auto fam = coarse::io::family_from_json(coarse::io::read_json_file(family_path));
    auto X = load_space(from_path), Y = load_space(to_path);
    auto f = coarse::io::get<std::vector<coarse::PointId>>(coarse::io::json_from_arg(map_path), "map");
    auto res = coarse::transfer_family(fam, X, Y, f);
    emit({{"family", coarse::io::to_json(res.on_Y)},
          {"S_section", coarse::to_string(res.model.S)},
          {"M", res.model.M},
          {"Z", res.model.Z}},
         out);
  });
  auto* cm_project = cm->add_subcommand("project", "project a family on Z x {0..M-1} to Z");
  cm_project->add_option("--family", family_path)->required();
  cm_project->add_option("--M", M)->required();
  cm_project->add_option("--out", out);
  cm_project->callback([&] {
    auto fam = coarse::io::family_from_json(coarse::io::read_json_file(family_path));
    emit(coarse::io::to_json(coarse::project_family(fam, M)), out);
  });

  // box
  std::string spacing_text;
  auto* box = app.add_subcommand("box", "box spaces of Z");
  box->require_subcommand(1);
  auto* box_build = box->add_subcommand("build", "box space and its translate family");
  box_build->add_option("--m", m)->required();
  box_build->add_option("--boxes", boxes)->required();
  box_build->add_option("--F", F_text, "e.g. 0..9")->required();
  box_build->add_option("--R", R_text);
  box_build->add_option("--eps", eps_text)->required();
  box_build->add_option("--spacing", spacing_text, "comma-separated spacing per box");
  box_build->add_option("--out", out, "family file; the report goes to stdout");
  box_build->callback([&] {
    const auto R = rat(R_text), eps = rat(eps_text);
    auto spacing = spacing_text.empty() ? coarse::default_box_spacing(R, boxes) : coarse::io::parse_int_list(spacing_text);
    auto model = coarse::build_box_space(m, boxes, spacing);
    auto res = coarse::box_family(model, coarse::io::parse_int_list(F_text), R, eps);
    if (!out.empty()) coarse::io::write_json_file(out, coarse::io::to_json(res.family));
    std::cout << coarse::io::to_json(res).dump(2) << '\n';
    if (!res.equalities_hold() || !res.catch_all_ok || !res.worst_ratio.below(eps)) exit_code = 1;
  });

  // run / explain
  auto* run = app.add_subcommand("run", "execute a pipeline config");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out, std::string("output directory (default $") + coarse::pipeline::kOutEnv + ")");
  run->add_option("--seed", seed_opt, "overrides the config seed");
  run->add_option("--jobs", jobs);
  run->callback([&] {
    coarse::pipeline::RunOptions opts;
    if (!out.empty()) opts.out = out;
    opts.seed = seed_opt;
    opts.jobs = jobs;
    auto res = coarse::pipeline::run(coarse::io::read_json_file(config_path), opts);
    std::cout << coarse::pipeline::explain(res.report);
    if (!res.out_dir.empty()) std::cout << "report: " << (res.out_dir / "report.json").string() << '\n';
    exit_code = res.exit_code;
  });
  auto* explain = app.add_subcommand("explain", "summarize a report.json");
  explain->add_option("report", report_path)->required();
  explain->callback([&] {
    std::cout << coarse::pipeline::explain(coarse::io::read_json_file(report_path));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const coarse::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return coarse::pipeline::exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "InvalidInput: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "InvalidInput: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return exit_code;
}
