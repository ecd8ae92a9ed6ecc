#include "gdd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdd/cluster_pursuit.hpp"
#include "gdd/errors.hpp"
#include "gdd/gdd_engine.hpp"
#include "gdd/io.hpp"
#include "gdd/oracle.hpp"
#include "gdd/polytope_diagram.hpp"
#include "gdd/relaxation.hpp"

namespace gdd {

namespace {

struct SolveOptions {
  std::string model;
  std::string mode = "beliefs";
  std::string pursuit = "stealth";
  SolverParams params;
  std::size_t max_order = 6;
  std::string trace;
  std::string trace_format;
  std::string out;
};

struct Outcome {
  std::string algorithm;
  DualTrace trace;
  Assignment assignment;
  double dual = 0.0;
  double primal = 0.0;
  long sweeps = 0;
  int rounds = 0;
  std::string stop;
  bool truncated = false;
  std::vector<std::string> dropped;
};

void add_solver_options(CLI::App* app, SolveOptions& o)
{
  app->add_option("--model", o.model, "model file (.uai or .json)")->required()->check(
      CLI::ExistingFile);
  app->add_option("--mode", o.mode, "update scheme")
      ->check(CLI::IsMember({"beliefs", "messages"}))
      ->capture_default_str();
  app->add_option("--pursuit", o.pursuit, "cluster pursuit")
      ->check(CLI::IsMember({"none", "stealth"}))
      ->capture_default_str();
  app->add_option("--tg", o.params.inner_tolerance, "inner-loop dual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--ta", o.params.outer_tolerance, "duality-gap tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--k1", o.params.first_max_sweeps, "sweeps in the first inner loop")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--k2", o.params.later_max_sweeps, "sweeps in later inner loops")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--n", o.params.clusters_per_pursuit, "clusters added per pursuit round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--time-limit", o.params.time_limit, "seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--max-union-order", o.params.max_union_order, "largest pursued union")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--max-rounds", o.params.max_pursuit_rounds,
                  "pursuit rounds before stopping (negative: no cap)")
      ->capture_default_str();
  app->add_flag("!--no-fallback", o.params.dictionary_fallback,
               "do not fall back to the whole stealth dictionary when no pair disagrees");
  app->add_option("--max-order", o.max_order, "cluster order cap for ps")->capture_default_str();
  app->add_option("--trace", o.trace, "trace output path");
  app->add_option("--trace-format", o.trace_format, "csv or json (default: by extension)")
      ->check(CLI::IsMember({"csv", "json"}));
}

const std::vector<std::string>& algorithm_names()
{
  static const std::vector<std::string> names(relaxation_names().begin(),
                                              relaxation_names().end());
  return names;
}

Outcome solve_one(const FactorGraph& graph, const std::string& alg, const SolveOptions& o)
{
  const auto spec = relaxation_by_name(alg, graph, o.max_order);
  const Mode mode = o.mode == "messages" ? Mode::messages : Mode::beliefs;
  Outcome out;
  out.algorithm = alg;
  if (o.pursuit == "stealth") {
    auto r = run_with_pursuit(graph, spec, o.params, mode, alg);
    out.trace = std::move(r.trace);
    out.assignment = std::move(r.assignment);
    out.dual = r.dual;
    out.primal = r.primal;
    out.sweeps = r.sweeps;
    out.rounds = r.rounds;
    out.stop = to_string(r.stop);
    out.truncated = r.truncated;
    out.dropped = std::move(r.dropped);
  } else {
    auto r = run(graph, spec, o.params, mode, alg);
    out.trace = std::move(r.trace);
    out.assignment = std::move(r.assignment);
    out.dual = r.dual;
    out.primal = r.primal;
    out.sweeps = r.sweeps;
    out.stop = r.truncated ? "time limit" : r.converged ? "converged" : "sweep limit";
    out.truncated = r.truncated;
  }
  return out;
}

void report(const Outcome& r)
{
  for (const auto& u : r.dropped)
    std::cerr << "warning: " << r.algorithm << ": union " << u
              << " exceeds the order cap and was skipped\n";
  std::printf("%-6s dual %.10g  primal %.10g  gap %.3g  sweeps %ld  rounds %d  (%s)\n",
              r.algorithm.c_str(), r.dual, r.primal, r.dual - r.primal, r.sweeps, r.rounds,
              r.stop.c_str());
}

void write_trace(const DualTrace& trace, const SolveOptions& o)
{
  if (o.trace.empty())
    return;
  TraceFormat format = TraceFormat::csv;
  if (o.trace_format == "json" ||
      (o.trace_format.empty() && std::filesystem::path(o.trace).extension() == ".json"))
    format = TraceFormat::json;
  emit_trace(trace, std::filesystem::path(o.trace), format);
}

int do_solve(const SolveOptions& o, const std::string& alg)
{
  const auto graph = read_model(o.model);
  const auto r = solve_one(graph, alg, o);
  report(r);
  write_trace(r.trace, o);
  if (!o.out.empty()) {
    nlohmann::json j{{"algorithm", alg},
                     {"assignment", r.assignment.states},
                     {"energy", r.primal},
                     {"dual", r.dual},
                     {"stop", r.stop}};
    std::ofstream f(o.out);
    if (!f)
      throw Error("cannot write " + o.out);
    f << j.dump(1) << '\n';
  }
  return r.truncated ? exit_truncated : exit_ok;
}

int do_compare(const SolveOptions& o, const std::vector<std::string>& algs, bool sequential)
{
  const auto graph = read_model(o.model);
  std::vector<Outcome> results(algs.size());
  std::vector<std::string> errors(algs.size());
  const auto job = [&](std::size_t i) {
    try {
      results[i] = solve_one(graph, algs[i], o);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (sequential) {
    for (std::size_t i = 0; i < algs.size(); ++i)
      job(i);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < algs.size(); ++i)
      threads.emplace_back(job, i);
    for (auto& t : threads)
      t.join();
  }
  for (const auto& e : errors)
    if (!e.empty())
      throw Error(e);

  DualTrace merged;
  bool truncated = false;
  for (const auto& r : results) {
    report(r);
    merged.records.insert(merged.records.end(), r.trace.records.begin(), r.trace.records.end());
    truncated = truncated || r.truncated;
  }
  write_trace(merged, o);
  return truncated ? exit_truncated : exit_ok;
}

int do_generate(const std::string& grid, int states, std::uint64_t seed, const std::string& out)
{
  static const std::regex shape(R"((\d+)[xX](\d+))");
  std::smatch m;
  if (!std::regex_match(grid, m, shape)) {
    std::cerr << "error: --grid expects WxH, got '" << grid << "'\n";
    return exit_usage;
  }
  const int w = std::stoi(m[1]);
  const int h = std::stoi(m[2]);
  const auto graph = random_grid(w, h, states, seed);
  write_model(out, graph);
  std::printf("wrote %dx%d grid, %d states, %zu clusters to %s\n", w, h, states,
              graph.num_clusters(), out.c_str());
  return exit_ok;
}

int do_verify(const std::string& model, std::uint64_t cap, const SolverParams& params)
{
  const auto graph = read_model(model);
  bool ok = true;
  const auto line = [&](bool pass, const std::string& what) {
    std::printf("%s %s\n", pass ? "ok  " : "FAIL", what.c_str());
    ok = ok && pass;
  };

  std::optional<MapSolution> map;
  if (graph.state_space_size() <= cap) {
    map = brute_force_map(graph, cap);
    std::printf("brute-force MAP value %.12g\n", map->value);
  } else {
    std::printf("skip brute force: state space above %llu\n",
                static_cast<unsigned long long>(cap));
  }

  for (const auto& alg : algorithm_names()) {
    RelaxationSpec spec;
    try {
      spec = relaxation_by_name(alg, graph);
    } catch (const CapacityError& e) {
      std::printf("skip %s: %s\n", alg.c_str(), e.what());
      continue;
    }
    const auto r = run(graph, spec, params, Mode::beliefs, alg);
    bool monotone = true;
    for (std::size_t i = 1; i < r.trace.records.size(); ++i)
      monotone = monotone && r.trace.records[i].dual <= r.trace.records[i - 1].dual + 1e-9;
    line(monotone, alg + ": dual non-increasing");
    if (map) {
      bool weak = true;
      for (const auto& rec : r.trace.records)
        weak = weak && rec.dual >= map->value - 1e-9;
      line(weak, alg + ": dual bounds the MAP value");
      if (r.dual - r.primal <= params.outer_tolerance)
        line(std::abs(r.primal - map->value) <= 1e-9, alg + ": closed gap decodes the MAP");
    }
  }

  try {
    const auto anchors = graph.clusters();
    const auto cards = graph.cardinalities();
    const auto reference =
        constraint_system(diagram_from_relaxation(all_subsets_spec(graph), anchors), cards);
    for (const auto* alg : {"ps", "pi-s", "mi"}) {
      const auto d = diagram_from_relaxation(relaxation_by_name(alg, graph), anchors);
      line(affine_system_equal(reference, constraint_system(d, cards)),
           std::string(alg) + ": polytope equals the unreduced diagram's");
    }
    const auto dd = constraint_system(diagram_from_relaxation(dd_spec(graph), anchors), cards);
    const auto gm = constraint_system(diagram_from_relaxation(gmplp_spec(graph), anchors), cards);
    line(affine_system_implies(gm, dd), "dd: implied by gmplp");
  } catch (const CapacityError& e) {
    std::printf("skip diagram checks: %s\n", e.what());
  }
  return ok ? exit_ok : exit_verify_failed;
}

}

int cli_main(int argc, const char* const* argv)
{
  CLI::App app{"MAP inference by generalised dual decomposition"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  std::string alg = "mi";
  auto* solve = app.add_subcommand("solve", "solve one model with one relaxation");
  add_solver_options(solve, solve_opts);
  solve->add_option("--alg", alg, "relaxation")
      ->check(CLI::IsMember(algorithm_names()))
      ->capture_default_str();
  solve->add_option("--out", solve_opts.out, "assignment output (json)");

  SolveOptions compare_opts;
  std::vector<std::string> algs{"ps", "pi-s", "mi"};
  bool sequential = false;
  auto* compare = app.add_subcommand("compare", "run several relaxations, merge their traces");
  add_solver_options(compare, compare_opts);
  compare->add_option("--alg", algs, "relaxations (comma separated or repeated)")
      ->delimiter(',')
      ->check(CLI::IsMember(algorithm_names()))
      ->capture_default_str();
  compare->add_flag("--sequential", sequential, "run on one thread");

  std::string grid = "16x16";
  int states = 3;
  std::uint64_t seed = 0;
  std::string out;
  auto* generate = app.add_subcommand("generate", "write a random grid instance");
  generate->add_option("--grid", grid, "WxH")->capture_default_str();
  generate->add_option("--states", states, "states per variable")
      ->check(CLI::Range(2, 1 << 16))
      ->capture_default_str();
  generate->add_option("--seed", seed, "generator seed")->capture_default_str();
  generate->add_option("--out", out, "output path (.json or .uai)")->required();

  std::string verify_model;
  std::uint64_t cap = 10'000'000;
  SolverParams verify_params;
  auto* verify = app.add_subcommand("verify", "oracle checks on a small model");
  verify->add_option("--model", verify_model, "model file")->required()->check(CLI::ExistingFile);
  verify->add_option("--cap", cap, "largest state space for brute force")->capture_default_str();
  verify->add_option("--k1", verify_params.first_max_sweeps, "sweeps per solver run")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return exit_usage;
  }

  try {
    if (*solve)
      return do_solve(solve_opts, alg);
    if (*compare)
      return do_compare(compare_opts, algs, sequential);
    if (*generate)
      return do_generate(grid, states, seed, out);
    if (*verify)
      return do_verify(verify_model, cap, verify_params);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const InvalidModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  }
  return exit_usage;
}

}
