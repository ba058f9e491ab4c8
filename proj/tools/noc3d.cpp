// noc3d: command-line front end for the 3D NoC design-space explorer.
//
// Exit status: 0 success, 2 configuration error (message names the field),
// 1 any other failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "noc3d/experiments.hpp"

namespace fs = std::filesystem;
using namespace noc3d;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<int> case_id;
  std::optional<std::string> algo;
  std::optional<std::string> out;
  unsigned threads = hardware_threads();
  std::string design;
  std::string archive;
  std::string profile;
};

ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config", "a config file is required");
  if (!fs::is_regular_file(o.config)) throw ConfigError("--config", "no such file '" + o.config + "'");
  ExperimentConfig cfg = load_experiment(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.budget) {
    if (*o.budget == 0) throw ConfigError("budget", "must be > 0");
    cfg.budget = *o.budget;
  }
  if (o.case_id) {
    (void)ObjectiveSet::for_case(*o.case_id);
    cfg.case_id = *o.case_id;
  }
  if (o.algo) cfg.algorithm = parse_algorithm(*o.algo, "algo");
  if (o.out) cfg.output = *o.out;
  if (o.threads == 0) throw ConfigError("threads", "must be >= 1");
  return cfg;
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (!out || *out == "-") {
    std::cout << text;
    return;
  }
  const fs::path p(*out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_text_file(p.string(), text);
}

// Writes profile_<i>.csv per traffic source. --seed reseeds synthetic
// sources as seed + i.
void gen_traffic(const Options& o) {
  ExperimentConfig cfg = load(o);
  if (o.seed) {
    std::uint64_t i = 0;
    for (auto& src : cfg.traffic) {
      if (src.synthetic) src.synthetic->seed = *o.seed + i;
      ++i;
    }
  }
  const auto profiles = load_profiles(cfg);
  const fs::path dir = o.out.value_or(cfg.output);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    store_profile(profiles[i], (dir / ("profile_" + std::to_string(i) + ".csv")).string());
  }
  std::cerr << "wrote " << profiles.size() << " profile(s) to " << dir.string() << "\n";
}

// Canonical role-ordered mesh, or a seeded random placement with --seed.
void mesh(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const Design d = o.seed ? build_mesh(cfg.system, *o.seed) : build_mesh(cfg.system);
  emit(o.out, dump(to_json(d)));
}

Design read_design(const std::string& path) {
  const Json j = read_json_file(path);
  // Accept a bare design or any object carrying one under "design".
  const Json& body = j.is_object() && j.contains("design") ? j.at("design") : j;
  try {
    return design_from_json(body, "design");
  } catch (const ConfigError& e) {
    throw e.nested_in(path);
  }
}

void evaluate_cmd(const Options& o) {
  const ExperimentConfig cfg = load(o);
  if (o.design.empty()) throw ConfigError("--design", "a design file is required");
  const Design d = read_design(o.design);
  const auto problems = validate(d, cfg.system);
  if (!problems.empty()) throw ConfigError("design", problems.front().detail);
  TrafficProfile traffic = o.profile.empty() ? effective_profile(load_profiles(cfg)) : load_profile(o.profile);
  if (traffic.cores() != cfg.system.core_count()) {
    throw ConfigError("profile", "has " + std::to_string(traffic.cores()) + " cores, system has " +
                                     std::to_string(cfg.system.core_count()));
  }
  const EvalContext ctx = make_eval_context(cfg, std::move(traffic));
  emit(o.out, dump(to_json(evaluate(d, ctx, ObjectiveSet::for_case(cfg.case_id)))));
}

void optimize(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const auto summary = run_case(cfg, o.threads);
  std::cout << dump(summary_json(summary, cfg.budget));
}

void compare_cmd(const Options& o) {
  const ExperimentConfig cfg = load(o);
  Json all = Json::array();
  for (const auto& s : compare(cfg, o.threads)) all.push_back(summary_json(s, cfg.budget));
  std::cout << dump(all);
}

void loo(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const auto report = leave_one_out(load_profiles(cfg), cfg, o.threads);
  const std::string text = dump(to_json(report));
  if (!cfg.output.empty()) {
    fs::create_directories(cfg.output);
    write_text_file((fs::path(cfg.output) / "degradation.json").string(), text);
  }
  std::cout << text;
}

// Layer histogram of one design, or of every member of an archive.
void report(const Options& o) {
  std::vector<std::pair<std::string, Design>> designs;
  if (!o.design.empty()) {
    designs.emplace_back("design", read_design(o.design));
  } else if (!o.archive.empty()) {
    const auto archive = archive_from_json(read_json_file(o.archive), o.archive);
    for (std::size_t i = 0; i < archive.size(); ++i) {
      designs.emplace_back("member_" + std::to_string(i), archive.entries()[i].payload);
    }
  } else {
    throw ConfigError("--design", "give --design or --archive");
  }
  emit(o.out, format_layers_csv(designs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D heterogeneous NoC design-space exploration"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("noc3d ") + kToolVersion + " (schema " + std::string(kSchemaVersion) + ")");

  Options o;
  app.add_option("--config", o.config, "experiment config (JSON)");
  app.add_option("--seed", o.seed, "override the config's seed list with one seed");
  app.add_option("--budget", o.budget, "objective evaluations per run");
  app.add_option("--case", o.case_id, "objective case 1-5");
  app.add_option("--algo", o.algo, "moo-stage | random-restart | mosa");
  app.add_option("--out", o.out, "output directory (or file for mesh/evaluate/report)");
  app.add_option("--threads", o.threads, "worker threads (results do not depend on it)");

  auto* gen = app.add_subcommand("gen-traffic", "write the configured traffic profiles as CSV");
  auto* mesh_cmd = app.add_subcommand("mesh", "write the 3D mesh baseline design");
  auto* eval = app.add_subcommand("evaluate", "print the objective vector of a design");
  eval->add_option("--design", o.design, "design JSON")->required();
  eval->add_option("--profile", o.profile, "traffic CSV (default: the config's traffic)");
  auto* opt = app.add_subcommand("optimize", "run the configured search for every seed");
  auto* cmp = app.add_subcommand("compare", "run every algorithm on equal budgets and seeds");
  auto* loo_cmd = app.add_subcommand("loo", "leave-one-out application-agnostic study");
  auto* rep = app.add_subcommand("report", "per-layer tile and link counts as CSV");
  auto* rep_src = rep->add_option_group("source");
  rep_src->add_option("--design", o.design, "design JSON");
  rep_src->add_option("--archive", o.archive, "archive JSON");
  rep_src->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) gen_traffic(o);
    else if (mesh_cmd->parsed()) mesh(o);
    else if (eval->parsed()) evaluate_cmd(o);
    else if (opt->parsed()) optimize(o);
    else if (cmp->parsed()) compare_cmd(o);
    else if (loo_cmd->parsed()) loo(o);
    else if (rep->parsed()) report(o);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
