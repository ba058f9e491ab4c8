#pragma once

// Experiment harness: configuration, replicated optimization runs with
// on-disk artifacts, per-layer structure reports, algorithm comparison, and
// the leave-one-out application-agnostic study.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/io.hpp"
#include "noc3d/objectives.hpp"
#include "noc3d/pareto.hpp"
#include "noc3d/search.hpp"
#include "noc3d/topology.hpp"
#include "noc3d/traffic.hpp"

namespace noc3d {

enum class Algorithm { MooStage, RandomRestart, Mosa };

inline constexpr std::array<Algorithm, 3> kAlgorithms{Algorithm::MooStage, Algorithm::RandomRestart, Algorithm::Mosa};

inline std::string_view algorithm_key(Algorithm a) {
  switch (a) {
    case Algorithm::MooStage: return "moo-stage";
    case Algorithm::RandomRestart: return "random-restart";
    case Algorithm::Mosa: return "mosa";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view key, const std::string& field = "algorithm") {
  for (Algorithm a : kAlgorithms) {
    if (algorithm_key(a) == key) return a;
  }
  throw ConfigError(field, "unknown algorithm '" + std::string(key) + "'; valid: moo-stage, random-restart, mosa");
}

// One traffic input: a synthetic spec or a CSV path (relative paths resolve
// against the config file's directory).
struct TrafficSource {
  std::optional<SyntheticSpec> synthetic;
  std::string csv;
};

struct SearchKnobs {
  std::uint64_t neighbor_samples = 256;
  double min_gain = 1e-3;
  bool full_neighborhood = false;
  bool fixed_placement = false;
  int iter_max = 100;
  std::uint64_t meta_neighbor_samples = 32;
  int meta_max_steps = 10;
  int restart_link_moves = -1;
  bool stop_on_convergence = true;
};

struct ExperimentConfig {
  SystemConfig system;
  int case_id = 1;
  std::vector<TrafficSource> traffic{TrafficSource{SyntheticSpec{}, {}}};
  Algorithm algorithm = Algorithm::MooStage;
  std::uint64_t budget = 20000;
  std::vector<std::uint64_t> seeds{1};
  std::string output = "out";
  SearchKnobs search;
  ForestParams forest;
  std::optional<AnnealingSchedule> annealing;  // absent: defaults
  bool cooling_fits_budget = true;              // derive cooling_rate from budget and moves_per_temp
  PowerModel power;
  std::optional<ThermalModel> thermal;  // absent: uniform defaults for Z layers
  EnergyModel energy;
  std::string base_dir;

  void validate() const {
    system.validate();
    (void)ObjectiveSet::for_case(case_id);
    if (traffic.empty()) throw ConfigError("traffic", "needs at least one traffic source");
    if (budget == 0) throw ConfigError("budget", "must be > 0");
    if (seeds.empty()) throw ConfigError("seeds", "needs at least one seed");
    forest.validate();
    if (annealing) annealing->validate();
  }
};

inline ExperimentConfig experiment_from_json(const Json& j, const std::string& base_dir = {}) {
  using namespace json_detail;
  require_object(j, "");
  allow_keys(j, "",
             {"system", "case", "traffic", "algorithm", "budget", "seeds", "output", "search", "forest", "annealing",
              "power", "thermal", "energy"});
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  cfg.system = system_from_json(member(j, "system", ""), "system");
  read(j, "case", "", cfg.case_id);
  (void)ObjectiveSet::for_case(cfg.case_id);

  if (auto it = j.find("traffic"); it != j.end()) {
    require_array(*it, "traffic");
    cfg.traffic.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto where = index("traffic", i);
      const auto& item = (*it)[i];
      require_object(item, where);
      allow_keys(item, where, {"synthetic", "csv"});
      TrafficSource src;
      if (auto s = item.find("synthetic"); s != item.end()) src.synthetic = synthetic_from_json(*s, join(where, "synthetic"));
      if (auto c = item.find("csv"); c != item.end()) src.csv = as_string(*c, join(where, "csv"));
      if (src.synthetic.has_value() == !src.csv.empty()) {
        throw ConfigError(where, "give exactly one of 'synthetic' or 'csv'");
      }
      cfg.traffic.push_back(std::move(src));
    }
  }
  if (auto it = j.find("algorithm"); it != j.end()) cfg.algorithm = parse_algorithm(as_string(*it, "algorithm"));
  read(j, "budget", "", cfg.budget);
  if (auto it = j.find("seeds"); it != j.end()) {
    require_array(*it, "seeds");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < it->size(); ++i) cfg.seeds.push_back(as_unsigned((*it)[i], index("seeds", i)));
  }
  read(j, "output", "", cfg.output);
  if (auto it = j.find("search"); it != j.end()) {
    require_object(*it, "search");
    allow_keys(*it, "search",
               {"neighbor_samples", "min_gain", "full_neighborhood", "fixed_placement", "iter_max", "meta_neighbor_samples",
                "meta_max_steps", "restart_link_moves", "stop_on_convergence"});
    auto& s = cfg.search;
    read(*it, "neighbor_samples", "search", s.neighbor_samples);
    read(*it, "min_gain", "search", s.min_gain);
    read(*it, "full_neighborhood", "search", s.full_neighborhood);
    read(*it, "fixed_placement", "search", s.fixed_placement);
    read(*it, "iter_max", "search", s.iter_max);
    read(*it, "meta_neighbor_samples", "search", s.meta_neighbor_samples);
    read(*it, "meta_max_steps", "search", s.meta_max_steps);
    read(*it, "restart_link_moves", "search", s.restart_link_moves);
    read(*it, "stop_on_convergence", "search", s.stop_on_convergence);
    if (s.neighbor_samples == 0) throw ConfigError("search.neighbor_samples", "must be >= 1");
    if (!(s.min_gain >= 0.0) || !std::isfinite(s.min_gain)) throw ConfigError("search.min_gain", "must be finite and >= 0");
    if (s.meta_neighbor_samples == 0) throw ConfigError("search.meta_neighbor_samples", "must be >= 1");
    if (s.iter_max < 1) throw ConfigError("search.iter_max", "must be >= 1");
    if (s.meta_max_steps < 0) throw ConfigError("search.meta_max_steps", "must be >= 0");
  }
  if (auto it = j.find("forest"); it != j.end()) cfg.forest = forest_from_json(*it, "forest");
  if (auto it = j.find("annealing"); it != j.end()) {
    require_object(*it, "annealing");
    allow_keys(*it, "annealing", {"t_initial", "t_final", "cooling_rate", "moves_per_temp"});
    AnnealingSchedule s;
    read(*it, "t_initial", "annealing", s.t_initial);
    read(*it, "t_final", "annealing", s.t_final);
    read(*it, "moves_per_temp", "annealing", s.moves_per_temp);
    read(*it, "cooling_rate", "annealing", s.cooling_rate);
    cfg.cooling_fits_budget = !it->contains("cooling_rate");
    s.validate();
    cfg.annealing = s;
  }
  EvalContext constants = EvalContext::with_defaults(cfg.system, TrafficProfile::zeros(cfg.system.core_count()));
  read_constants(j, constants);
  cfg.power = constants.power;
  cfg.energy = constants.energy;
  if (j.contains("thermal")) cfg.thermal = constants.thermal;
  constants.validate();
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_experiment(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path().string();
  return experiment_from_json(read_json_file(path), base);
}

inline Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["system"] = to_json(cfg.system);
  j["case"] = cfg.case_id;
  Json traffic = Json::array();
  for (const auto& t : cfg.traffic) {
    if (t.synthetic) traffic.push_back({{"synthetic", to_json(*t.synthetic)}});
    else traffic.push_back({{"csv", t.csv}});
  }
  j["traffic"] = std::move(traffic);
  j["algorithm"] = algorithm_key(cfg.algorithm);
  j["budget"] = cfg.budget;
  j["seeds"] = cfg.seeds;
  j["output"] = cfg.output;
  const auto& s = cfg.search;
  j["search"] = {{"neighbor_samples", s.neighbor_samples},
                 {"min_gain", s.min_gain},
                 {"full_neighborhood", s.full_neighborhood},
                 {"fixed_placement", s.fixed_placement},
                 {"iter_max", s.iter_max},
                 {"meta_neighbor_samples", s.meta_neighbor_samples},
                 {"meta_max_steps", s.meta_max_steps},
                 {"restart_link_moves", s.restart_link_moves},
                 {"stop_on_convergence", s.stop_on_convergence}};
  j["forest"] = to_json(cfg.forest);
  if (cfg.annealing) {
    j["annealing"] = to_json(*cfg.annealing);
    if (cfg.cooling_fits_budget) j["annealing"].erase("cooling_rate");
  }
  EvalContext constants{cfg.system, TrafficProfile::zeros(cfg.system.core_count()), cfg.power,
                        cfg.thermal.value_or(ThermalModel::uniform(cfg.system.dims.z)), cfg.energy};
  const Json model_json = to_json(constants);
  for (auto& [key, value] : model_json.items()) j[key] = value;
  return j;
}

// ---------------------------------------------------------------------------
// Context assembly

inline std::string resolve_path(const ExperimentConfig& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || cfg.base_dir.empty()) return path;
  return (std::filesystem::path(cfg.base_dir) / p).string();
}

inline std::vector<TrafficProfile> load_profiles(const ExperimentConfig& cfg) {
  std::vector<TrafficProfile> out;
  for (const auto& src : cfg.traffic) {
    if (src.synthetic) {
      out.push_back(generate_synthetic(cfg.system, *src.synthetic));
    } else {
      auto profile = load_profile(resolve_path(cfg, src.csv));
      if (profile.cores() != cfg.system.core_count()) {
        throw ConfigError("traffic", "profile '" + src.csv + "' has " + std::to_string(profile.cores()) +
                                         " cores, system has " + std::to_string(cfg.system.core_count()));
      }
      out.push_back(std::move(profile));
    }
  }
  return out;
}

// The traffic an optimization run targets: the single profile, or the AVG
// aggregate of several.
inline TrafficProfile effective_profile(const std::vector<TrafficProfile>& profiles) {
  if (profiles.size() == 1) return profiles.front();
  return aggregate(profiles);
}

inline EvalContext make_eval_context(const ExperimentConfig& cfg, TrafficProfile traffic) {
  EvalContext ctx{cfg.system, std::move(traffic), cfg.power,
                  cfg.thermal.value_or(ThermalModel::uniform(cfg.system.dims.z)), cfg.energy};
  ctx.validate();
  return ctx;
}

inline SearchContext make_search_context(const ExperimentConfig& cfg, EvalContext eval, std::uint64_t seed,
                                         unsigned threads) {
  SearchContext ctx;
  ctx.eval = std::move(eval);
  ctx.objectives = ObjectiveSet::for_case(cfg.case_id);
  ctx.neighbor_samples = cfg.search.neighbor_samples;
  ctx.min_gain = cfg.search.min_gain;
  ctx.full_neighborhood = cfg.search.full_neighborhood;
  ctx.fixed_placement = cfg.search.fixed_placement;
  ctx.seed = seed;
  ctx.budget = cfg.budget;
  ctx.iter_max = cfg.search.iter_max;
  ctx.threads = threads;
  ctx.forest = cfg.forest;
  ctx.meta_neighbor_samples = cfg.search.meta_neighbor_samples;
  ctx.meta_max_steps = cfg.search.meta_max_steps;
  ctx.restart_link_moves = cfg.search.restart_link_moves;
  ctx.stop_on_convergence = cfg.search.stop_on_convergence;
  return ctx;
}

inline AnnealingSchedule annealing_schedule(const ExperimentConfig& cfg) {
  const AnnealingSchedule s = cfg.annealing.value_or(AnnealingSchedule{});
  if (!cfg.cooling_fits_budget) return s;
  return AnnealingSchedule::for_budget(cfg.budget, s.moves_per_temp, s.t_initial, s.t_final);
}

inline SearchResult run_search(Algorithm algorithm, const SearchContext& ctx, const AnnealingSchedule& annealing) {
  switch (algorithm) {
    case Algorithm::MooStage: return moo_stage(ctx);
    case Algorithm::RandomRestart: return random_restart_baseline(ctx);
    case Algorithm::Mosa: return mosa_baseline(ctx, annealing);
  }
  throw DomainError("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Reports

struct LayerRow {
  int layer = 0;
  int planar_links = 0;
  int cpu = 0;
  int gpu = 0;
  int llc = 0;
};

inline std::vector<LayerRow> layer_report(const Design& design) {
  const Dims& dims = design.dims();
  std::vector<LayerRow> rows(static_cast<std::size_t>(dims.z));
  for (int z = 0; z < dims.z; ++z) rows[static_cast<std::size_t>(z)].layer = z;
  for (const Link& l : design.planar_links()) ++rows[static_cast<std::size_t>(layer_of(dims, l.a))].planar_links;
  for (int t = 0; t < design.tile_count(); ++t) {
    auto& row = rows[static_cast<std::size_t>(layer_of(dims, t))];
    switch (design.core_at(t).kind) {
      case CoreKind::Cpu: ++row.cpu; break;
      case CoreKind::Gpu: ++row.gpu; break;
      case CoreKind::Llc: ++row.llc; break;
    }
  }
  return rows;
}

inline std::string format_layers_csv(const std::vector<std::pair<std::string, Design>>& designs) {
  std::string out = "design,layer,planar_links,cpu,gpu,llc\n";
  for (const auto& [name, design] : designs) {
    for (const auto& r : layer_report(design)) {
      out += name + "," + std::to_string(r.layer) + "," + std::to_string(r.planar_links) + "," +
             std::to_string(r.cpu) + "," + std::to_string(r.gpu) + "," + std::to_string(r.llc) + "\n";
    }
  }
  return out;
}

// Index of the member minimizing the EDP proxy under `ctx`; ties go to the
// lexicographically smaller objective vector.
inline std::size_t best_edp_member(const ParetoArchive<Design>& archive, const EvalContext& ctx) {
  if (archive.empty()) throw DomainError("best_edp_member: archive is empty");
  const auto& entries = archive.entries();
  std::size_t best = 0;
  double best_edp = edp_proxy(entries[0].payload, ctx);
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double edp = edp_proxy(entries[i].payload, ctx);
    const auto a = entries[i].objectives.values();
    const auto b = entries[best].objectives.values();
    if (edp < best_edp ||
        (edp == best_edp && std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()))) {
      best = i;
      best_edp = edp;
    }
  }
  return best;
}

struct Spread {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const noexcept { return q3 - q1; }
};

// Linear-interpolation quantile of a non-empty sample.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double median(const std::vector<double>& values) { return quantile(values, 0.5); }

inline Spread spread_of(const std::vector<double>& values) {
  return {quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75)};
}

// ---------------------------------------------------------------------------
// Replicated runs

struct SeedRun {
  std::uint64_t seed = 0;
  Design start;
  SearchResult result;
  std::size_t best = 0;  // index of the best-EDP archive member
  double best_edp = 0.0;
  double final_phv() const { return result.progress.empty() ? 0.0 : result.progress.back().phv; }
};

struct CaseSummary {
  int case_id = 0;
  Algorithm algorithm = Algorithm::MooStage;
  std::vector<SeedRun> runs;
  Spread final_phv;
};

inline std::string format_predictions_csv(std::span<const PredictionRecord> records) {
  std::string out = "iteration,predicted,realized,relative_error\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration) + "," + format_double(r.predicted) + "," + format_double(r.realized) + "," +
           format_double(r.relative_error) + "\n";
  }
  return out;
}

inline Json summary_json(const CaseSummary& s, std::uint64_t budget) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["case"] = s.case_id;
  j["algorithm"] = algorithm_key(s.algorithm);
  j["budget"] = budget;
  Json runs = Json::array();
  for (const auto& r : s.runs) {
    runs.push_back({{"seed", r.seed},
                    {"final_phv", r.final_phv()},
                    {"evaluations", r.result.evaluations},
                    {"iterations", r.result.iterations},
                    {"converged", r.result.converged},
                    {"archive_size", r.result.archive.size()},
                    {"best_edp", r.best_edp}});
  }
  j["runs"] = std::move(runs);
  j["final_phv"] = {{"median", s.final_phv.median}, {"q1", s.final_phv.q1}, {"q3", s.final_phv.q3},
                    {"iqr", s.final_phv.iqr()}};
  return j;
}

inline void write_seed_artifacts(const std::filesystem::path& dir, const SeedRun& run, const EvalContext& ctx) {
  std::filesystem::create_directories(dir);
  write_text_file((dir / "archive.json").string(), dump(to_json(run.result.archive)));
  write_text_file((dir / "progress.csv").string(), format_progress_csv(run.result.progress));
  const auto& best = run.result.archive.entries()[run.best];
  write_text_file((dir / "layers.csv").string(), format_layers_csv({{"start", run.start}, {"best", best.payload}}));
  Json b;
  b["design"] = to_json(best.payload);
  b["objectives"] = to_json(best.objectives);
  b["edp_proxy"] = run.best_edp;
  b["evaluation"] = to_json(evaluate(best.payload, ctx, ObjectiveSet::for_case(5)));
  write_text_file((dir / "best.json").string(), dump(b));
  if (!run.result.predictions.empty()) {
    write_text_file((dir / "predictions.csv").string(), format_predictions_csv(run.result.predictions));
  }
  if (run.result.model) write_text_file((dir / "model.json").string(), dump(to_json(*run.result.model)));
}

// Runs the configured algorithm once per seed against `profile`. Artifacts
// go to `<output>/seed_<s>/` plus `<output>/summary.json` when `output` is
// non-empty.
inline CaseSummary run_case(const ExperimentConfig& cfg, const TrafficProfile& profile, unsigned threads,
                            const std::string& output) {
  cfg.validate();
  const EvalContext eval = make_eval_context(cfg, profile);
  CaseSummary summary;
  summary.case_id = cfg.case_id;
  summary.algorithm = cfg.algorithm;
  for (std::uint64_t seed : cfg.seeds) {
    SeedRun run;
    run.seed = seed;
    const SearchContext ctx = make_search_context(cfg, eval, seed, threads);
    run.start = initial_design(ctx);
    run.result = run_search(cfg.algorithm, ctx, annealing_schedule(cfg));
    run.best = best_edp_member(run.result.archive, eval);
    run.best_edp = edp_proxy(run.result.archive.entries()[run.best].payload, eval);
    if (!output.empty()) {
      write_seed_artifacts(std::filesystem::path(output) / ("seed_" + std::to_string(seed)), run, eval);
    }
    summary.runs.push_back(std::move(run));
  }
  std::vector<double> phv;
  for (const auto& r : summary.runs) phv.push_back(r.final_phv());
  summary.final_phv = spread_of(phv);
  if (!output.empty()) {
    write_text_file((std::filesystem::path(output) / "summary.json").string(), dump(summary_json(summary, cfg.budget)));
  }
  return summary;
}

inline CaseSummary run_case(const ExperimentConfig& cfg, unsigned threads = 1) {
  return run_case(cfg, effective_profile(load_profiles(cfg)), threads, cfg.output);
}

// Every algorithm on the same budget, seeds and traffic. Writes one
// subdirectory per algorithm and `compare.csv`.
inline std::vector<CaseSummary> compare(const ExperimentConfig& cfg, unsigned threads = 1) {
  const auto profile = effective_profile(load_profiles(cfg));
  std::vector<CaseSummary> out;
  std::string table = "algorithm,seed,final_phv,evaluations,best_edp\n";
  for (Algorithm a : kAlgorithms) {
    ExperimentConfig c = cfg;
    c.algorithm = a;
    const auto dir = cfg.output.empty() ? std::string{}
                                        : (std::filesystem::path(cfg.output) / std::string(algorithm_key(a))).string();
    out.push_back(run_case(c, profile, threads, dir));
    for (const auto& r : out.back().runs) {
      table += std::string(algorithm_key(a)) + "," + std::to_string(r.seed) + "," + format_double(r.final_phv()) +
               "," + std::to_string(r.result.evaluations) + "," + format_double(r.best_edp) + "\n";
    }
  }
  if (!cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    write_text_file((std::filesystem::path(cfg.output) / "compare.csv").string(), table);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Leave-one-out

struct DegradationEntry {
  std::string label;
  double edp_avg = 0.0;       // AVG-optimized design, evaluated on the held-out profile
  double edp_specific = 0.0;  // design optimized for the held-out profile itself
  double degradation = 0.0;   // (edp_avg - edp_specific) / edp_specific
};

struct DegradationReport {
  std::vector<DegradationEntry> entries;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

namespace detail {

// Best-EDP design over the archives of every seed, judged under `ctx`.
inline Design pooled_best(const std::vector<SeedRun>& runs, const EvalContext& ctx) {
  // Every member of every seed is ranked: EDP is not an archive objective,
  // so a member dominated across seeds can still be the EDP optimum.
  const Design* best = nullptr;
  double best_edp = 0.0;
  for (const auto& r : runs) {
    for (const auto& e : r.result.archive.entries()) {
      const double edp = edp_proxy(e.payload, ctx);
      if (!best || edp < best_edp) {
        best = &e.payload;
        best_edp = edp;
      }
    }
  }
  return *best;
}

}  // namespace detail

// For each profile p: optimize on AVG(profiles without p) and on p with the
// same seeds and budget, pick each side's best-EDP design (AVG side judged on
// its own AVG traffic), and compare both on p.
inline DegradationReport leave_one_out(const std::vector<TrafficProfile>& profiles, const ExperimentConfig& cfg,
                                       unsigned threads = 1) {
  if (profiles.size() < 3) throw ConfigError("traffic", "leave-one-out needs at least 3 profiles");
  cfg.validate();
  DegradationReport report;
  for (std::size_t held = 0; held < profiles.size(); ++held) {
    std::vector<TrafficProfile> rest;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      if (i != held) rest.push_back(profiles[i]);
    }
    const TrafficProfile avg = aggregate(rest);
    const EvalContext avg_ctx = make_eval_context(cfg, avg);
    const EvalContext own_ctx = make_eval_context(cfg, profiles[held]);
    const auto avg_runs = run_case(cfg, avg, threads, {}).runs;
    const auto own_runs = run_case(cfg, profiles[held], threads, {}).runs;
    const Design avg_design = detail::pooled_best(avg_runs, avg_ctx);
    const Design own_design = detail::pooled_best(own_runs, own_ctx);

    DegradationEntry e;
    e.label = profiles[held].label().empty() ? "profile_" + std::to_string(held) : profiles[held].label();
    e.edp_avg = edp_proxy(avg_design, own_ctx);
    e.edp_specific = edp_proxy(own_design, own_ctx);
    if (!(e.edp_specific > 0.0)) throw DomainError("leave_one_out: profile '" + e.label + "' has zero EDP proxy");
    e.degradation = (e.edp_avg - e.edp_specific) / e.edp_specific;
    report.entries.push_back(std::move(e));
  }
  std::vector<double> d;
  for (const auto& e : report.entries) d.push_back(e.degradation);
  report.mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  report.median = median(d);
  report.max = *std::max_element(d.begin(), d.end());
  return report;
}

inline Json to_json(const DegradationReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"label", e.label},
                       {"edp_avg", e.edp_avg},
                       {"edp_specific", e.edp_specific},
                       {"degradation", e.degradation}});
  }
  j["profiles"] = std::move(entries);
  j["summary"] = {{"mean", r.mean}, {"median", r.median}, {"max", r.max}};
  return j;
}

}  // namespace noc3d
