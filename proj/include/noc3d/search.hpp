#pragma once

// PHV-greedy local search, the learned-restart meta search (MOO-STAGE), and
// two baselines: random-restart local search and archive-based simulated
// annealing. All searches share one evaluation budget accounting scheme and
// are deterministic for a fixed seed regardless of thread count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/learner.hpp"
#include "noc3d/objectives.hpp"
#include "noc3d/parallel.hpp"
#include "noc3d/pareto.hpp"
#include "noc3d/rng.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

struct SearchContext {
  EvalContext eval;
  ObjectiveSet objectives;
  std::size_t neighbor_samples = 256;
  double min_gain = 1e-3;  // relative PHV gain a local-search step must exceed; 0 is plain strict increase
  bool full_neighborhood = false;  // enumerate every neighbor (tiny instances)
  bool fixed_placement = false;    // link moves only; restarts keep the placement
  std::uint64_t seed = 1;
  std::uint64_t budget = 20000;  // objective evaluations
  int iter_max = 100;
  unsigned threads = 1;
  ForestParams forest;
  std::size_t meta_neighbor_samples = 32;
  int meta_max_steps = 10;
  int restart_link_moves = -1;  // random link moves per restart; -1 means a quarter of the link budget
  bool stop_on_convergence = true;
  std::optional<Design> start;  // overrides the seeded mesh start

  void validate() const {
    eval.validate();
    if (objectives.empty()) throw ConfigError("case", "objective set is empty");
    if (budget == 0) throw ConfigError("budget", "must be > 0");
    if (iter_max < 1) throw ConfigError("iter_max", "must be >= 1");
    if (neighbor_samples == 0) throw ConfigError("neighbor_samples", "must be >= 1");
    if (!(min_gain >= 0.0) || !std::isfinite(min_gain)) throw ConfigError("min_gain", "must be finite and >= 0");
    if (meta_neighbor_samples == 0) throw ConfigError("meta_neighbor_samples", "must be >= 1");
    if (meta_max_steps < 0) throw ConfigError("meta_max_steps", "must be >= 0");
    forest.validate();
    if (start) {
      const auto problems = noc3d::validate(*start, eval.config);
      if (!problems.empty()) throw ConfigError("start", problems.front().detail);
    }
  }

  NeighborhoodOptions neighborhood() const { return {!fixed_placement, true}; }

  int restart_moves() const {
    return restart_link_moves >= 0 ? restart_link_moves : eval.config.link_budget_planar() / 4;
  }
};

// Counts objective evaluations against the budget. Batches are cut to the
// remaining budget, keeping their leading elements.
class Evaluator {
 public:
  explicit Evaluator(const SearchContext& ctx) : ctx_(&ctx) {}

  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t remaining() const noexcept { return ctx_->budget > used_ ? ctx_->budget - used_ : 0; }
  bool exhausted() const noexcept { return remaining() == 0; }

  std::optional<Evaluation> evaluate(const Design& design) {
    if (exhausted()) return std::nullopt;
    ++used_;
    return evaluate_full(design, ctx_->eval, ctx_->objectives);
  }

  std::vector<Evaluation> evaluate_batch(std::span<const Design> designs) {
    const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(designs.size(), remaining()));
    std::vector<Evaluation> out(n);
    parallel_for(n, ctx_->threads,
                 [&](std::size_t i) { out[i] = evaluate_full(designs[i], ctx_->eval, ctx_->objectives); });
    used_ += n;
    return out;
  }

 private:
  const SearchContext* ctx_;
  std::uint64_t used_ = 0;
};

// Normalization frame for one search run: each objective spans [0, 2 v0]
// where v0 is its value at the start design. Fixed for the whole run so PHV
// values stay comparable across iterations and algorithms sharing a start.
inline PhvFrame frame_for(const ObjectiveVector& start) {
  PhvFrame frame;
  for (double v : start.values()) {
    frame.bounds.lower.push_back(0.0);
    frame.bounds.upper.push_back(2.0 * v);
  }
  return frame;
}

struct ProgressRecord {
  int iteration = 0;
  std::uint64_t evaluations_used = 0;
  double phv = 0.0;
  std::size_t archive_size = 0;
  double wall_time = 0.0;  // seconds; diagnostic only
};

struct TrajectoryStep {
  Design design;
  ObjectiveVector objectives;
  FeatureVector features;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::vector<Move> moves;  // moves[i] turns steps[i] into steps[i + 1]
  double phv = 0.0;         // of the trajectory's non-dominated subset
};

struct LocalSearchResult {
  ParetoArchive<Design> archive;
  Trajectory trajectory;
  Design last;
  Evaluation last_evaluation;
  std::vector<double> phv_trace;  // archive PHV after the start and each accepted step
};

namespace detail {

enum Stream : std::uint64_t { kStart = 1, kLocal, kMeta, kRestart, kForest, kAnneal, kAccept };

inline std::uint64_t stream_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return derive_seed(derive_seed(seed, stream), index);
}

// Moves produced by the neighborhood generators are feasible by construction.
inline Design apply_feasible(const Design& design, const Move& move) {
  if (const auto* s = std::get_if<SwapTiles>(&move)) return design.with_swap(s->a, s->b);
  const auto& m = std::get<MoveLink>(move);
  return design.with_relink(*design.planar_link_id(m.remove), m.add);
}

inline std::vector<Move> neighbors(const SearchContext& ctx, const Design& design, std::size_t samples,
                                   std::uint64_t seed) {
  if (ctx.full_neighborhood) return enumerate_neighbors(design, ctx.neighborhood());
  return sample_neighbors(design, samples, seed, ctx.neighborhood());
}

inline std::vector<std::vector<double>> normalized_points(const ParetoArchive<Design>& archive, const PhvFrame& frame) {
  std::vector<std::vector<double>> points;
  points.reserve(archive.size() + 1);
  for (const auto& e : archive.entries()) points.push_back(normalize(e.objectives.values(), frame.bounds));
  return points;
}

// Index of the first maximum.
inline std::size_t first_argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

// Greedy PHV ascent. Each step evaluates a neighborhood of the current design
// and moves to the neighbor that maximizes PHV(S_local + neighbor); it stops
// at the first step where that best value does not exceed PHV(S_local) by
// more than the relative margin ctx.min_gain, or when the budget runs out.
// Ties go to the earliest neighbor.
inline LocalSearchResult local_search(const SearchContext& ctx, const Design& start, const Evaluation& start_eval,
                                      const PhvFrame& frame, Evaluator& evaluator, std::uint64_t seed) {
  LocalSearchResult out;
  out.archive.insert(start, start_eval.objectives);
  out.trajectory.steps.push_back({start, start_eval.objectives, features_of(start, start_eval)});
  out.last = start;
  out.last_evaluation = start_eval;
  const auto ref = frame.reference_point();
  auto points = detail::normalized_points(out.archive, frame);
  double current = hypervolume(points, ref);
  out.phv_trace.push_back(current);

  for (std::uint64_t step = 0; !evaluator.exhausted(); ++step) {
    const auto moves = detail::neighbors(ctx, out.last, ctx.neighbor_samples, derive_seed(seed, step));
    if (moves.empty()) break;
    std::vector<Design> candidates;
    candidates.reserve(moves.size());
    for (const auto& m : moves) candidates.push_back(detail::apply_feasible(out.last, m));
    const auto evals = evaluator.evaluate_batch(candidates);

    std::vector<double> phv(evals.size(), current);
    parallel_for(evals.size(), ctx.threads, [&](std::size_t i) {
      if (out.archive.covers(evals[i].objectives)) return;
      auto with = points;
      with.push_back(normalize(evals[i].objectives.values(), frame.bounds));
      phv[i] = hypervolume(with, ref);
    });
    if (phv.empty()) break;
    const std::size_t best = detail::first_argmax(phv);
    if (!(phv[best] - current > ctx.min_gain * current) || !(phv[best] > current)) break;

    out.archive.insert(candidates[best], evals[best].objectives);
    out.trajectory.steps.push_back({candidates[best], evals[best].objectives, features_of(candidates[best], evals[best])});
    out.trajectory.moves.push_back(moves[best]);
    out.last = candidates[best];
    out.last_evaluation = evals[best];
    points = detail::normalized_points(out.archive, frame);
    current = hypervolume(points, ref);
    out.phv_trace.push_back(current);
  }
  out.trajectory.phv = current;
  return out;
}

// Standalone form: evaluates the start (counted) and uses its own frame. The
// neighbor stream matches the first iteration of the restart searches.
inline LocalSearchResult local_search(const SearchContext& ctx, const Design& start) {
  ctx.validate();
  Evaluator evaluator(ctx);
  const auto start_eval = *evaluator.evaluate(start);
  return local_search(ctx, start, start_eval, frame_for(start_eval.objectives), evaluator,
                      detail::stream_seed(ctx.seed, detail::Stream::kLocal, 1));
}

struct MetaSearchResult {
  Design design;
  Evaluation evaluation;
  double predicted = 0.0;
  int steps = 0;
};

// Hill climb on the model's prediction surface from `from`. Neighbor
// features need objective values, so each neighbor costs one evaluation.
inline MetaSearchResult greedy_eval_search(const RegressionForest& model, const Design& from,
                                           const Evaluation& from_eval, const SearchContext& ctx,
                                           Evaluator& evaluator, std::uint64_t seed) {
  MetaSearchResult out{from, from_eval, model.predict(features_of(from, from_eval)), 0};
  while (out.steps < ctx.meta_max_steps && !evaluator.exhausted()) {
    const auto moves = detail::neighbors(ctx, out.design, ctx.meta_neighbor_samples,
                                         derive_seed(seed, static_cast<std::uint64_t>(out.steps)));
    if (moves.empty()) break;
    std::vector<Design> candidates;
    candidates.reserve(moves.size());
    for (const auto& m : moves) candidates.push_back(detail::apply_feasible(out.design, m));
    const auto evals = evaluator.evaluate_batch(candidates);
    if (evals.empty()) break;
    std::vector<double> predicted(evals.size());
    parallel_for(evals.size(), ctx.threads,
                 [&](std::size_t i) { predicted[i] = model.predict(features_of(candidates[i], evals[i])); });
    const std::size_t best = detail::first_argmax(predicted);
    if (!(predicted[best] > out.predicted)) break;
    out.design = candidates[best];
    out.evaluation = evals[best];
    out.predicted = predicted[best];
    ++out.steps;
  }
  return out;
}

inline Design greedy_eval_search(const RegressionForest& model, const Design& from, const SearchContext& ctx) {
  Evaluator evaluator(ctx);
  const auto from_eval = evaluate_full(from, ctx.eval, ctx.objectives);
  return greedy_eval_search(model, from, from_eval, ctx, evaluator, detail::stream_seed(ctx.seed, detail::Stream::kMeta, 0))
      .design;
}

// rand(D): random placement (kept from `reference` when placement is fixed)
// on the mesh link skeleton, then random feasible link moves.
inline Design random_design(const SearchContext& ctx, const Design& reference, std::uint64_t seed) {
  const auto& config = ctx.eval.config;
  Rng rng(seed);
  std::vector<Core> placement;
  if (ctx.fixed_placement) {
    placement.assign(reference.placement().begin(), reference.placement().end());
  } else {
    placement = canonical_placement(config);
    rng.shuffle(placement);
  }
  Design design(config.dims, std::move(placement), mesh_links(config.dims));
  for (int k = 0; k < ctx.restart_moves(); ++k) {
    const auto moves = sample_neighbors(design, 1, rng.next(), {false, true});
    if (moves.empty()) break;
    design = detail::apply_feasible(design, moves.front());
  }
  return design;
}

inline Design initial_design(const SearchContext& ctx) {
  if (ctx.start) return *ctx.start;
  if (ctx.fixed_placement) return build_mesh(ctx.eval.config);
  return build_mesh(ctx.eval.config, detail::stream_seed(ctx.seed, detail::Stream::kStart, 0));
}

// Eval's prediction for an iteration's start design against the PHV its
// local search then realized.
struct PredictionRecord {
  int iteration = 0;
  double predicted = 0.0;
  double realized = 0.0;
  double relative_error = 0.0;
  bool learned = false;  // start chosen by the Eval climb rather than at random
  int meta_steps = 0;
};

struct SearchResult {
  ParetoArchive<Design> archive;
  PhvFrame frame;
  std::vector<ProgressRecord> progress;
  std::vector<PredictionRecord> predictions;
  std::uint64_t evaluations = 0;
  int iterations = 0;
  bool converged = false;
  std::optional<RegressionForest> model;
};

namespace detail {

// Merges a local archive into the global one. True when at least one local
// member is still in the global archive afterwards.
inline bool merge_survives(ParetoArchive<Design>& global, const ParetoArchive<Design>& local) {
  for (const auto& e : local.entries()) global.insert(e.payload, e.objectives);
  for (const auto& l : local.entries()) {
    for (const auto& g : global.entries()) {
      if (g.payload == l.payload) return true;
    }
  }
  return false;
}

enum class Restart { Learned, Random };

inline SearchResult restart_search(const SearchContext& ctx, Restart policy) {
  ctx.validate();
  const Clock clock;
  Evaluator evaluator(ctx);
  SearchResult out;
  const Design first = initial_design(ctx);
  auto start_eval = *evaluator.evaluate(first);
  out.frame = frame_for(start_eval.objectives);

  Design start = first;
  std::optional<double> pending_prediction;
  bool pending_learned = false;
  int pending_steps = 0;
  TrainingSet training;
  for (int iteration = 1; iteration <= ctx.iter_max; ++iteration) {
    const auto it = static_cast<std::uint64_t>(iteration);
    auto local = local_search(ctx, start, start_eval, out.frame, evaluator, stream_seed(ctx.seed, Stream::kLocal, it));
    const bool survives = merge_survives(out.archive, local.archive);
    out.iterations = iteration;

    if (pending_prediction) {
      const double realized = local.trajectory.phv;
      const double error = realized > 0.0 ? std::abs(*pending_prediction - realized) / realized : 0.0;
      out.predictions.push_back({iteration, *pending_prediction, realized, error, pending_learned, pending_steps});
    }
    out.progress.push_back({iteration, evaluator.used(), out.frame.phv(out.archive.objective_vectors()),
                            out.archive.size(), clock.seconds()});

    if (!survives && ctx.stop_on_convergence) {
      out.converged = true;
      break;
    }
    if (evaluator.exhausted() || iteration == ctx.iter_max) break;

    if (policy == Restart::Learned) {
      for (const auto& s : local.trajectory.steps) training.add(s.features, local.trajectory.phv);
      out.model = train(training, ctx.forest, stream_seed(ctx.seed, Stream::kForest, it), ctx.threads);
      auto meta = greedy_eval_search(*out.model, local.last, local.last_evaluation, ctx, evaluator,
                                     stream_seed(ctx.seed, Stream::kMeta, it));
      if (!(meta.design == local.last)) {
        start = std::move(meta.design);
        start_eval = std::move(meta.evaluation);
        pending_prediction = meta.predicted;
        pending_learned = true;
        pending_steps = meta.steps;
        continue;
      }
    }
    start = random_design(ctx, first, stream_seed(ctx.seed, Stream::kRestart, it));
    auto fresh = evaluator.evaluate(start);
    if (!fresh) break;
    start_eval = std::move(*fresh);
    pending_prediction.reset();
    pending_learned = false;
    pending_steps = 0;
    if (out.model) pending_prediction = out.model->predict(features_of(start, start_eval));
  }
  out.evaluations = evaluator.used();
  return out;
}

}  // namespace detail

// MOO-STAGE: local search, then train Eval on every trajectory seen so far
// and climb Eval from d_last to choose the next start; fall back to a random
// design when that climb cannot leave d_last.
inline SearchResult moo_stage(const SearchContext& ctx) {
  return detail::restart_search(ctx, detail::Restart::Learned);
}

// Same loop and accounting as moo_stage, but every restart is random.
inline SearchResult random_restart_baseline(const SearchContext& ctx) {
  return detail::restart_search(ctx, detail::Restart::Random);
}

struct AnnealingSchedule {
  double t_initial = 0.05;
  double t_final = 1e-4;
  double cooling_rate = 0.95;
  int moves_per_temp = 50;

  void validate() const {
    if (!(t_initial > 0.0)) throw ConfigError("annealing.t_initial", "must be > 0");
    if (!(t_final > 0.0) || t_final > t_initial) throw ConfigError("annealing.t_final", "must lie in (0, t_initial]");
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) throw ConfigError("annealing.cooling_rate", "must lie in (0, 1)");
    if (moves_per_temp < 1) throw ConfigError("annealing.moves_per_temp", "must be >= 1");
  }

  // Cooling rate chosen so the temperature reaches t_final as the budget runs out.
  static AnnealingSchedule for_budget(std::uint64_t budget, int moves_per_temp = 50, double t_initial = 0.05,
                                      double t_final = 1e-4) {
    const double levels = std::max(1.0, static_cast<double>(budget) / std::max(1, moves_per_temp));
    const double rate = std::pow(t_final / t_initial, 1.0 / levels);
    return {t_initial, t_final, std::clamp(rate, 1e-6, 1.0 - 1e-9), moves_per_temp};
  }
};

// Single-chain annealing over the same move set. A candidate that enters the
// archive is always accepted; otherwise it is accepted with probability
// exp(delta / t), where delta is the change in the volume its own box
// [point, ref] dominates relative to the current point. Temperature cools
// geometrically and holds at t_final until the budget is spent.
inline SearchResult mosa_baseline(const SearchContext& ctx, const AnnealingSchedule& schedule) {
  ctx.validate();
  schedule.validate();
  const detail::Clock clock;
  Evaluator evaluator(ctx);
  SearchResult out;
  Design current = initial_design(ctx);
  const auto start_eval = *evaluator.evaluate(current);
  out.frame = frame_for(start_eval.objectives);
  out.archive.insert(current, start_eval.objectives);

  auto box = [&](const ObjectiveVector& v) {
    double volume = 1.0;
    for (double x : normalize(v.values(), out.frame.bounds)) volume *= out.frame.reference - x;
    return volume;
  };
  double current_box = box(start_eval.objectives);
  Rng accept(detail::stream_seed(ctx.seed, detail::Stream::kAccept, 0));
  const std::uint64_t walk = detail::stream_seed(ctx.seed, detail::Stream::kAnneal, 0);

  double t = schedule.t_initial;
  std::uint64_t step = 0;
  bool stuck = false;
  for (int level = 1; !evaluator.exhausted() && !stuck; ++level) {
    for (int m = 0; m < schedule.moves_per_temp && !evaluator.exhausted(); ++m) {
      const auto moves = sample_neighbors(current, 1, derive_seed(walk, step++), ctx.neighborhood());
      if (moves.empty()) {
        stuck = true;
        break;
      }
      Design candidate = detail::apply_feasible(current, moves.front());
      const auto ev = *evaluator.evaluate(candidate);
      const double candidate_box = box(ev.objectives);
      bool take = out.archive.insert(candidate, ev.objectives);
      if (!take) {
        const double delta = candidate_box - current_box;
        const double u = accept.uniform();
        take = delta >= 0.0 || u < std::exp(delta / t);
      }
      if (take) {
        current = std::move(candidate);
        current_box = candidate_box;
      }
    }
    out.iterations = level;
    out.progress.push_back({level, evaluator.used(), out.frame.phv(out.archive.objective_vectors()),
                            out.archive.size(), clock.seconds()});
    t = std::max(schedule.t_final, t * schedule.cooling_rate);
  }
  out.evaluations = evaluator.used();
  return out;
}

}  // namespace noc3d
