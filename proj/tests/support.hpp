#pragma once

// Fixtures shared by the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "noc3d/experiments.hpp"

namespace fixture {

using namespace noc3d;

inline SystemConfig sys8() { return {{2, 2, 2}, 1, 2, 5, 3}; }
inline SystemConfig sys36() { return {{3, 3, 4}, 4, 8, 24, 3}; }
inline SystemConfig sys64() { return {{4, 4, 4}, 8, 16, 40, 3}; }

inline EvalContext default_context(const SystemConfig& sys, const SyntheticSpec& spec = {}) {
  return EvalContext::with_defaults(sys, generate_synthetic(sys, spec));
}

// A random system of at most `max_tiles` tiles with at least one CPU and
// one LLC.
inline SystemConfig random_system(Rng& rng, int max_tiles = 18) {
  for (;;) {
    Dims d{1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3))};
    const int n = d.tiles();
    if (n < 3 || n > max_tiles) continue;
    const int cpu = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    const int llc = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - cpu - 1)));
    return {d, cpu, llc, n - cpu - llc, 1 + static_cast<int>(rng.below(4))};
  }
}

inline Design random_feasible_design(const SystemConfig& sys, std::uint64_t seed, int link_moves = 6) {
  Rng rng(seed);
  Design d = build_mesh(sys, rng.next());
  for (int k = 0; k < link_moves; ++k) {
    const auto moves = sample_neighbors(d, 1, rng.next(), {false, true});
    if (moves.empty()) break;
    d = apply_move(d, moves.front());
  }
  return d;
}

inline TrafficProfile random_traffic(int cores, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> r(static_cast<std::size_t>(cores) * cores, 0.0);
  for (int i = 0; i < cores; ++i)
    for (int j = 0; j < cores; ++j)
      if (i != j && rng.uniform() < 0.6) r[static_cast<std::size_t>(i) * cores + j] = rng.uniform() * 2.0;
  return TrafficProfile(cores, std::move(r), "random");
}

// The enumerable instance: 2x2x1, one CPU, one LLC, two GPUs, canonical
// placement held fixed, choosing 4 of the 6 same-layer pairs.
inline SystemConfig tiny_system() { return {{2, 2, 1}, 1, 1, 2, 3}; }

inline std::vector<Design> tiny_designs() {
  const auto sys = tiny_system();
  const Design base = build_mesh(sys);
  std::vector<Link> pairs;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) pairs.push_back({a, b});
  std::vector<Design> out;
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    std::vector<Link> links;
    for (int i = 0; i < 6; ++i)
      if (mask >> i & 1U) links.push_back(pairs[static_cast<std::size_t>(i)]);
    Design d(sys.dims, std::vector<Core>(base.placement().begin(), base.placement().end()), links);
    if (is_connected(Network(d))) out.push_back(std::move(d));
  }
  return out;
}

inline SearchContext tiny_search(std::uint64_t seed) {
  const auto sys = tiny_system();
  SearchContext ctx;
  ctx.eval = default_context(sys);
  ctx.objectives = ObjectiveSet::for_case(3);
  ctx.seed = seed;
  ctx.iter_max = 10;
  ctx.min_gain = 0.0;
  ctx.full_neighborhood = true;
  ctx.fixed_placement = true;
  ctx.budget = 100000;
  return ctx;
}

inline std::multiset<std::vector<double>> objective_set(const ParetoArchive<Design>& a) {
  std::multiset<std::vector<double>> out;
  for (const auto& e : a.entries()) {
    const auto v = e.objectives.values();
    out.insert({v.begin(), v.end()});
  }
  return out;
}

inline std::multiset<std::vector<double>> exhaustive_front(const std::vector<Design>& designs, const EvalContext& ctx,
                                                           ObjectiveSet set) {
  ParetoArchive<Design> front;
  for (const auto& d : designs) front.insert(d, evaluate(d, ctx, set));
  return objective_set(front);
}

// Settings shared by the 36-tile acceptance experiments.
inline SearchContext sys36_search(const EvalContext& eval, int case_id, std::uint64_t seed, std::uint64_t budget = 20000) {
  SearchContext ctx;
  ctx.eval = eval;
  ctx.objectives = ObjectiveSet::for_case(case_id);
  ctx.seed = seed;
  ctx.budget = budget;
  ctx.neighbor_samples = 64;
  ctx.min_gain = 2e-3;
  ctx.meta_neighbor_samples = 32;
  ctx.meta_max_steps = 10;
  ctx.stop_on_convergence = true;
  return ctx;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("noc3d_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fixture
