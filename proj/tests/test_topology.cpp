#include <gtest/gtest.h>

#include <set>

#include "noc3d/topology.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace noc3d;

namespace {

int count_vertical_edges(const Design& d) {
  const Network net(d);
  int ends = 0;
  for (int t = 0; t < net.size(); ++t) ends += net.degree(t);
  return ends / 2 - d.planar_link_count();
}

}  // namespace

TEST(Mesh, SixtyFourTileCounts) {
  const Design d = build_mesh(fixture::sys64());
  EXPECT_EQ(d.planar_link_count(), 96);
  EXPECT_EQ(count_vertical_edges(d), 48);
}

TEST(Mesh, SingleTileHasNoLinks) {
  const Design d = build_mesh({{1, 1, 1}, 1, 0, 0, 3});
  EXPECT_EQ(d.planar_link_count(), 0);
  EXPECT_EQ(d.vertical_link_count(), 0);
}

TEST(Mesh, ThirtySixTileCounts) {
  const Design d = build_mesh(fixture::sys36());
  EXPECT_EQ(d.planar_link_count(), 48);
  EXPECT_EQ(count_vertical_edges(d), 27);
}

TEST(Mesh, CountsMatchClosedFormOverSmallGrids) {
  for (int x = 1; x <= 5; ++x)
    for (int y = 1; y <= 5; ++y)
      for (int z = 1; z <= 5; ++z) {
        const SystemConfig sys{{x, y, z}, 1, 0, x * y * z - 1, 3};
        const Design d = build_mesh(sys);
        EXPECT_EQ(d.planar_link_count(), z * (x * (y - 1) + y * (x - 1)));
        EXPECT_EQ(count_vertical_edges(d), x * y * (z - 1));
        EXPECT_TRUE(validate(d, sys).empty());
      }
}

TEST(Mesh, CountMismatchIsConfigError) {
  EXPECT_THROW(build_mesh({{2, 2, 2}, 1, 1, 1, 3}), ConfigError);
}

TEST(Mesh, SeededPlacementIsPermutation) {
  const auto sys = fixture::sys36();
  const Design a = build_mesh(sys, 5);
  const Design b = build_mesh(sys, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, build_mesh(sys));
  EXPECT_TRUE(validate(a, sys).empty());
}

TEST(Moves, SwapIsInvolution) {
  const Design d = build_mesh(fixture::sys8(), 3);
  const Design once = apply_move(d, SwapTiles{0, 5});
  EXPECT_NE(once, d);
  EXPECT_EQ(apply_move(once, SwapTiles{0, 5}), d);
}

TEST(Moves, RelinkToSameLinkIsInvalid) {
  const Design d = build_mesh(fixture::sys8());
  const Link e = d.planar_links()[0];
  EXPECT_THROW(apply_move(d, MoveLink{e, e}), InvalidMove);
}

TEST(Moves, MalformedMovesAreInvalid) {
  const Design d = build_mesh(fixture::sys8());
  EXPECT_THROW(apply_move(d, SwapTiles{0, 0}), InvalidMove);
  EXPECT_THROW(apply_move(d, SwapTiles{0, 8}), InvalidMove);
  EXPECT_THROW(apply_move(d, MoveLink{{0, 3}, {1, 2}}), InvalidMove);          // removed link absent
  EXPECT_THROW(apply_move(d, MoveLink{{0, 1}, {0, 4}}), InvalidMove);          // crosses layers
  EXPECT_THROW(apply_move(d, MoveLink{{0, 1}, {0, 2}}), InvalidMove);          // already present
}

TEST(Moves, CuttingABridgeIsInfeasible) {
  // Path 2-0-1-3 on one layer: link (1,3) is the only way to reach tile 3.
  const auto sys = fixture::tiny_system();
  const Design d(sys.dims, canonical_placement(sys), {{0, 1}, {0, 2}, {1, 3}});
  EXPECT_THROW(apply_move(d, MoveLink{{1, 3}, {1, 2}}), InfeasibleMove);
  EXPECT_NO_THROW(apply_move(d, MoveLink{{1, 3}, {2, 3}}));
}

TEST(Moves, RelinkPreservesBudgetAndPlacement) {
  const Design d = build_mesh(fixture::sys8(), 2);
  const Design e = apply_move(d, MoveLink{{0, 1}, {0, 3}});
  EXPECT_EQ(e.planar_link_count(), d.planar_link_count());
  EXPECT_TRUE(std::equal(d.placement().begin(), d.placement().end(), e.placement().begin()));
  EXPECT_TRUE(e.has_planar_link({0, 3}));
  EXPECT_FALSE(e.has_planar_link({0, 1}));
}

TEST(Neighbors, SingleSampleGivesOneMove) {
  const Design d = build_mesh(fixture::sys8(), 1);
  EXPECT_EQ(sample_neighbors(d, 1, 9).size(), 1u);
  EXPECT_THROW(sample_neighbors(d, 0, 9), DomainError);
}

TEST(Neighbors, SameSeedSameMoves) {
  const Design d = build_mesh(fixture::sys36(), 1);
  EXPECT_EQ(sample_neighbors(d, 50, 77), sample_neighbors(d, 50, 77));
  EXPECT_NE(sample_neighbors(d, 50, 77), sample_neighbors(d, 50, 78));
}

TEST(Neighbors, LargeSampleIsDistinctAndFeasible) {
  const auto sys = fixture::sys64();
  const Design d = build_mesh(sys, 4);
  const auto moves = sample_neighbors(d, 256, 1);
  ASSERT_EQ(moves.size(), 256u);
  std::set<std::string> seen;
  int swaps = 0;
  for (const auto& m : moves) {
    EXPECT_TRUE(seen.insert(describe(m)).second);
    swaps += std::holds_alternative<SwapTiles>(m);
    EXPECT_TRUE(validate(apply_move(d, m), sys).empty());
  }
  // Kind is a fair coin per draw.
  EXPECT_GT(swaps, 90);
  EXPECT_LT(swaps, 166);
}

TEST(Neighbors, SampledMovesSkipSameKindSwaps) {
  const Design d = build_mesh(fixture::sys36(), 2);
  for (const auto& m : sample_neighbors(d, 200, 3)) {
    if (const auto* s = std::get_if<SwapTiles>(&m)) EXPECT_NE(d.core_at(s->a).kind, d.core_at(s->b).kind);
  }
}

TEST(Neighbors, EnumerationOfSmallDesignIsExhaustive) {
  const auto sys = fixture::tiny_system();
  const Design d = build_mesh(sys);
  const auto moves = enumerate_neighbors(d);
  // 5 cross-kind swaps (CPU, LLC, GPU, GPU) and 4 x 2 relinks, all feasible.
  EXPECT_EQ(moves.size(), 5u + 8u);
  const auto sampled = sample_neighbors(d, 1000, 1);
  EXPECT_EQ(sampled.size(), moves.size());
}

TEST(Neighbors, FeasibleMovesKeepDesignsValid) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = fixture::random_system(rng);
    const Design d = fixture::random_feasible_design(sys, rng.next());
    ASSERT_TRUE(validate(d, sys).empty());
    for (const auto& m : sample_neighbors(d, 40, rng.next())) EXPECT_TRUE(validate(apply_move(d, m), sys).empty());
  }
}

TEST(Routing, EmptyPathToSelf) {
  const Design d = build_mesh(fixture::sys8());
  const Path p = route(d, 3, 3);
  EXPECT_EQ(p.hop_count, 0);
  EXPECT_TRUE(p.links.empty());
  EXPECT_EQ(p.routers, std::vector<int>{3});
}

TEST(Routing, TieBreakPrefersLowerTile) {
  const Design d = build_mesh(fixture::tiny_system());
  const Path p = route(d, 0, 3);
  EXPECT_EQ(p.hop_count, 2);
  EXPECT_EQ(p.routers, (std::vector<int>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(p.link_delay, 2.0);
}

TEST(Routing, AdjacentTilesOneHop) {
  const Design d = build_mesh(fixture::sys8());
  EXPECT_EQ(route(d, 0, 1).hop_count, 1);
  EXPECT_EQ(route(d, 0, 4).hop_count, 1);  // vertical pillar
  EXPECT_TRUE(d.is_vertical(route(d, 0, 4).links[0]));
}

TEST(Routing, LongLinkDelayIsManhattanLength) {
  const auto sys = fixture::sys36();
  Design d = build_mesh(sys);
  d = apply_move(d, MoveLink{{0, 1}, {0, 8}});
  const Path p = route(d, 0, 8);
  EXPECT_EQ(p.hop_count, 1);
  EXPECT_DOUBLE_EQ(p.link_delay, 4.0);
}

TEST(Routing, MatchesIndependentShortestPaths) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemConfig sys = trial < 5 ? fixture::sys64() : fixture::random_system(rng, 27);
    const Design d = fixture::random_feasible_design(sys, rng.next(), 12);
    const auto g = oracle::graph_of(d);
    const auto dist = oracle::hop_distances(g);
    const Network net(d);
    for (int s = 0; s < d.tile_count(); ++s) {
      const auto tree = bfs_tree(net, s);
      for (int t = 0; t < d.tile_count(); ++t) {
        const Path p = path_in_tree(net, tree, t);
        ASSERT_EQ(p.hop_count, dist[s][t]);
        ASSERT_EQ(p.routers, oracle::greedy_path(g, dist, s, t));
      }
    }
  }
}

TEST(Routing, Deterministic) {
  const Design d = fixture::random_feasible_design(fixture::sys36(), 4, 10);
  for (int s = 0; s < 36; s += 5) {
    const Path a = route(d, s, 35 - s);
    const Path b = route(d, s, 35 - s);
    EXPECT_EQ(a.routers, b.routers);
    EXPECT_EQ(a.links, b.links);
  }
}

TEST(Validation, FreshMeshIsValid) {
  EXPECT_TRUE(validate(build_mesh(fixture::sys36(), 1), fixture::sys36()).empty());
}

TEST(Validation, MissingLinkBreaksBudget) {
  const auto sys = fixture::sys8();
  const Design mesh = build_mesh(sys);
  std::vector<Link> links(mesh.planar_links().begin() + 1, mesh.planar_links().end());
  const Design d(sys.dims, canonical_placement(sys), links);
  const auto v = validate(d, sys);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::LinkBudget);
}

TEST(Validation, BisectedDesignIsDisconnected) {
  // Drop every planar link that crosses x = 0.5 on both layers; pillars stay
  // inside each half.
  const auto sys = fixture::sys8();
  const Design d(sys.dims, canonical_placement(sys), {{0, 2}, {1, 3}, {4, 6}, {5, 7}});
  bool disconnected = false;
  for (const auto& v : validate(d, sys)) disconnected |= v.kind == ViolationKind::Disconnected;
  EXPECT_TRUE(disconnected);
}

TEST(Validation, ReportsEveryProblem) {
  const auto sys = fixture::sys8();
  auto placement = canonical_placement(sys);
  placement[0] = {CoreKind::Gpu, 0};  // duplicate GPU0, no CPU
  const Design d(sys.dims, placement, {{0, 4}, {0, 1}, {0, 1}});
  std::set<ViolationKind> kinds;
  for (const auto& v : validate(d, sys)) kinds.insert(v.kind);
  EXPECT_TRUE(kinds.count(ViolationKind::PlacementMultiset));
  EXPECT_TRUE(kinds.count(ViolationKind::CrossLayerLink));
  EXPECT_TRUE(kinds.count(ViolationKind::DuplicateLink));
  EXPECT_TRUE(kinds.count(ViolationKind::LinkBudget));
}

TEST(CoreLabels, RoundTrip) {
  for (Core c : {Core{CoreKind::Cpu, 0}, Core{CoreKind::Llc, 15}, Core{CoreKind::Gpu, 39}}) {
    EXPECT_EQ(parse_core_label(core_label(c)), c);
  }
  EXPECT_FALSE(parse_core_label("CPU"));
  EXPECT_FALSE(parse_core_label("XPU1"));
  EXPECT_FALSE(parse_core_label("GPU1a"));
}
