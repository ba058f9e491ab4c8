#include <gtest/gtest.h>

#include "noc3d/pareto.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace noc3d;

namespace {

using Points = std::vector<std::vector<double>>;

double hv(const Points& pts, std::vector<double> ref) { return hypervolume(pts, ref); }

ObjectiveSet first_k(std::size_t k) {
  ObjectiveSet s;
  for (std::size_t i = 0; i < k; ++i) s = s.with(kObjectives[i]);
  return s;
}

Points random_points(Rng& rng, std::size_t n, std::size_t m, double grid = 0.0) {
  Points pts(n, std::vector<double>(m));
  for (auto& p : pts)
    for (auto& x : p) x = grid > 0 ? std::floor(rng.uniform() * grid) / grid : rng.uniform();
  return pts;
}

}  // namespace

TEST(Dominance, Basics) {
  const std::vector<double> a{1, 1}, b{2, 2}, c{1, 2}, d{2, 1};
  EXPECT_TRUE(dominates(a, b));
  EXPECT_FALSE(dominates(b, a));
  EXPECT_FALSE(dominates(c, d));
  EXPECT_FALSE(dominates(d, c));
  EXPECT_FALSE(dominates(a, a));
  EXPECT_TRUE(weakly_dominates(a, a));
}

TEST(Dominance, KeysetMismatchIsDomainError) {
  const ObjectiveVector a(ObjectiveSet::for_case(1), {1, 2});
  const ObjectiveVector b(ObjectiveSet{Objective::UMean, Objective::Lat}, {1, 2});
  EXPECT_THROW(dominates(a, b), DomainError);
}

TEST(Archive, InsertIntoEmpty) {
  ParetoArchive<int> a;
  EXPECT_TRUE(a.insert(1, ObjectiveVector(ObjectiveSet::for_case(1), {3, 4})));
  EXPECT_EQ(a.size(), 1u);
}

TEST(Archive, DuplicateRejectedButBoundsGrow) {
  ParetoArchive<int> a;
  const auto keys = ObjectiveSet::for_case(1);
  a.insert(1, ObjectiveVector(keys, {3, 4}));
  EXPECT_FALSE(a.insert(2, ObjectiveVector(keys, {3, 4})));
  EXPECT_FALSE(a.insert(3, ObjectiveVector(keys, {5, 9})));
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.bounds().upper, (std::vector<double>{5, 9}));
  EXPECT_TRUE(a.insert(4, ObjectiveVector(keys, {1, 1})));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.entries()[0].payload, 4);
  EXPECT_EQ(a.bounds().lower, (std::vector<double>{1, 1}));
}

TEST(Archive, KeysetMismatchRejected) {
  ParetoArchive<int> a;
  a.insert(1, ObjectiveVector(ObjectiveSet::for_case(1), {3, 4}));
  EXPECT_THROW(a.insert(2, ObjectiveVector(ObjectiveSet::for_case(4), {1})), DomainError);
}

TEST(Archive, MatchesBruteForceFilter) {
  Rng rng(100);
  for (int stream = 0; stream < 10; ++stream) {
    const std::size_t m = 2 + stream % 4;
    // A coarse grid forces ties and exact duplicates.
    const Points pts = random_points(rng, 1000, m, stream % 2 ? 8.0 : 0.0);
    ParetoArchive<int> a;
    for (std::size_t i = 0; i < pts.size(); ++i) a.insert(static_cast<int>(i), ObjectiveVector(first_k(m), pts[i]));
    std::set<std::vector<double>> got;
    for (const auto& e : a.entries()) got.insert({e.objectives.values().begin(), e.objectives.values().end()});
    EXPECT_EQ(got.size(), a.size());
    EXPECT_EQ(got, oracle::nondominated(pts));
  }
}

TEST(Archive, MembersMutuallyNondominated) {
  Rng rng(7);
  ParetoArchive<int> a;
  for (const auto& p : random_points(rng, 500, 3)) a.insert(0, ObjectiveVector(first_k(3), p));
  for (const auto& x : a.entries())
    for (const auto& y : a.entries()) EXPECT_FALSE(dominates(x.objectives.values(), y.objectives.values()));
}

TEST(Normalize, EndpointsAndMidpoint) {
  const Bounds b{{1, 10, -2}, {3, 20, 2}};
  EXPECT_EQ(normalize(std::vector<double>{1, 10, -2}, b), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(normalize(std::vector<double>{3, 20, 2}, b), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(normalize(std::vector<double>{2, 15, 0}, b), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(normalize(std::vector<double>{9, -5, 0}, b), (std::vector<double>{1, 0, 0.5}));
}

TEST(Normalize, DegenerateAxisMapsToZero) {
  const Bounds b{{1, 1}, {1, 2}};
  EXPECT_EQ(normalize(std::vector<double>{5, 1.5}, b), (std::vector<double>{0, 0.5}));
  EXPECT_THROW(normalize(std::vector<double>{1}, b), DomainError);
}

TEST(Hypervolume, HandValues) {
  EXPECT_EQ(hv({}, {1, 1}), 0.0);
  EXPECT_NEAR(hv({{0, 0, 0}}, {1, 1, 1}), 1.0, 1e-12);
  EXPECT_NEAR(hv({{1, 2}, {2, 1}}, {3, 3}), 3.0, 1e-12);
  // Three staggered boxes in 3-D: 2*2*2 + 2 + 2 - overlaps, by inclusion-exclusion.
  // A=[1,3]x[1,3]x[2,3] (4), B=[2,3]x[2,3]x[0,3] (3), A&B=[2,3]^2x[2,3] (1) -> 6.
  EXPECT_NEAR(hv({{1, 1, 2}, {2, 2, 0}}, {3, 3, 3}), 6.0, 1e-12);
}

TEST(Hypervolume, PointOnReferenceRejected) {
  EXPECT_THROW(hv({{1, 3}}, {3, 3}), ReferencePointError);
  EXPECT_THROW(hv({{1, 2, 3}}, {3, 3}), DomainError);
}

TEST(Hypervolume, DominatedPointChangesNothing) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + t % 4;
    Points pts = random_points(rng, 1 + t % 12, m);
    const double before = hv(pts, std::vector<double>(m, 1.1));
    auto worse = pts[0];
    for (auto& x : worse) x = std::min(1.05, x + 0.01);
    pts.push_back(worse);
    EXPECT_NEAR(hv(pts, std::vector<double>(m, 1.1)), before, 1e-12);
  }
}

TEST(Hypervolume, NondominatedPointStrictlyIncreases) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + t % 4;
    Points pts = random_points(rng, 1 + t % 12, m);
    const double before = hv(pts, std::vector<double>(m, 1.1));
    // Beating every point on one coordinate guarantees an uncovered sliver.
    std::vector<double> better = pts[0];
    for (const auto& p : pts) better[t % m] = std::min(better[t % m], p[t % m]);
    better[t % m] -= 0.01;
    pts.push_back(better);
    EXPECT_GT(hv(pts, std::vector<double>(m, 1.1)), before);
  }
}

TEST(Hypervolume, OrderIndependent) {
  Rng rng(5);
  Points pts = random_points(rng, 15, 4);
  const double a = hv(pts, std::vector<double>(4, 1.0 + 1e-9));
  rng.shuffle(pts);
  EXPECT_DOUBLE_EQ(hv(pts, std::vector<double>(4, 1.0 + 1e-9)), a);
}

TEST(Hypervolume, AgreesWithMonteCarlo) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + t % 4;
    const Points pts = random_points(rng, 1 + rng.below(20), m);
    const std::vector<double> ref(m, 1.0 + 1e-9);
    const auto mc = oracle::monte_carlo_hv(pts, ref, 200000, 1000 + t);
    EXPECT_NEAR(hv(pts, ref), mc.value, 4 * mc.standard_error + 1e-12);
  }
}

TEST(Hypervolume, MatchesInclusionExclusion) {
  Rng rng(7);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + t % 4;
    const Points pts = random_points(rng, 1 + rng.below(14), m, t % 3 == 0 ? 6.0 : 0.0);
    const std::vector<double> ref(m, 1.1);
    EXPECT_NEAR(hv(pts, ref), oracle::inclusion_exclusion_hv(pts, ref), 1e-12);
  }
}

TEST(PhvFrame, ClampsOutsideFrame) {
  const PhvFrame f{{{0, 0}, {1, 1}}, 1.1};
  const auto keys = ObjectiveSet::for_case(1);
  const std::vector<ObjectiveVector> v{ObjectiveVector(keys, {0, 0})};
  EXPECT_NEAR(f.phv(v), 1.21, 1e-12);
  const std::vector<ObjectiveVector> far{ObjectiveVector(keys, {5, 5})};
  EXPECT_NEAR(f.phv(far), 0.01, 1e-12);
}
