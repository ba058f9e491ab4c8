#include <gtest/gtest.h>

#include <functional>

#include "noc3d/io.hpp"
#include "support.hpp"

using namespace noc3d;

namespace {

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(DesignJson, RoundTrip) {
  const Design d = fixture::random_feasible_design(fixture::sys36(), 5);
  const Json j = to_json(d);
  EXPECT_EQ(j["placement"].size(), 36u);
  EXPECT_EQ(design_from_json(j), d);
  EXPECT_EQ(design_from_json(Json::parse(dump(j))), d);
}

TEST(DesignJson, ErrorsNameTheField) {
  Json j = to_json(build_mesh(fixture::sys8()));
  j["placement"][3] = "TPU0";
  EXPECT_EQ(field_of([&] { design_from_json(j); }), "design.placement[3]");
  j = to_json(build_mesh(fixture::sys8()));
  j["planar_links"][1] = Json::array({0});
  EXPECT_EQ(field_of([&] { design_from_json(j); }), "design.planar_links[1]");
  j = to_json(build_mesh(fixture::sys8()));
  j["extra"] = 1;
  EXPECT_EQ(field_of([&] { design_from_json(j); }), "design.extra");
  j = to_json(build_mesh(fixture::sys8()));
  j.erase("dims");
  EXPECT_EQ(field_of([&] { design_from_json(j); }), "design.dims");
}

TEST(SystemJson, ValidationIsNested) {
  const Json j = Json::parse(R"({"dims": [2, 2, 2], "n_cpu": 1, "n_llc": 1, "n_gpu": 1})");
  EXPECT_EQ(field_of([&] { system_from_json(j); }).rfind("system", 0), 0u);
  EXPECT_EQ(system_from_json(to_json(fixture::sys64())), fixture::sys64());
}

TEST(ObjectivesJson, RoundTripKeepsKeys) {
  const ObjectiveVector v(ObjectiveSet::for_case(3), {0.1, 0.2, 3.5, 7.25});
  const Json j = to_json(v);
  EXPECT_TRUE(j.contains("U_MEAN"));
  EXPECT_TRUE(j.contains("ENERGY"));
  EXPECT_FALSE(j.contains("TEMP"));
  EXPECT_EQ(objectives_from_json(j), v);
  EXPECT_EQ(field_of([] { objectives_from_json(Json::parse(R"({"POWER": 1})")); }), "objectives.POWER");
}

TEST(ArchiveJson, RoundTripAndStableOrder) {
  ParetoArchive<Design> a;
  const auto ctx = fixture::default_context(fixture::sys8());
  for (std::uint64_t s = 1; s <= 30; ++s) {
    const Design d = fixture::random_feasible_design(fixture::sys8(), s);
    a.insert(d, evaluate(d, ctx, ObjectiveSet::for_case(1)));
  }
  const auto b = archive_from_json(to_json(a));
  EXPECT_EQ(fixture::objective_set(a), fixture::objective_set(b));
  EXPECT_EQ(dump(to_json(a)), dump(to_json(b)));
}

TEST(ForestJson, RoundTripPredictsIdentically) {
  TrainingSet data;
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    data.add({x, y}, x * x + y);
  }
  ForestParams p;
  p.n_trees = 7;
  const auto model = train(data, p, 4);
  const auto back = forest_model_from_json(Json::parse(dump(to_json(model))));
  for (int i = 0; i < 30; ++i) {
    const std::vector<double> q{rng.uniform(), rng.uniform()};
    EXPECT_EQ(back.predict(q), model.predict(q));
  }
}

TEST(ForestJson, MalformedNodeRejected) {
  const Json j = Json::parse(R"({"features": 2, "trees": [[[0, 0.5, 0, 2, 0], [-1, 0, -1, -1, 1], [-1, 0, -1, -1, 2]]]})");
  EXPECT_EQ(field_of([&] { forest_model_from_json(j); }), "model.trees[0][0]");
}

TEST(ProgressCsv, NoWallTime) {
  const std::vector<ProgressRecord> r{{1, 10, 0.5, 3, 12.5}, {2, 20, 0.75, 4, 99.0}};
  EXPECT_EQ(format_progress_csv(r), "iteration,evaluations_used,phv,archive_size\n1,10,0.5,3\n2,20,0.75,4\n");
}

TEST(JsonFile, InvalidJsonIsConfigErrorNamingFile) {
  const auto dir = fixture::scratch_dir("io_json");
  const auto path = (dir / "bad.json").string();
  write_text_file(path, "{ nope");
  EXPECT_EQ(field_of([&] { read_json_file(path); }), path);
  EXPECT_THROW(read_json_file((dir / "missing.json").string()), Error);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(std::stod(format_double(2.0 / 7.0)), 2.0 / 7.0);
}
