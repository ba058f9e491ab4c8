#pragma once

// JSON and CSV encodings for designs, objective vectors, archives, models
// and configuration blocks. Objects keep insertion order so that output is
// byte-stable; readers report problems as ConfigError with a dotted path.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "noc3d/error.hpp"
#include "noc3d/learner.hpp"
#include "noc3d/objectives.hpp"
#include "noc3d/pareto.hpp"
#include "noc3d/search.hpp"
#include "noc3d/topology.hpp"
#include "noc3d/traffic.hpp"

namespace noc3d {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";

namespace json_detail {

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
}

inline void allow_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

inline const Json& member(const Json& j, std::string_view key, const std::string& path) {
  require_object(j, path);
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key), "missing required key");
  return *it;
}

inline double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline long long as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

inline std::uint64_t as_unsigned(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline int as_int(const Json& j, const std::string& path) {
  const long long v = as_integer(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

// Optional-key readers that leave `out` untouched when the key is absent.
inline void read(const Json& j, std::string_view key, const std::string& path, double& out) {
  if (auto it = j.find(key); it != j.end()) out = as_number(*it, join(path, key));
}
inline void read(const Json& j, std::string_view key, const std::string& path, int& out) {
  if (auto it = j.find(key); it != j.end()) out = as_int(*it, join(path, key));
}
inline void read(const Json& j, std::string_view key, const std::string& path, std::uint64_t& out) {
  if (auto it = j.find(key); it != j.end()) out = as_unsigned(*it, join(path, key));
}
inline void read(const Json& j, std::string_view key, const std::string& path, bool& out) {
  if (auto it = j.find(key); it != j.end()) out = as_bool(*it, join(path, key));
}
inline void read(const Json& j, std::string_view key, const std::string& path, std::string& out) {
  if (auto it = j.find(key); it != j.end()) out = as_string(*it, join(path, key));
}

}  // namespace json_detail

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path + ": cannot open for writing");
  out << text;
  if (!out.flush()) throw Error(path + ": write failed");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// System, design, objective vectors

inline Json to_json(const Dims& d) { return Json::array({d.x, d.y, d.z}); }

inline Dims dims_from_json(const Json& j, const std::string& path) {
  json_detail::require_array(j, path);
  if (j.size() != 3) throw ConfigError(path, "expected [X, Y, Z]");
  Dims d{json_detail::as_int(j[0], path + "[0]"), json_detail::as_int(j[1], path + "[1]"),
         json_detail::as_int(j[2], path + "[2]")};
  return d;
}

inline Json to_json(const SystemConfig& c) {
  Json j;
  j["dims"] = to_json(c.dims);
  j["n_cpu"] = c.n_cpu;
  j["n_llc"] = c.n_llc;
  j["n_gpu"] = c.n_gpu;
  j["router_stages"] = c.router_stages;
  return j;
}

inline SystemConfig system_from_json(const Json& j, const std::string& path = "system") {
  using namespace json_detail;
  require_object(j, path);
  allow_keys(j, path, {"dims", "n_cpu", "n_llc", "n_gpu", "router_stages"});
  SystemConfig c;
  c.dims = dims_from_json(member(j, "dims", path), join(path, "dims"));
  c.n_cpu = as_int(member(j, "n_cpu", path), join(path, "n_cpu"));
  c.n_llc = as_int(member(j, "n_llc", path), join(path, "n_llc"));
  c.n_gpu = as_int(member(j, "n_gpu", path), join(path, "n_gpu"));
  read(j, "router_stages", path, c.router_stages);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw e.nested_in(path);
  }
  return c;
}

inline Json to_json(const Design& d) {
  Json j;
  j["dims"] = to_json(d.dims());
  Json placement = Json::array();
  for (const Core& c : d.placement()) placement.push_back(core_label(c));
  j["placement"] = std::move(placement);
  Json links = Json::array();
  for (const Link& l : d.planar_links()) links.push_back(Json::array({l.a, l.b}));
  j["planar_links"] = std::move(links);
  return j;
}

inline Design design_from_json(const Json& j, const std::string& path = "design") {
  using namespace json_detail;
  require_object(j, path);
  allow_keys(j, path, {"dims", "placement", "planar_links"});
  const Dims dims = dims_from_json(member(j, "dims", path), join(path, "dims"));
  const auto& pj = member(j, "placement", path);
  require_array(pj, join(path, "placement"));
  std::vector<Core> placement;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const auto label = as_string(pj[i], index(join(path, "placement"), i));
    const auto core = parse_core_label(label);
    if (!core) throw ConfigError(index(join(path, "placement"), i), "invalid core label '" + label + "'");
    placement.push_back(*core);
  }
  const auto& lj = member(j, "planar_links", path);
  require_array(lj, join(path, "planar_links"));
  std::vector<Link> links;
  for (std::size_t i = 0; i < lj.size(); ++i) {
    const auto where = index(join(path, "planar_links"), i);
    require_array(lj[i], where);
    if (lj[i].size() != 2) throw ConfigError(where, "expected a tile pair [a, b]");
    links.push_back({as_int(lj[i][0], where + "[0]"), as_int(lj[i][1], where + "[1]")});
  }
  return Design(dims, std::move(placement), std::move(links));
}

inline Json to_json(const ObjectiveVector& v) {
  Json j = Json::object();
  for (Objective o : v.keys().members()) j[std::string(objective_key(o))] = v[o];
  return j;
}

inline ObjectiveVector objectives_from_json(const Json& j, const std::string& path = "objectives") {
  json_detail::require_object(j, path);
  ObjectiveSet keys;
  std::array<double, kObjectiveCount> raw{};
  for (const auto& [key, value] : j.items()) {
    const auto o = parse_objective(key);
    if (!o) throw ConfigError(json_detail::join(path, key), "unknown objective");
    keys = keys.with(*o);
    raw[static_cast<std::size_t>(*o)] = json_detail::as_number(value, json_detail::join(path, key));
  }
  std::vector<double> values;
  for (Objective o : keys.members()) values.push_back(raw[static_cast<std::size_t>(o)]);
  return ObjectiveVector(keys, values);
}

// Archive export: entries sorted by objective vector for a stable order.
inline Json to_json(const ParetoArchive<Design>& archive) {
  std::vector<const ParetoArchive<Design>::Entry*> entries;
  for (const auto& e : archive.entries()) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) {
    const auto x = a->objectives.values();
    const auto y = b->objectives.values();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  Json j = Json::array();
  for (const auto* e : entries) {
    Json item;
    item["design"] = to_json(e->payload);
    item["objectives"] = to_json(e->objectives);
    j.push_back(std::move(item));
  }
  return j;
}

inline ParetoArchive<Design> archive_from_json(const Json& j, const std::string& path = "archive") {
  json_detail::require_array(j, path);
  ParetoArchive<Design> archive;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto where = json_detail::index(path, i);
    archive.insert(design_from_json(json_detail::member(j[i], "design", where), json_detail::join(where, "design")),
                   objectives_from_json(json_detail::member(j[i], "objectives", where),
                                        json_detail::join(where, "objectives")));
  }
  return archive;
}

// ---------------------------------------------------------------------------
// Evaluation constants, synthetic traffic, learner and search knobs

inline Json to_json(const EvalContext& ctx) {
  Json j;
  j["power"] = {{"cpu", ctx.power.cpu}, {"llc", ctx.power.llc}, {"gpu", ctx.power.gpu}};
  j["thermal"] = {{"layer_resistances", ctx.thermal.layer_resistances},
                  {"base_resistance", ctx.thermal.base_resistance}};
  j["energy"] = {{"router", ctx.energy.router}, {"planar", ctx.energy.planar}, {"vertical", ctx.energy.vertical}};
  return j;
}

// Reads the optional "power", "thermal" and "energy" blocks of `root` into
// `ctx`, whose defaults stand for absent keys.
inline void read_constants(const Json& root, EvalContext& ctx) {
  using namespace json_detail;
  if (auto it = root.find("power"); it != root.end()) {
    require_object(*it, "power");
    allow_keys(*it, "power", {"cpu", "llc", "gpu"});
    read(*it, "cpu", "power", ctx.power.cpu);
    read(*it, "llc", "power", ctx.power.llc);
    read(*it, "gpu", "power", ctx.power.gpu);
  }
  if (auto it = root.find("thermal"); it != root.end()) {
    require_object(*it, "thermal");
    allow_keys(*it, "thermal", {"layer_resistances", "base_resistance"});
    if (auto r = it->find("layer_resistances"); r != it->end()) {
      require_array(*r, "thermal.layer_resistances");
      ctx.thermal.layer_resistances.clear();
      for (std::size_t i = 0; i < r->size(); ++i) {
        ctx.thermal.layer_resistances.push_back(as_number((*r)[i], index("thermal.layer_resistances", i)));
      }
    }
    read(*it, "base_resistance", "thermal", ctx.thermal.base_resistance);
  }
  if (auto it = root.find("energy"); it != root.end()) {
    require_object(*it, "energy");
    allow_keys(*it, "energy", {"router", "planar", "vertical"});
    read(*it, "router", "energy", ctx.energy.router);
    read(*it, "planar", "energy", ctx.energy.planar);
    read(*it, "vertical", "energy", ctx.energy.vertical);
  }
}

inline Json to_json(const SyntheticSpec& s) {
  Json j;
  j["master_cpu_share"] = s.master_cpu_share;
  j["core_llc_fraction"] = s.core_llc_fraction;
  j["cpu_llc_fraction"] = s.cpu_llc_fraction;
  j["cpu_gpu_fraction"] = s.cpu_gpu_fraction;
  j["gpu_uniformity_jitter"] = s.gpu_uniformity_jitter;
  j["total_intensity"] = s.total_intensity;
  j["seed"] = s.seed;
  j["label"] = s.label;
  return j;
}

inline SyntheticSpec synthetic_from_json(const Json& j, const std::string& path = "synthetic") {
  using namespace json_detail;
  require_object(j, path);
  allow_keys(j, path,
             {"master_cpu_share", "core_llc_fraction", "cpu_llc_fraction", "cpu_gpu_fraction",
              "gpu_uniformity_jitter", "total_intensity", "seed", "label"});
  SyntheticSpec s;
  read(j, "master_cpu_share", path, s.master_cpu_share);
  read(j, "core_llc_fraction", path, s.core_llc_fraction);
  read(j, "cpu_llc_fraction", path, s.cpu_llc_fraction);
  read(j, "cpu_gpu_fraction", path, s.cpu_gpu_fraction);
  read(j, "gpu_uniformity_jitter", path, s.gpu_uniformity_jitter);
  read(j, "total_intensity", path, s.total_intensity);
  read(j, "seed", path, s.seed);
  read(j, "label", path, s.label);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw e.nested_in(path);
  }
  return s;
}

inline Json to_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees}, {"max_depth", p.max_depth}, {"min_leaf", p.min_leaf},
          {"feature_frac", p.feature_frac}};
}

inline ForestParams forest_from_json(const Json& j, const std::string& path = "forest") {
  using namespace json_detail;
  require_object(j, path);
  allow_keys(j, path, {"n_trees", "max_depth", "min_leaf", "feature_frac"});
  ForestParams p;
  read(j, "n_trees", path, p.n_trees);
  read(j, "max_depth", path, p.max_depth);
  read(j, "min_leaf", path, p.min_leaf);
  read(j, "feature_frac", path, p.feature_frac);
  p.validate();
  return p;
}

// Model dump: one node array per tree, each node
// [feature, threshold, left, right, value] with feature -1 for leaves.
inline Json to_json(const RegressionForest& model) {
  Json j;
  j["features"] = model.feature_count();
  Json trees = Json::array();
  for (const auto& tree : model.trees()) {
    Json nodes = Json::array();
    for (const auto& n : tree.nodes()) nodes.push_back(Json::array({n.feature, n.threshold, n.left, n.right, n.value}));
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

inline RegressionForest forest_model_from_json(const Json& j, const std::string& path = "model") {
  using namespace json_detail;
  const auto features = static_cast<std::size_t>(as_unsigned(member(j, "features", path), join(path, "features")));
  const auto& tj = member(j, "trees", path);
  require_array(tj, join(path, "trees"));
  std::vector<RegressionTree> trees;
  for (std::size_t t = 0; t < tj.size(); ++t) {
    const auto tree_path = index(join(path, "trees"), t);
    require_array(tj[t], tree_path);
    std::vector<RegressionTree::Node> nodes;
    for (std::size_t i = 0; i < tj[t].size(); ++i) {
      const auto& nj = tj[t][i];
      const auto where = index(tree_path, i);
      require_array(nj, where);
      if (nj.size() != 5) throw ConfigError(where, "expected [feature, threshold, left, right, value]");
      RegressionTree::Node n;
      n.feature = as_int(nj[0], where + "[0]");
      n.threshold = as_number(nj[1], where + "[1]");
      n.left = as_int(nj[2], where + "[2]");
      n.right = as_int(nj[3], where + "[3]");
      n.value = as_number(nj[4], where + "[4]");
      nodes.push_back(n);
    }
    const auto count = static_cast<int>(nodes.size());
    if (count == 0) throw ConfigError(tree_path, "tree has no nodes");
    for (int i = 0; i < count; ++i) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      if (n.feature < 0) continue;
      if (static_cast<std::size_t>(n.feature) >= features || n.left <= i || n.right <= i || n.left >= count ||
          n.right >= count) {
        throw ConfigError(index(tree_path, static_cast<std::size_t>(i)), "malformed split node");
      }
    }
    trees.emplace_back(std::move(nodes));
  }
  return RegressionForest(features, std::move(trees));
}

inline Json to_json(const AnnealingSchedule& s) {
  return {{"t_initial", s.t_initial}, {"t_final", s.t_final}, {"cooling_rate", s.cooling_rate},
          {"moves_per_temp", s.moves_per_temp}};
}

// ---------------------------------------------------------------------------
// Progress and layer tables

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// wall_time is deliberately not written: output files must be byte-identical
// across runs.
inline std::string format_progress_csv(std::span<const ProgressRecord> records) {
  std::string out = "iteration,evaluations_used,phv,archive_size\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.evaluations_used) + "," + format_double(r.phv) + "," +
           std::to_string(r.archive_size) + "\n";
  }
  return out;
}

inline Json to_json(const ProgressRecord& r, bool with_wall_time = false) {
  Json j{{"iteration", r.iteration}, {"evaluations_used", r.evaluations_used}, {"phv", r.phv},
         {"archive_size", r.archive_size}};
  if (with_wall_time) j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace noc3d
