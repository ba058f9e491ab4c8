#pragma once

// Analytical objective models for a design under a traffic/power/energy
// context: link utilization statistics, CPU-LLC latency, the stacked
// thermal metric, and network energy. All objectives are minimized.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/topology.hpp"
#include "noc3d/traffic.hpp"

namespace noc3d {

enum class Objective : std::uint8_t { UMean = 0, UStd = 1, Lat = 2, Temp = 3, Energy = 4 };

inline constexpr std::size_t kObjectiveCount = 5;
inline constexpr std::array<Objective, kObjectiveCount> kObjectives{
    Objective::UMean, Objective::UStd, Objective::Lat, Objective::Temp, Objective::Energy};

constexpr std::string_view objective_key(Objective o) noexcept {
  switch (o) {
    case Objective::UMean: return "U_MEAN";
    case Objective::UStd: return "U_STD";
    case Objective::Lat: return "LAT";
    case Objective::Temp: return "TEMP";
    case Objective::Energy: return "ENERGY";
  }
  return "?";
}

inline std::optional<Objective> parse_objective(std::string_view key) {
  for (Objective o : kObjectives) {
    if (objective_key(o) == key) return o;
  }
  return std::nullopt;
}

class ObjectiveSet {
 public:
  constexpr ObjectiveSet() = default;
  constexpr ObjectiveSet(std::initializer_list<Objective> objectives) {
    for (Objective o : objectives) bits_ |= bit(o);
  }

  // Optimization cases: 1 {U_MEAN, U_STD}, 2 adds LAT, 3 adds ENERGY,
  // 4 {TEMP}, 5 all five.
  static ObjectiveSet for_case(int case_id) {
    switch (case_id) {
      case 1: return {Objective::UMean, Objective::UStd};
      case 2: return {Objective::UMean, Objective::UStd, Objective::Lat};
      case 3: return {Objective::UMean, Objective::UStd, Objective::Lat, Objective::Energy};
      case 4: return {Objective::Temp};
      case 5: return {Objective::UMean, Objective::UStd, Objective::Lat, Objective::Temp, Objective::Energy};
      default:
        throw ConfigError("case", "unknown case " + std::to_string(case_id) + "; valid cases are 1-5");
    }
  }

  constexpr bool contains(Objective o) const noexcept { return (bits_ & bit(o)) != 0; }
  constexpr ObjectiveSet with(Objective o) const noexcept {
    ObjectiveSet s = *this;
    s.bits_ = static_cast<std::uint8_t>(s.bits_ | bit(o));
    return s;
  }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  // Position of `o` within the set's canonical ordering.
  constexpr std::size_t slot(Objective o) const noexcept {
    return static_cast<std::size_t>(std::popcount(static_cast<std::uint8_t>(bits_ & (bit(o) - 1))));
  }

  std::vector<Objective> members() const {
    std::vector<Objective> out;
    for (Objective o : kObjectives) {
      if (contains(o)) out.push_back(o);
    }
    return out;
  }

  friend constexpr bool operator==(ObjectiveSet, ObjectiveSet) = default;

 private:
  static constexpr std::uint8_t bit(Objective o) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(o));
  }

  std::uint8_t bits_ = 0;
};

// Values for exactly the objectives of `keys`, stored in canonical order.
class ObjectiveVector {
 public:
  ObjectiveVector() = default;

  ObjectiveVector(ObjectiveSet keys, std::span<const double> values) : keys_(keys) {
    if (values.size() != keys.size()) {
      throw DomainError("objective vector needs " + std::to_string(keys.size()) + " values, got " +
                        std::to_string(values.size()));
    }
    std::copy(values.begin(), values.end(), values_.begin());
  }

  ObjectiveVector(ObjectiveSet keys, std::initializer_list<double> values)
      : ObjectiveVector(keys, std::span<const double>(values.begin(), values.size())) {}

  ObjectiveSet keys() const noexcept { return keys_; }
  std::size_t size() const noexcept { return keys_.size(); }
  std::span<const double> values() const noexcept { return {values_.data(), keys_.size()}; }

  bool has(Objective o) const noexcept { return keys_.contains(o); }

  double operator[](Objective o) const {
    if (!keys_.contains(o)) throw DomainError("objective " + std::string(objective_key(o)) + " not present");
    return values_[keys_.slot(o)];
  }

  void set(Objective o, double value) {
    if (!keys_.contains(o)) throw DomainError("objective " + std::string(objective_key(o)) + " not present");
    values_[keys_.slot(o)] = value;
  }

  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) noexcept {
    if (a.keys_ != b.keys_) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.values_[i] != b.values_[i]) return false;
    }
    return true;
  }

 private:
  ObjectiveSet keys_;
  std::array<double, kObjectiveCount> values_{};
};

// ---------------------------------------------------------------------------
// Evaluation context

struct PowerModel {
  double cpu = 2.0;
  double llc = 0.8;
  double gpu = 5.0;

  double of(CoreKind kind) const noexcept {
    switch (kind) {
      case CoreKind::Cpu: return cpu;
      case CoreKind::Llc: return llc;
      case CoreKind::Gpu: return gpu;
    }
    return 0.0;
  }
};

// Vertical thermal resistances per layer, counted from the sink (K/W).
struct ThermalModel {
  std::vector<double> layer_resistances;
  double base_resistance = 0.1;

  static ThermalModel uniform(int layers, double per_layer = 0.4, double base = 0.1) {
    return {std::vector<double>(static_cast<std::size_t>(layers), per_layer), base};
  }
};

// Per-flit energies: per router port, per tile pitch of planar wire, and per
// vertical traversal.
struct EnergyModel {
  double router = 1.0;
  double planar = 1.0;
  double vertical = 0.6;
};

struct EvalContext {
  SystemConfig config;
  TrafficProfile traffic;
  PowerModel power;
  ThermalModel thermal;
  EnergyModel energy;

  // Placeholder constants; real values come from power/thermal tooling.
  static EvalContext with_defaults(const SystemConfig& config, TrafficProfile traffic) {
    return {config, std::move(traffic), PowerModel{}, ThermalModel::uniform(config.dims.z), EnergyModel{}};
  }

  void validate() const {
    config.validate();
    if (traffic.cores() != config.core_count()) {
      throw ConfigError("traffic", "profile has " + std::to_string(traffic.cores()) +
                                       " cores, system has " + std::to_string(config.core_count()));
    }
    auto non_negative = [](double v, const char* field) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be finite and >= 0");
    };
    non_negative(power.cpu, "power.cpu");
    non_negative(power.llc, "power.llc");
    non_negative(power.gpu, "power.gpu");
    non_negative(thermal.base_resistance, "thermal.base_resistance");
    for (double r : thermal.layer_resistances) non_negative(r, "thermal.layer_resistances");
    if (static_cast<int>(thermal.layer_resistances.size()) != config.dims.z) {
      throw ConfigError("thermal.layer_resistances", "needs one resistance per layer (" +
                                                          std::to_string(config.dims.z) + ")");
    }
    non_negative(energy.router, "energy.router");
    non_negative(energy.planar, "energy.planar");
    non_negative(energy.vertical, "energy.vertical");
  }
};

// ---------------------------------------------------------------------------
// Network analysis: one routing pass shared by every traffic-driven objective.

struct NetworkAnalysis {
  std::vector<double> utilization;  // expected flits/cycle per link id
  double latency = 0.0;             // average CPU->LLC latency (0 without CPUs or LLCs)
  double router_energy = 0.0;
  double link_energy = 0.0;
  double mean_cpu_llc_hops = 0.0;
  double mean_gpu_llc_hops = 0.0;

  double energy() const noexcept { return router_energy + link_energy; }
};

inline NetworkAnalysis analyze_network(const Design& design, const EvalContext& ctx) {
  const int n = design.tile_count();
  if (ctx.traffic.cores() != n) {
    throw DomainError("traffic profile has " + std::to_string(ctx.traffic.cores()) + " cores, design has " +
                      std::to_string(n) + " tiles");
  }
  const Network net(design);
  const auto un = static_cast<std::size_t>(n);

  std::vector<int> core(un);
  std::vector<CoreKind> kind(un);
  std::vector<double> port_energy(un);
  for (int t = 0; t < n; ++t) {
    core[t] = design.core_id(t);
    kind[t] = design.core_at(t).kind;
    port_energy[t] = ctx.energy.router * static_cast<double>(net.degree(t) + 1);
  }
  const int links = design.link_count();
  std::vector<double> link_energy(static_cast<std::size_t>(links));
  std::vector<double> link_length(static_cast<std::size_t>(links));
  for (int id = 0; id < links; ++id) {
    link_length[id] = design.link_length(id);
    link_energy[id] = design.is_vertical(id) ? ctx.energy.vertical : link_length[id] * ctx.energy.planar;
  }

  NetworkAnalysis out;
  out.utilization.assign(static_cast<std::size_t>(links), 0.0);
  const double stages = static_cast<double>(ctx.config.router_stages);

  std::vector<int> order(un), parent(un), parent_link(un), hops(un);
  std::vector<double> delay(un), router_cost(un), wire_cost(un), subtree(un);
  double latency_sum = 0.0;
  double cpu_llc_hops = 0.0, gpu_llc_hops = 0.0;
  long cpu_llc_pairs = 0, gpu_llc_pairs = 0;

  for (int s = 0; s < n; ++s) {
    // BFS with ascending-neighbor expansion (same tree as bfs_tree()).
    std::fill(hops.begin(), hops.end(), -1);
    std::size_t tail = 0;
    order[tail++] = s;
    hops[s] = 0;
    parent[s] = -1;
    delay[s] = 0.0;
    router_cost[s] = port_energy[s];
    wire_cost[s] = 0.0;
    for (std::size_t head = 0; head < tail; ++head) {
      const int u = order[head];
      for (const auto& e : net.edges(u)) {
        if (hops[e.to] >= 0) continue;
        hops[e.to] = hops[u] + 1;
        parent[e.to] = u;
        parent_link[e.to] = e.link;
        delay[e.to] = delay[u] + link_length[e.link];
        router_cost[e.to] = router_cost[u] + port_energy[e.to];
        wire_cost[e.to] = wire_cost[u] + link_energy[e.link];
        order[tail++] = e.to;
      }
    }
    if (tail != un) throw RoutingError("design is disconnected; tile " + std::to_string(s) + " cannot reach all tiles");

    const int src_core = core[s];
    const CoreKind src_kind = kind[s];
    for (std::size_t i = 1; i < tail; ++i) {
      const int v = order[i];
      const double f = ctx.traffic.rate(src_core, core[v]);
      subtree[v] = f;
      out.router_energy += f * router_cost[v];
      out.link_energy += f * wire_cost[v];
      if (kind[v] == CoreKind::Llc) {
        if (src_kind == CoreKind::Cpu) {
          latency_sum += (stages * hops[v] + delay[v]) * f;
          cpu_llc_hops += hops[v];
          ++cpu_llc_pairs;
        } else if (src_kind == CoreKind::Gpu) {
          gpu_llc_hops += hops[v];
          ++gpu_llc_pairs;
        }
      }
    }
    for (std::size_t i = tail; i-- > 1;) {
      const int v = order[i];
      out.utilization[static_cast<std::size_t>(parent_link[v])] += subtree[v];
      if (parent[v] != s) subtree[parent[v]] += subtree[v];
    }
  }

  const long cpus = design.kind_count(CoreKind::Cpu);
  const long llcs = design.kind_count(CoreKind::Llc);
  if (cpus > 0 && llcs > 0) out.latency = latency_sum / static_cast<double>(cpus * llcs);
  if (cpu_llc_pairs > 0) out.mean_cpu_llc_hops = cpu_llc_hops / static_cast<double>(cpu_llc_pairs);
  if (gpu_llc_pairs > 0) out.mean_gpu_llc_hops = gpu_llc_hops / static_cast<double>(gpu_llc_pairs);
  return out;
}

// U_k = sum_ij f_ij * [link k on path i->j], over planar and vertical links.
inline std::vector<double> link_utilizations(const Design& design, const EvalContext& ctx) {
  return analyze_network(design, ctx).utilization;
}

struct UtilStats {
  double mean = 0.0;
  double stddev = 0.0;
};

// Population mean and standard deviation.
inline UtilStats util_stats(std::span<const double> utilization) {
  if (utilization.empty()) throw DomainError("util_stats: no links");
  const auto count = static_cast<double>(utilization.size());
  double sum = 0.0;
  for (double u : utilization) sum += u;
  const double mean = sum / count;
  double sq = 0.0;
  for (double u : utilization) sq += (u - mean) * (u - mean);
  return {mean, std::sqrt(sq / count)};
}

inline void require_cpu_and_llc(const Design& design) {
  if (design.kind_count(CoreKind::Cpu) == 0 || design.kind_count(CoreKind::Llc) == 0) {
    throw DomainError("context error: CPU-LLC latency needs at least one CPU and one LLC");
  }
}

// Lat = 1/(C*M) * sum over CPU i, LLC j of (r*h_ij + d_ij) * f_ij, using
// the CPU->LLC direction of the traffic matrix.
inline double cpu_llc_latency(const Design& design, const EvalContext& ctx) {
  require_cpu_and_llc(design);
  return analyze_network(design, ctx).latency;
}

inline double network_energy(const Design& design, const EvalContext& ctx) {
  return analyze_network(design, ctx).energy();
}

// ---------------------------------------------------------------------------
// Thermal model

// T[n][k] for each single-tile stack n and layer k (k = 0 nearest the sink):
//   T_{n,k} = sum_{i<=k} P_{n,i} * sum_{j<=i} R_j + R_b * sum_{i<=k} P_{n,i}
inline std::vector<std::vector<double>> stack_temperatures(const std::vector<std::vector<double>>& stack_powers,
                                                           std::span<const double> layer_resistances,
                                                           double base_resistance) {
  std::vector<std::vector<double>> temps;
  temps.reserve(stack_powers.size());
  for (const auto& powers : stack_powers) {
    if (powers.size() > layer_resistances.size()) {
      throw DomainError("stack has more layers than thermal resistances");
    }
    std::vector<double> t(powers.size());
    double resistance_to_sink = 0.0;
    double vertical = 0.0;
    double power_below = 0.0;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      resistance_to_sink += layer_resistances[k];
      vertical += powers[k] * resistance_to_sink;
      power_below += powers[k];
      t[k] = vertical + base_resistance * power_below;
    }
    temps.push_back(std::move(t));
  }
  return temps;
}

// (max over all T_{n,k}) * (max over layers of the in-layer spread).
inline double thermal_metric_of(const std::vector<std::vector<double>>& temps) {
  if (temps.empty() || temps.front().empty()) return 0.0;
  const std::size_t layers = temps.front().size();
  double peak = 0.0;
  double spread = 0.0;
  for (std::size_t k = 0; k < layers; ++k) {
    double lo = temps.front()[k];
    double hi = lo;
    for (const auto& stack : temps) {
      lo = std::min(lo, stack[k]);
      hi = std::max(hi, stack[k]);
    }
    peak = std::max(peak, hi);
    spread = std::max(spread, hi - lo);
  }
  return peak * spread;
}

inline double thermal_metric(const Design& design, const EvalContext& ctx) {
  const Dims& dims = design.dims();
  std::vector<std::vector<double>> powers(static_cast<std::size_t>(dims.layer_size()),
                                          std::vector<double>(static_cast<std::size_t>(dims.z)));
  for (int t = 0; t < design.tile_count(); ++t) {
    powers[static_cast<std::size_t>(t % dims.layer_size())][static_cast<std::size_t>(layer_of(dims, t))] =
        ctx.power.of(design.core_at(t).kind);
  }
  return thermal_metric_of(stack_temperatures(powers, ctx.thermal.layer_resistances, ctx.thermal.base_resistance));
}

// ---------------------------------------------------------------------------
// Combined evaluation

struct Evaluation {
  ObjectiveVector objectives;
  NetworkAnalysis network;
};

inline Evaluation evaluate_full(const Design& design, const EvalContext& ctx, ObjectiveSet objectives) {
  if (objectives.empty()) throw DomainError("evaluate: objective set is empty");
  if (objectives.contains(Objective::Lat)) require_cpu_and_llc(design);
  Evaluation out;
  out.network = analyze_network(design, ctx);
  std::array<double, kObjectiveCount> values{};
  std::size_t i = 0;
  const bool needs_stats = objectives.contains(Objective::UMean) || objectives.contains(Objective::UStd);
  const UtilStats stats = needs_stats ? util_stats(out.network.utilization) : UtilStats{};
  for (Objective o : kObjectives) {
    if (!objectives.contains(o)) continue;
    switch (o) {
      case Objective::UMean: values[i++] = stats.mean; break;
      case Objective::UStd: values[i++] = stats.stddev; break;
      case Objective::Lat: values[i++] = out.network.latency; break;
      case Objective::Temp: values[i++] = thermal_metric(design, ctx); break;
      case Objective::Energy: values[i++] = out.network.energy(); break;
    }
  }
  out.objectives = ObjectiveVector(objectives, std::span<const double>(values.data(), i));
  return out;
}

inline ObjectiveVector evaluate(const Design& design, const EvalContext& ctx, ObjectiveSet objectives) {
  return evaluate_full(design, ctx, objectives).objectives;
}

// Energy-delay proxy: CPU-LLC latency times network energy.
inline double edp_proxy(const Design& design, const EvalContext& ctx) {
  require_cpu_and_llc(design);
  const auto net = analyze_network(design, ctx);
  return net.latency * net.energy();
}

}  // namespace noc3d
