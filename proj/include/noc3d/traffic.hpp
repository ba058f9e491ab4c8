#pragma once

// Traffic profiles: dense core-to-core flit-rate matrices, a synthetic
// many-to-few generator, leave-one-out aggregation, and CSV I/O.

#include <charconv>
#include <cmath>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/rng.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

// Rates are indexed by global core id (row = source, column = destination).
class TrafficProfile {
 public:
  TrafficProfile() = default;

  TrafficProfile(int cores, std::vector<double> rates, std::string label = {})
      : n_(cores), rates_(std::move(rates)), label_(std::move(label)) {
    if (cores < 0 || rates_.size() != static_cast<std::size_t>(cores) * static_cast<std::size_t>(cores)) {
      throw DomainError("traffic matrix must be square with " + std::to_string(cores) + " rows");
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const double v = rate(i, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw DomainError("traffic rate (" + std::to_string(i) + "," + std::to_string(j) +
                            ") must be finite and non-negative");
        }
        if (i == j && v != 0.0) throw DomainError("traffic diagonal must be zero");
      }
    }
  }

  static TrafficProfile zeros(int cores, std::string label = {}) {
    return TrafficProfile(cores, std::vector<double>(static_cast<std::size_t>(cores) * cores, 0.0),
                          std::move(label));
  }

  int cores() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  std::span<const double> rates() const noexcept { return rates_; }

  double rate(int src, int dst) const noexcept {
    return rates_[static_cast<std::size_t>(src) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(dst)];
  }

  double total() const noexcept {
    double sum = 0.0;
    for (double v : rates_) sum += v;
    return sum;
  }

  TrafficProfile scaled(double factor) const {
    auto r = rates_;
    for (double& v : r) v *= factor;
    return TrafficProfile(n_, std::move(r), label_);
  }

  friend bool operator==(const TrafficProfile&, const TrafficProfile&) = default;

 private:
  int n_ = 0;
  std::vector<double> rates_;
  std::string label_;
};

// Structure knobs for the synthetic heterogeneous workload. All fractions
// are shares of total_intensity.
struct SyntheticSpec {
  double master_cpu_share = 0.7;        // share of all CPU traffic carried by CPU0
  double core_llc_fraction = 0.85;      // CPU<->LLC plus GPU<->LLC
  double cpu_llc_fraction = 0.05;       // CPU<->LLC part of core_llc_fraction
  double cpu_gpu_fraction = 0.0;        // CPU<->GPU part of the core-to-core remainder
  double gpu_uniformity_jitter = 0.05;  // relative std of GPU<->LLC pair rates
  double total_intensity = 1.0;         // flits per cycle, whole system
  std::uint64_t seed = 1;
  std::string label = "synthetic";

  void validate() const {
    auto fraction = [](double v, const char* field) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must lie in [0, 1]");
    };
    fraction(master_cpu_share, "master_cpu_share");
    fraction(core_llc_fraction, "core_llc_fraction");
    fraction(cpu_llc_fraction, "cpu_llc_fraction");
    fraction(cpu_gpu_fraction, "cpu_gpu_fraction");
    if (!(gpu_uniformity_jitter >= 0.0) || !std::isfinite(gpu_uniformity_jitter)) {
      throw ConfigError("gpu_uniformity_jitter", "must be finite and >= 0");
    }
    if (!(total_intensity > 0.0) || !std::isfinite(total_intensity)) {
      throw ConfigError("total_intensity", "must be finite and > 0");
    }
    if (cpu_llc_fraction > core_llc_fraction) {
      throw ConfigError("cpu_llc_fraction", "exceeds core_llc_fraction");
    }
    if (core_llc_fraction + cpu_gpu_fraction > 1.0) {
      throw ConfigError("cpu_gpu_fraction", "core_llc_fraction + cpu_gpu_fraction exceeds 1");
    }
  }
};

// Builds a many-to-few profile with exact class totals:
//   CPU<->LLC   cpu_llc_fraction                     split by per-CPU weight, uniform over LLCs
//   GPU<->LLC   core_llc_fraction - cpu_llc_fraction  uniform up to seeded jitter
//   CPU<->GPU   cpu_gpu_fraction                     split by per-CPU weight, uniform over GPUs
//   GPU<->GPU   remainder                            uniform over ordered GPU pairs
// Each pair's traffic is split evenly between the two directions. CPU0 is
// the master core; its weight is master_cpu_share and the other CPUs share
// the rest equally (a lone CPU carries everything).
inline TrafficProfile generate_synthetic(const SystemConfig& config, const SyntheticSpec& spec) {
  config.validate();
  spec.validate();
  const int n = config.core_count();
  const int cpus = config.n_cpu;
  const int llcs = config.n_llc;
  const int gpus = config.n_gpu;
  const double total = spec.total_intensity;

  const double cpu_llc = spec.cpu_llc_fraction * total;
  const double gpu_llc = (spec.core_llc_fraction - spec.cpu_llc_fraction) * total;
  const double cpu_gpu = spec.cpu_gpu_fraction * total;
  const double gpu_gpu = (1.0 - spec.core_llc_fraction - spec.cpu_gpu_fraction) * total;

  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(cpu_llc == 0.0 || (cpus > 0 && llcs > 0), "cpu_llc_fraction", "needs at least one CPU and one LLC");
  require(gpu_llc == 0.0 || (gpus > 0 && llcs > 0), "core_llc_fraction", "needs at least one GPU and one LLC");
  require(cpu_gpu == 0.0 || (cpus > 0 && gpus > 0), "cpu_gpu_fraction", "needs at least one CPU and one GPU");
  require(gpu_gpu == 0.0 || gpus > 1, "core_llc_fraction", "core-to-core remainder needs at least two GPUs");

  std::vector<double> rates(static_cast<std::size_t>(n) * n, 0.0);
  auto put_pair = [&](int a, int b, double amount) {
    rates[static_cast<std::size_t>(a) * n + b] += 0.5 * amount;
    rates[static_cast<std::size_t>(b) * n + a] += 0.5 * amount;
  };

  std::vector<double> cpu_weight(static_cast<std::size_t>(cpus), 0.0);
  if (cpus == 1) {
    cpu_weight[0] = 1.0;
  } else if (cpus > 1) {
    cpu_weight[0] = spec.master_cpu_share;
    for (int c = 1; c < cpus; ++c) cpu_weight[c] = (1.0 - spec.master_cpu_share) / (cpus - 1);
  }

  const int llc0 = config.kind_offset(CoreKind::Llc);
  const int gpu0 = config.kind_offset(CoreKind::Gpu);

  for (int c = 0; c < cpus; ++c) {
    for (int l = 0; l < llcs; ++l) put_pair(c, llc0 + l, cpu_llc * cpu_weight[c] / llcs);
    for (int g = 0; g < gpus; ++g) put_pair(c, gpu0 + g, cpu_gpu * cpu_weight[c] / gpus);
  }

  if (gpu_llc > 0.0) {
    Rng rng(derive_seed(spec.seed, 0x6a11));
    std::vector<double> factor(static_cast<std::size_t>(gpus) * llcs, 1.0);
    double factor_sum = 0.0;
    for (double& f : factor) {
      if (spec.gpu_uniformity_jitter > 0.0) f = std::max(0.0, 1.0 + spec.gpu_uniformity_jitter * rng.normal());
      factor_sum += f;
    }
    if (factor_sum <= 0.0) {
      std::fill(factor.begin(), factor.end(), 1.0);
      factor_sum = static_cast<double>(factor.size());
    }
    for (int g = 0; g < gpus; ++g) {
      for (int l = 0; l < llcs; ++l) {
        put_pair(gpu0 + g, llc0 + l, gpu_llc * (factor[static_cast<std::size_t>(g) * llcs + l] / factor_sum));
      }
    }
  }

  if (gpu_gpu > 0.0) {
    const double per_ordered_pair = gpu_gpu / (static_cast<double>(gpus) * (gpus - 1));
    for (int a = 0; a < gpus; ++a) {
      for (int b = 0; b < gpus; ++b) {
        if (a != b) rates[static_cast<std::size_t>(gpu0 + a) * n + gpu0 + b] += per_ordered_pair;
      }
    }
  }
  return TrafficProfile(n, std::move(rates), spec.label);
}

// Normalizes each profile to unit total and averages entrywise.
inline TrafficProfile aggregate(std::span<const TrafficProfile> profiles) {
  if (profiles.empty()) throw AggregationError("aggregate needs at least one profile");
  const int n = profiles.front().cores();
  std::vector<double> mean(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& p : profiles) {
    if (p.cores() != n) {
      throw AggregationError("profile '" + p.label() + "' has " + std::to_string(p.cores()) +
                             " cores, expected " + std::to_string(n));
    }
    const double total = p.total();
    if (!(total > 0.0)) throw AggregationError("profile '" + p.label() + "' carries no traffic");
    const auto r = p.rates();
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r[i] / total;
  }
  const auto count = static_cast<double>(profiles.size());
  for (double& v : mean) v /= count;
  return TrafficProfile(n, std::move(mean), "AVG");
}

// ---------------------------------------------------------------------------
// CSV: optional "# cores=<n> label=<s>" header, then n rows of n decimals.

inline std::string format_profile_csv(const TrafficProfile& profile) {
  std::string out = "# cores=" + std::to_string(profile.cores()) + " label=" + profile.label() + "\n";
  char buf[64];
  for (int i = 0; i < profile.cores(); ++i) {
    for (int j = 0; j < profile.cores(); ++j) {
      if (j) out += ',';
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, profile.rate(i, j));
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

inline TrafficProfile parse_profile_csv(std::string_view text, std::string default_label = {}) {
  std::string label = std::move(default_label);
  long declared_cores = -1;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      if (!rows.empty()) throw ParseError(line_no, 1, "header must precede data rows");
      std::istringstream header{std::string(line.substr(1))};
      std::string token;
      while (header >> token) {
        if (token.rfind("cores=", 0) == 0) {
          const auto value = std::string_view(token).substr(6);
          long parsed = 0;
          auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
          if (ec != std::errc{} || p != value.data() + value.size() || parsed < 0) {
            throw ParseError(line_no, 0, "invalid cores= value in header");
          }
          declared_cores = parsed;
        } else if (token.rfind("label=", 0) == 0) {
          label = token.substr(6);
        }
      }
      continue;
    }

    std::vector<double> row;
    std::size_t field_start = 0;
    std::size_t column = 1;
    for (;;) {
      const std::size_t comma = std::min(line.find(',', field_start), line.size());
      std::string_view field = line.substr(field_start, comma - field_start);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double value = 0.0;
      auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || p != field.data() + field.size()) {
        throw ParseError(line_no, column, "'" + std::string(field) + "' is not a decimal number");
      }
      if (std::isnan(value)) throw ParseError(line_no, column, "NaN rate");
      if (!std::isfinite(value)) throw ParseError(line_no, column, "non-finite rate");
      if (value < 0.0) throw ParseError(line_no, column, "negative rate");
      row.push_back(value);
      if (comma == line.size()) break;
      field_start = comma + 1;
      ++column;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(line_no, 0, "row has " + std::to_string(row.size()) + " values, expected " +
                                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    row_lines.push_back(line_no);
  }

  const std::size_t n = rows.size();
  if (n > 0 && rows.front().size() != n) {
    throw ParseError(0, 0, "matrix is not square: " + std::to_string(n) + " rows of " +
                               std::to_string(rows.front().size()) + " values");
  }
  if (declared_cores >= 0 && static_cast<std::size_t>(declared_cores) != n) {
    throw ParseError(0, 0, "header declares " + std::to_string(declared_cores) + " cores but found " +
                               std::to_string(n) + " rows");
  }
  std::vector<double> rates;
  rates.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0.0) throw ParseError(row_lines[i], i + 1, "diagonal entry must be zero");
    rates.insert(rates.end(), rows[i].begin(), rows[i].end());
  }
  return TrafficProfile(static_cast<int>(n), std::move(rates), std::move(label));
}

inline TrafficProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open traffic profile '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_profile_csv(buffer.str(), path);
  } catch (const ParseError& e) {
    throw e.with_source(path);
  }
}

inline void store_profile(const TrafficProfile& profile, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write traffic profile '" + path + "'");
  out << format_profile_csv(profile);
  if (!out) throw Error("failed writing traffic profile '" + path + "'");
}

}  // namespace noc3d
