#pragma once

// Evaluation-function learning for the meta search: design features and a
// bagged regression forest (axis-aligned threshold trees, mean leaves).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/objectives.hpp"
#include "noc3d/parallel.hpp"
#include "noc3d/rng.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

using FeatureVector = std::vector<double>;

// Layout: objective values of the active case, planar links per layer,
// LLCs per layer, mean and max link utilization, mean CPU->LLC hops, mean
// GPU->LLC hops.
inline std::size_t feature_count(ObjectiveSet objectives, int layers) {
  return objectives.size() + 2 * static_cast<std::size_t>(layers) + 4;
}

inline FeatureVector features_of(const Design& design, const Evaluation& evaluation) {
  const Dims& dims = design.dims();
  FeatureVector f;
  f.reserve(feature_count(evaluation.objectives.keys(), dims.z));
  const auto values = evaluation.objectives.values();
  f.insert(f.end(), values.begin(), values.end());

  std::vector<double> links(static_cast<std::size_t>(dims.z), 0.0);
  for (const Link& l : design.planar_links()) links[static_cast<std::size_t>(layer_of(dims, l.a))] += 1.0;
  std::vector<double> llcs(static_cast<std::size_t>(dims.z), 0.0);
  for (int t = 0; t < design.tile_count(); ++t) {
    if (design.core_at(t).kind == CoreKind::Llc) llcs[static_cast<std::size_t>(layer_of(dims, t))] += 1.0;
  }
  f.insert(f.end(), links.begin(), links.end());
  f.insert(f.end(), llcs.begin(), llcs.end());

  const auto& u = evaluation.network.utilization;
  double mean = 0.0;
  double peak = 0.0;
  if (!u.empty()) {
    mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
    peak = *std::max_element(u.begin(), u.end());
  }
  f.push_back(mean);
  f.push_back(peak);
  f.push_back(evaluation.network.mean_cpu_llc_hops);
  f.push_back(evaluation.network.mean_gpu_llc_hops);
  return f;
}

inline FeatureVector featurize(const Design& design, const EvalContext& ctx, ObjectiveSet objectives) {
  return features_of(design, evaluate_full(design, ctx, objectives));
}

struct TrainingSet {
  std::vector<FeatureVector> features;
  std::vector<double> targets;

  void add(FeatureVector x, double y) {
    if (!features.empty() && x.size() != features.front().size()) {
      throw DomainError("training example has " + std::to_string(x.size()) + " features, expected " +
                        std::to_string(features.front().size()));
    }
    features.push_back(std::move(x));
    targets.push_back(y);
  }

  std::size_t size() const noexcept { return targets.size(); }
  bool empty() const noexcept { return targets.empty(); }
};

struct ForestParams {
  int n_trees = 50;
  int max_depth = 12;
  int min_leaf = 2;
  double feature_frac = 0.7;

  void validate() const {
    if (n_trees < 1) throw ConfigError("forest.n_trees", "must be >= 1");
    if (max_depth < 0) throw ConfigError("forest.max_depth", "must be >= 0");
    if (min_leaf < 1) throw ConfigError("forest.min_leaf", "must be >= 1");
    if (!(feature_frac > 0.0 && feature_frac <= 1.0)) throw ConfigError("forest.feature_frac", "must lie in (0, 1]");
  }
};

class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  RegressionTree() = default;
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  // Goes left when x[feature] <= threshold.
  double predict(std::span<const double> x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

class RegressionForest {
 public:
  RegressionForest() = default;
  RegressionForest(std::size_t features, std::vector<RegressionTree> trees)
      : features_(features), trees_(std::move(trees)) {}

  double predict(std::span<const double> x) const {
    if (x.size() != features_) {
      throw DomainError("predict: model expects " + std::to_string(features_) + " features, got " +
                        std::to_string(x.size()));
    }
    if (trees_.empty()) throw DomainError("predict: model has no trees");
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(x);
    return sum / static_cast<double>(trees_.size());
  }

  std::size_t feature_count() const noexcept { return features_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

 private:
  std::size_t features_ = 0;
  std::vector<RegressionTree> trees_;
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const ForestParams& params, Rng& rng)
      : data_(data), params_(params), rng_(rng), width_(data.features.front().size()) {}

  RegressionTree build(std::vector<std::size_t> samples) {
    grow(samples, 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  int grow(std::vector<std::size_t>& samples, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (auto s : samples) sum += data_.targets[s];
    const double n = static_cast<double>(samples.size());
    nodes_[static_cast<std::size_t>(id)].value = sum / n;

    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
    if (depth >= params_.max_depth || samples.size() < 2 * min_leaf) return id;
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(), [&](auto a, auto b) {
      return data_.targets[a] < data_.targets[b];
    });
    if (data_.targets[*lo] == data_.targets[*hi]) return id;

    // Random feature subset for this split.
    std::vector<std::size_t> features(width_);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const auto take = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(params_.feature_frac * static_cast<double>(width_))), 1, width_);
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(features[i], features[i + rng_.below(width_ - i)]);
    }
    features.resize(take);

    int best_feature = -1;
    double best_gain = 0.0;
    double best_threshold = 0.0;
    const double parent_score = sum * sum / n;
    std::vector<std::size_t> order = samples;
    for (std::size_t f : features) {
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return data_.features[a][f] < data_.features[b][f];
      });
      double left_sum = 0.0;
      for (std::size_t i = 1; i < order.size(); ++i) {
        left_sum += data_.targets[order[i - 1]];
        const double xl = data_.features[order[i - 1]][f];
        const double xr = data_.features[order[i]][f];
        if (i < min_leaf || order.size() - i < min_leaf || !(xl < xr)) continue;
        const double nl = static_cast<double>(i);
        const double nr = n - nl;
        const double right_sum = sum - left_sum;
        const double gain = left_sum * left_sum / nl + right_sum * right_sum / nr - parent_score;
        if (gain > best_gain * (1.0 + 1e-12) + 1e-15) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          double mid = 0.5 * (xl + xr);
          if (!(mid < xr)) mid = xl;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto s : samples) {
      (data_.features[s][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const TrainingSet& data_;
  const ForestParams& params_;
  Rng& rng_;
  std::size_t width_;
  std::vector<RegressionTree::Node> nodes_;
};

}  // namespace detail

// Fits each tree on a bootstrap resample with its own seeded stream, so the
// model is identical for any thread count.
inline RegressionForest train(const TrainingSet& data, const ForestParams& params, std::uint64_t seed,
                              unsigned threads = 1) {
  if (data.empty()) throw TrainingError("cannot train on an empty training set");
  params.validate();
  const std::size_t width = data.features.front().size();
  for (const auto& x : data.features) {
    if (x.size() != width) throw TrainingError("training examples have inconsistent feature counts");
  }
  std::vector<RegressionTree> trees(static_cast<std::size_t>(params.n_trees));
  parallel_for(trees.size(), threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> bag(data.size());
    for (auto& s : bag) s = static_cast<std::size_t>(rng.below(data.size()));
    std::sort(bag.begin(), bag.end());
    detail::TreeBuilder builder(data, params, rng);
    trees[t] = builder.build(std::move(bag));
  });
  return RegressionForest(width, std::move(trees));
}

inline double predict(const RegressionForest& model, std::span<const double> features) {
  return model.predict(features);
}

}  // namespace noc3d
