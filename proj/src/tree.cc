#include "emoxai/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {
namespace {

// Split impurities closer than this are ties.
constexpr double kTieTolerance = 1e-12;

struct Entry {
  std::uint32_t feature;
  double value;
  double weight;
  double positive;
};

struct Run {
  double value;
  double weight;
  double positive;
  std::size_t count;
};

// Weighted Gini times node weight: 2 p (w - p) / w.
double scaled_gini(double weight, double positive) {
  if (weight <= 0.0) return 0.0;
  return 2.0 * positive * (weight - positive) / weight;
}

double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return (m >= b) ? a : m;
}

}  // namespace

SampleSet SampleSet::all(std::size_t n) {
  SampleSet s;
  s.rows.resize(n);
  std::iota(s.rows.begin(), s.rows.end(), 0);
  s.weights.assign(n, 1.0);
  return s;
}

std::optional<Split> find_best_split(const FeatureMatrix& x, const BinaryLabels& y,
                                     const SampleSet& samples, std::size_t min_samples_leaf,
                                     std::optional<std::size_t> max_features, Rng* rng) {
  const std::size_t count = samples.rows.size();
  if (count < 2 * std::max<std::size_t>(min_samples_leaf, 1)) return std::nullopt;

  // Non-constant features of this node, in feature order. A feature varies
  // when it has two distinct stored values or some rows leave it implicit.
  struct FeatureRange {
    std::size_t stored = 0;
    double low = 0.0;
    double high = 0.0;
  };
  thread_local std::vector<FeatureRange> ranges;
  thread_local std::vector<std::uint8_t> chosen;
  if (ranges.size() < x.dim) {
    ranges.resize(x.dim);
    chosen.resize(x.dim, 0);
  }
  std::vector<std::uint32_t> touched;
  for (const std::size_t r : samples.rows) {
    const auto idx = x.rows[r].indices();
    const auto val = x.rows[r].values();
    for (std::size_t e = 0; e < idx.size(); ++e) {
      FeatureRange& fr = ranges[idx[e]];
      if (fr.stored++ == 0) {
        touched.push_back(idx[e]);
        fr.low = fr.high = val[e];
      } else {
        fr.low = std::min(fr.low, val[e]);
        fr.high = std::max(fr.high, val[e]);
      }
    }
  }
  std::sort(touched.begin(), touched.end());
  std::vector<std::uint32_t> varying;
  for (const std::uint32_t f : touched) {
    const FeatureRange& fr = ranges[f];
    if (fr.low != fr.high || fr.stored < count) varying.push_back(f);
    ranges[f] = FeatureRange{};
  }
  if (max_features && *max_features < varying.size()) {
    // Partial Fisher-Yates draw, then restore feature order for tie-breaking.
    for (std::size_t a = 0; a < *max_features; ++a) {
      const std::size_t b = a + static_cast<std::size_t>(rng->uniform_index(varying.size() - a));
      std::swap(varying[a], varying[b]);
    }
    varying.resize(*max_features);
    std::sort(varying.begin(), varying.end());
  }
  for (const std::uint32_t f : varying) chosen[f] = 1;

  double total_weight = 0.0, total_positive = 0.0;
  std::vector<Entry> entries;
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t r = samples.rows[s];
    const double w = samples.weights[s];
    const double p = y[r] ? w : 0.0;
    total_weight += w;
    total_positive += p;
    const auto idx = x.rows[r].indices();
    const auto val = x.rows[r].values();
    for (std::size_t e = 0; e < idx.size(); ++e) {
      if (chosen[idx[e]]) entries.push_back({idx[e], val[e], w, p});
    }
  }
  for (const std::uint32_t f : varying) chosen[f] = 0;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
  });

  // Group entries per feature and collapse equal values into runs, with the
  // implicit zero block inserted in value order.
  struct FeatureRuns {
    std::uint32_t feature;
    std::vector<Run> runs;
  };
  std::vector<FeatureRuns> candidates;
  for (std::size_t i = 0; i < entries.size();) {
    const std::uint32_t f = entries[i].feature;
    FeatureRuns fr{f, {}};
    std::size_t n_sum = 0;
    bool zero_done = false;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].feature == f; ++j) n_sum += 1;
    const std::size_t zero_count = count - n_sum;
    double group_w = 0.0, group_p = 0.0;
    for (std::size_t e = i; e < j; ++e) {
      group_w += entries[e].weight;
      group_p += entries[e].positive;
    }
    const Run zero_run{0.0, total_weight - group_w, total_positive - group_p, zero_count};
    for (std::size_t e = i; e < j;) {
      const double v = entries[e].value;
      if (!zero_done && zero_count > 0 && v > 0.0) {
        fr.runs.push_back(zero_run);
        zero_done = true;
      }
      Run run{v, 0.0, 0.0, 0};
      for (; e < j && entries[e].value == v; ++e) {
        run.weight += entries[e].weight;
        run.positive += entries[e].positive;
        ++run.count;
      }
      fr.runs.push_back(run);
    }
    if (!zero_done && zero_count > 0) fr.runs.push_back(zero_run);
    candidates.push_back(std::move(fr));
    i = j;
  }

  std::optional<Split> best;
  for (const FeatureRuns& fr : candidates) {
    double left_w = 0.0, left_p = 0.0;
    std::size_t left_n = 0;
    for (std::size_t r = 0; r + 1 < fr.runs.size(); ++r) {
      left_w += fr.runs[r].weight;
      left_p += fr.runs[r].positive;
      left_n += fr.runs[r].count;
      const std::size_t right_n = count - left_n;
      if (left_n < min_samples_leaf || right_n < min_samples_leaf) continue;
      const double right_w = total_weight - left_w;
      const double right_p = total_positive - left_p;
      const double impurity =
          (scaled_gini(left_w, left_p) + scaled_gini(right_w, right_p)) / total_weight;
      if (!best || impurity < best->impurity - kTieTolerance) {
        best = Split{fr.feature, midpoint(fr.runs[r].value, fr.runs[r + 1].value), impurity};
      }
    }
  }
  return best;
}

TreeModel TreeModel::fit(const FeatureMatrix& x, const BinaryLabels& y, const TreeConfig& config) {
  return fit(x, y, config, SampleSet::all(x.size()), nullptr);
}

TreeModel TreeModel::fit(const FeatureMatrix& x, const BinaryLabels& y, const TreeConfig& config,
                         const SampleSet& samples, Rng* rng) {
  if (x.size() == 0 || samples.rows.empty()) throw DataError("cannot fit a tree on an empty training set");
  if (x.size() != y.size()) throw DataError("feature rows and labels differ in length");
  if (samples.rows.size() != samples.weights.size()) throw DataError("sample rows and weights differ in length");
  if (config.max_features && !rng) throw ConfigError("feature subsampling needs a random generator");

  TreeModel model;
  model.config_ = config;

  struct Pending {
    std::size_t node;
    std::size_t depth;
    SampleSet samples;
  };
  std::vector<Pending> stack;
  model.nodes_.push_back(TreeNode{});
  stack.push_back({0, 0, samples});
  while (!stack.empty()) {
    Pending work = std::move(stack.back());
    stack.pop_back();
    double w = 0.0, p = 0.0;
    for (std::size_t s = 0; s < work.samples.rows.size(); ++s) {
      w += work.samples.weights[s];
      if (y[work.samples.rows[s]]) p += work.samples.weights[s];
    }
    TreeNode& node = model.nodes_[work.node];
    node.samples = work.samples.rows.size();
    node.positive_fraction = w > 0.0 ? p / w : 0.0;

    const bool pure = p <= 0.0 || p >= w;
    const bool depth_limited = config.max_depth && work.depth >= *config.max_depth;
    if (pure || depth_limited) continue;
    const auto split =
        find_best_split(x, y, work.samples, config.min_samples_leaf, config.max_features, rng);
    if (!split) continue;

    SampleSet left, right;
    for (std::size_t s = 0; s < work.samples.rows.size(); ++s) {
      const std::size_t r = work.samples.rows[s];
      SampleSet& side = x.rows[r].at(split->feature) <= split->threshold ? left : right;
      side.rows.push_back(r);
      side.weights.push_back(work.samples.weights[s]);
    }
    const auto left_index = static_cast<std::int32_t>(model.nodes_.size());
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left_index;
    node.right = left_index + 1;
    model.nodes_.push_back(TreeNode{});
    model.nodes_.push_back(TreeNode{});
    stack.push_back({static_cast<std::size_t>(left_index + 1), work.depth + 1, std::move(right)});
    stack.push_back({static_cast<std::size_t>(left_index), work.depth + 1, std::move(left)});
  }
  return model;
}

double TreeModel::positive_probability(const SparseVector& x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& n = nodes_[i];
    if (static_cast<std::size_t>(n.feature) >= x.dim()) throw DataError("tree input dimension mismatch");
    i = static_cast<std::size_t>(x.at(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right);
  }
  return nodes_[i].positive_fraction;
}

double TreeModel::decision_score(const SparseVector& x) const { return positive_probability(x) - 0.5; }

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes_[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes_[i].right)] = depth[i] + 1;
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

nlohmann::json tree_config_json(const TreeConfig& config) {
  return {{"criterion", "gini"},
          {"max_depth", config.max_depth ? nlohmann::json(*config.max_depth) : nlohmann::json()},
          {"min_samples_leaf", config.min_samples_leaf},
          {"max_features", config.max_features ? nlohmann::json(*config.max_features) : nlohmann::json()}};
}

TreeConfig tree_config_from_json(const nlohmann::json& doc) {
  TreeConfig config;
  if (!doc.at("max_depth").is_null()) config.max_depth = doc.at("max_depth").get<std::size_t>();
  config.min_samples_leaf = doc.at("min_samples_leaf").get<std::size_t>();
  if (!doc.at("max_features").is_null()) config.max_features = doc.at("max_features").get<std::size_t>();
  return config;
}

nlohmann::json TreeModel::params_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : nodes_) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.positive_fraction, n.samples});
  }
  return {{"nodes", std::move(nodes)}};
}

TreeModel TreeModel::from_params(const nlohmann::json& params, const TreeConfig& config) {
  TreeModel model;
  model.config_ = config;
  for (const auto& n : params.at("nodes")) {
    TreeNode node;
    node.feature = n.at(0).get<std::int32_t>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<std::int32_t>();
    node.right = n.at(3).get<std::int32_t>();
    node.positive_fraction = n.at(4).get<double>();
    node.samples = n.at(5).get<std::size_t>();
    model.nodes_.push_back(node);
  }
  const auto size = static_cast<std::int32_t>(model.nodes_.size());
  if (size == 0) throw DataError("tree has no nodes");
  for (const TreeNode& n : model.nodes_) {
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size)) {
      throw DataError("tree node has an invalid child index");
    }
  }
  return model;
}

nlohmann::json TreeModel::to_json() const {
  return {{"family", family_name(family())}, {"config", tree_config_json(config_)}, {"params", params_json()}};
}

TreeModel TreeModel::from_json(const nlohmann::json& doc) {
  return from_params(doc.at("params"), tree_config_from_json(doc.at("config")));
}

}  // namespace emoxai
