#include "emoxai/forest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {

ForestModel ForestModel::fit(const FeatureMatrix& x, const BinaryLabels& y, const ForestConfig& config) {
  if (config.n_trees < 1) throw ConfigError("forest needs at least one tree");
  if (x.size() == 0) throw DataError("cannot fit a forest on an empty training set");
  ForestModel model;
  model.config_ = config;
  TreeConfig tree_config = config.tree;
  tree_config.max_features.reset();
  if (config.max_features == MaxFeaturesRule::kSqrt) {
    tree_config.max_features =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.dim)))));
  }
  const std::size_t n = x.size();
  model.trees_.reserve(config.n_trees);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng rng(derive_seed(config.seed, t));
    SampleSet samples;
    if (config.bootstrap) {
      samples.rows.reserve(n);
      for (std::size_t i = 0; i < n; ++i) samples.rows.push_back(rng.uniform_index(n));
      samples.weights.assign(n, 1.0);
    } else {
      samples = SampleSet::all(n);
    }
    model.trees_.push_back(TreeModel::fit(x, y, tree_config, samples, &rng));
  }
  return model;
}

double ForestModel::decision_score(const SparseVector& x) const {
  double votes = 0.0;
  for (const TreeModel& tree : trees_) votes += tree.predict(x) ? 1.0 : -1.0;
  return votes / static_cast<double>(trees_.size());
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const TreeModel& t : trees_) trees.push_back(t.params_json());
  return {{"family", family_name(family())},
          {"config",
           {{"n_trees", config_.n_trees},
            {"tree", tree_config_json(config_.tree)},
            {"max_features", config_.max_features == MaxFeaturesRule::kSqrt ? "sqrt" : "all"},
            {"bootstrap", config_.bootstrap},
            {"seed", config_.seed}}},
          {"params",
           {{"tree_max_features",
             trees_.empty() || !trees_.front().config().max_features
                 ? nlohmann::json()
                 : nlohmann::json(*trees_.front().config().max_features)},
            {"trees", std::move(trees)}}}};
}

ForestModel ForestModel::from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  ForestModel model;
  model.config_.n_trees = c.at("n_trees").get<std::size_t>();
  model.config_.tree = tree_config_from_json(c.at("tree"));
  const std::string rule = c.at("max_features").get<std::string>();
  if (rule != "sqrt" && rule != "all") throw SchemaError("unknown forest max_features rule '" + rule + "'");
  model.config_.max_features = rule == "sqrt" ? MaxFeaturesRule::kSqrt : MaxFeaturesRule::kAll;
  model.config_.bootstrap = c.at("bootstrap").get<bool>();
  model.config_.seed = c.at("seed").get<std::uint64_t>();
  TreeConfig tree_config = model.config_.tree;
  const auto& p = doc.at("params");
  tree_config.max_features.reset();
  if (!p.at("tree_max_features").is_null()) tree_config.max_features = p.at("tree_max_features").get<std::size_t>();
  for (const auto& t : p.at("trees")) model.trees_.push_back(TreeModel::from_params(t, tree_config));
  if (model.trees_.empty()) throw DataError("forest has no trees");
  return model;
}

}  // namespace emoxai
