#include "emoxai/adaboost.h"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {

double stage_weight(double weighted_error) {
  return 0.5 * std::log((1.0 - weighted_error) / weighted_error);
}

AdaBoostModel AdaBoostModel::fit(const FeatureMatrix& x, const BinaryLabels& y, const AdaBoostConfig& config,
                                 std::vector<BoostingRound>* trace) {
  require_two_classes(x, y);
  if (config.n_estimators < 1) throw ConfigError("AdaBoost needs at least one estimator");
  if (config.max_depth < 1) throw ConfigError("AdaBoost weak-tree depth must be at least 1");
  const std::size_t n = x.size();
  TreeConfig weak;
  weak.max_depth = config.max_depth;
  weak.min_samples_leaf = config.min_samples_leaf;

  AdaBoostModel model;
  model.config_ = config;
  SampleSet samples = SampleSet::all(n);
  std::fill(samples.weights.begin(), samples.weights.end(), 1.0 / static_cast<double>(n));
  std::vector<double> ensemble(n, 0.0);
  std::vector<double> h(n);

  for (std::size_t m = 0; m < config.n_estimators; ++m) {
    TreeModel tree = TreeModel::fit(x, y, weak, samples, nullptr);
    double error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = tree.predict(x.rows[i]) ? 1.0 : -1.0;
      if ((h[i] > 0.0) != y[i]) error += samples.weights[i];
    }
    BoostingRound round;
    round.weighted_error = error;
    if (error >= 0.5) {
      if (trace) {
        round.weights = samples.weights;
        round.weight_sum = std::accumulate(samples.weights.begin(), samples.weights.end(), 0.0);
        trace->push_back(std::move(round));
      }
      break;
    }
    const bool perfect = error <= 0.0;
    const double alpha = perfect ? kPerfectStageWeight : stage_weight(error);
    model.stages_.push_back({std::move(tree), alpha});

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y[i] ? 1.0 : -1.0;
      samples.weights[i] *= std::exp(-alpha * yi * h[i]);
      sum += samples.weights[i];
      ensemble[i] += alpha * h[i];
    }
    for (double& w : samples.weights) w /= sum;

    if (trace) {
      round.alpha = alpha;
      round.kept = true;
      round.weights = samples.weights;
      round.weight_sum = std::accumulate(samples.weights.begin(), samples.weights.end(), 0.0);
      std::size_t wrong = 0;
      for (std::size_t i = 0; i < n; ++i) wrong += (ensemble[i] > 0.0) != y[i];
      round.ensemble_error = static_cast<double>(wrong) / static_cast<double>(n);
      trace->push_back(std::move(round));
    }
    if (perfect) break;
  }
  return model;
}

double AdaBoostModel::decision_score(const SparseVector& x) const {
  double score = 0.0;
  for (const Stage& s : stages_) score += s.alpha * (s.tree.predict(x) ? 1.0 : -1.0);
  return score;
}

nlohmann::json AdaBoostModel::to_json() const {
  nlohmann::json stages = nlohmann::json::array();
  for (const Stage& s : stages_) stages.push_back({{"alpha", s.alpha}, {"tree", s.tree.params_json()}});
  return {{"family", family_name(family())},
          {"config",
           {{"n_estimators", config_.n_estimators},
            {"max_depth", config_.max_depth},
            {"min_samples_leaf", config_.min_samples_leaf},
            {"seed", config_.seed}}},
          {"params", {{"stages", std::move(stages)}}}};
}

AdaBoostModel AdaBoostModel::from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  AdaBoostModel model;
  model.config_.n_estimators = c.at("n_estimators").get<std::size_t>();
  model.config_.max_depth = c.at("max_depth").get<std::size_t>();
  model.config_.min_samples_leaf = c.at("min_samples_leaf").get<std::size_t>();
  model.config_.seed = c.at("seed").get<std::uint64_t>();
  TreeConfig weak;
  weak.max_depth = model.config_.max_depth;
  weak.min_samples_leaf = model.config_.min_samples_leaf;
  for (const auto& s : doc.at("params").at("stages")) {
    const double alpha = s.at("alpha").get<double>();
    if (!(alpha > 0.0)) throw DataError("AdaBoost stage weight must be positive");
    model.stages_.push_back({TreeModel::from_params(s.at("tree"), weak), alpha});
  }
  return model;
}

}  // namespace emoxai
