#ifndef EMOXAI_FOREST_H_
#define EMOXAI_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emoxai/tree.h"

namespace emoxai {

enum class MaxFeaturesRule { kSqrt, kAll };

struct ForestConfig {
  std::size_t n_trees = 100;
  TreeConfig tree;  // its max_features is derived from the rule
  MaxFeaturesRule max_features = MaxFeaturesRule::kSqrt;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

class ForestModel final : public BinaryClassifier {
 public:
  // Tree t draws its bootstrap sample and split features from a generator
  // seeded with derive_seed(seed, t).
  static ForestModel fit(const FeatureMatrix& x, const BinaryLabels& y, const ForestConfig& config);

  Family family() const override { return Family::kRandomForest; }
  // (positive votes - negative votes) / n_trees; a tied vote is negative.
  double decision_score(const SparseVector& x) const override;
  nlohmann::json to_json() const override;
  static ForestModel from_json(const nlohmann::json& doc);

  const std::vector<TreeModel>& trees() const { return trees_; }
  const ForestConfig& config() const { return config_; }

 private:
  ForestConfig config_;
  std::vector<TreeModel> trees_;
};

}  // namespace emoxai

#endif  // EMOXAI_FOREST_H_
