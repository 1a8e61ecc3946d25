#ifndef EMOXAI_ADABOOST_H_
#define EMOXAI_ADABOOST_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "emoxai/tree.h"

namespace emoxai {

struct AdaBoostConfig {
  std::size_t n_estimators = 50;
  std::size_t max_depth = 2;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 0;
};

// Stage weight stored when a weak learner makes no weighted error.
inline const double kPerfectStageWeight = std::log(1e10);

// 0.5 ln((1 - error) / error).
double stage_weight(double weighted_error);

struct BoostingRound {
  double weighted_error = 0.0;
  double alpha = 0.0;  // 0 when the round was discarded
  bool kept = false;
  // Sample weights after reweighting and renormalization.
  std::vector<double> weights;
  double weight_sum = 0.0;
  // Unweighted training error of the ensemble after this round.
  double ensemble_error = 0.0;
};

// Discrete two-class AdaBoost over weighted CART trees.
class AdaBoostModel final : public BinaryClassifier {
 public:
  struct Stage {
    TreeModel tree;
    double alpha;
  };

  // Boosting stops at the first round with weighted error >= 0.5 (that tree
  // is discarded) or with error 0 (that tree is kept with
  // kPerfectStageWeight). Throws DataError on single-class input.
  static AdaBoostModel fit(const FeatureMatrix& x, const BinaryLabels& y, const AdaBoostConfig& config,
                           std::vector<BoostingRound>* trace = nullptr);

  Family family() const override { return Family::kAdaBoost; }
  // Sum of alpha_m * h_m(x), h_m in {-1, +1}.
  double decision_score(const SparseVector& x) const override;
  nlohmann::json to_json() const override;
  static AdaBoostModel from_json(const nlohmann::json& doc);

  const std::vector<Stage>& stages() const { return stages_; }
  const AdaBoostConfig& config() const { return config_; }

 private:
  AdaBoostConfig config_;
  std::vector<Stage> stages_;
};

}  // namespace emoxai

#endif  // EMOXAI_ADABOOST_H_
