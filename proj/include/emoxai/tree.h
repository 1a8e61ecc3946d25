#ifndef EMOXAI_TREE_H_
#define EMOXAI_TREE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "emoxai/classifier.h"
#include "emoxai/rng.h"

namespace emoxai {

struct TreeConfig {
  std::optional<std::size_t> max_depth;  // unset: unlimited
  std::size_t min_samples_leaf = 2;
  // Candidate features drawn per split; unset: every feature.
  std::optional<std::size_t> max_features;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double positive_fraction = 0.0;  // weighted; leaf probabilities are (1 - p, p)
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted Gini of the children, normalized by node weight
};

// Training rows as indices into a matrix, with repeats allowed (bootstrap),
// and one positive weight per entry.
struct SampleSet {
  std::vector<std::size_t> rows;
  std::vector<double> weights;

  static SampleSet all(std::size_t n);
};

// Best Gini split of the given samples among candidate features. Candidates
// are midpoints between consecutive distinct observed values; absent sparse
// entries count as 0. Ties go to the lowest feature, then lowest threshold.
// When max_features is set, that many non-constant features are drawn.
std::optional<Split> find_best_split(const FeatureMatrix& x, const BinaryLabels& y,
                                     const SampleSet& samples, std::size_t min_samples_leaf,
                                     std::optional<std::size_t> max_features, Rng* rng);

// CART classification tree grown greedily on weighted Gini impurity.
class TreeModel final : public BinaryClassifier {
 public:
  static TreeModel fit(const FeatureMatrix& x, const BinaryLabels& y, const TreeConfig& config);
  static TreeModel fit(const FeatureMatrix& x, const BinaryLabels& y, const TreeConfig& config,
                       const SampleSet& samples, Rng* rng);

  Family family() const override { return Family::kDecisionTree; }
  // Positive-class probability minus one half.
  double decision_score(const SparseVector& x) const override;
  nlohmann::json to_json() const override;
  static TreeModel from_json(const nlohmann::json& doc);

  double positive_probability(const SparseVector& x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;
  const TreeConfig& config() const { return config_; }

  nlohmann::json params_json() const;
  static TreeModel from_params(const nlohmann::json& params, const TreeConfig& config);

 private:
  TreeConfig config_;
  std::vector<TreeNode> nodes_;
};

nlohmann::json tree_config_json(const TreeConfig& config);
TreeConfig tree_config_from_json(const nlohmann::json& doc);

}  // namespace emoxai

#endif  // EMOXAI_TREE_H_
