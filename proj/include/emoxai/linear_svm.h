#ifndef EMOXAI_LINEAR_SVM_H_
#define EMOXAI_LINEAR_SVM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "emoxai/classifier.h"

namespace emoxai {

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
};

// L2-regularized hinge loss with the bias folded in as a constant feature,
// so the bias is regularized too.
class LinearSvmModel final : public BinaryClassifier {
 public:
  // Pegasos: seeded per-epoch shuffles, step 1/(lambda t), projection onto
  // the ball of radius 1/sqrt(lambda). Returns the epoch-end iterate with the
  // lowest objective, starting from the zero vector. Throws DataError on
  // single-class input.
  static LinearSvmModel fit(const FeatureMatrix& x, const BinaryLabels& y, const SvmConfig& config);

  LinearSvmModel(std::vector<double> weights, double bias, SvmConfig config)
      : weights_(std::move(weights)), bias_(bias), config_(config) {}

  Family family() const override { return Family::kLinearSvm; }
  double decision_score(const SparseVector& x) const override;
  nlohmann::json to_json() const override;
  static LinearSvmModel from_json(const nlohmann::json& doc);

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const SvmConfig& config() const { return config_; }

 private:
  std::vector<double> weights_;
  double bias_;
  SvmConfig config_;
};

// lambda/2 (|w|^2 + b^2) + mean hinge loss.
double svm_objective(std::span<const double> weights, double bias, const FeatureMatrix& x,
                     const BinaryLabels& y, double lambda);

}  // namespace emoxai

#endif  // EMOXAI_LINEAR_SVM_H_
