#ifndef EMOXAI_CLASSIFIER_H_
#define EMOXAI_CLASSIFIER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/sparse.h"

namespace emoxai {

enum class Family {
  kLinearSvm,
  kKnn,
  kDecisionTree,
  kRandomForest,
  kAdaBoost,
  // Fixed score; used for labels without both classes and for tests.
  kConstant,
};

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

using BinaryLabels = std::vector<bool>;

// predict(x) is exactly decision_score(x) > 0 for every family.
class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;

  virtual Family family() const = 0;
  virtual double decision_score(const SparseVector& x) const = 0;
  bool predict(const SparseVector& x) const { return decision_score(x) > 0.0; }

  // Document carrying "family", "config" and "params".
  virtual nlohmann::json to_json() const = 0;
};

// Rebuilds any family from its to_json() document.
std::unique_ptr<BinaryClassifier> classifier_from_json(const nlohmann::json& doc);

class ConstantClassifier final : public BinaryClassifier {
 public:
  explicit ConstantClassifier(double score) : score_(score) {}

  Family family() const override { return Family::kConstant; }
  double decision_score(const SparseVector&) const override { return score_; }
  nlohmann::json to_json() const override;

  double score() const { return score_; }

 private:
  double score_;
};

// Throws DataError unless labels match the row count and both classes occur.
void require_two_classes(const FeatureMatrix& x, const BinaryLabels& y);

}  // namespace emoxai

#endif  // EMOXAI_CLASSIFIER_H_
