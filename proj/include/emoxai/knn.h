#ifndef EMOXAI_KNN_H_
#define EMOXAI_KNN_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "emoxai/classifier.h"

namespace emoxai {

enum class Distance { kCosine, kEuclidean };

std::string_view distance_name(Distance d);
std::optional<Distance> parse_distance(std::string_view name);

struct KnnConfig {
  std::size_t k = 5;
  Distance distance = Distance::kCosine;
};

struct Neighbor {
  double distance = 0.0;
  std::size_t index = 0;
};

// Training rows and their norms. The six per-label models of a multi-label
// KNN share one index, so the rows are stored and searched once.
struct KnnIndex {
  FeatureMatrix x;
  std::vector<double> norms;

  static std::shared_ptr<const KnnIndex> build(FeatureMatrix x);
  nlohmann::json to_json() const;
  static std::shared_ptr<const KnnIndex> from_json(const nlohmann::json& doc);
};

class KnnModel final : public BinaryClassifier {
 public:
  // Requires an odd k no larger than the training set.
  static KnnModel fit(FeatureMatrix x, BinaryLabels y, const KnnConfig& config);
  static KnnModel fit(std::shared_ptr<const KnnIndex> index, BinaryLabels y, const KnnConfig& config);

  Family family() const override { return Family::kKnn; }
  // Positive minus negative votes among the k nearest.
  double decision_score(const SparseVector& x) const override;
  // The same score from neighbors already found on this model's index.
  double vote(const std::vector<Neighbor>& neighbors) const;

  // Self-contained document with the training rows inline.
  nlohmann::json to_json() const override;
  static KnnModel from_json(const nlohmann::json& doc);
  // Labels only; the rows come from an index stored alongside.
  nlohmann::json to_json_shared() const;
  static KnnModel from_json(const nlohmann::json& doc, std::shared_ptr<const KnnIndex> index);

  // The k nearest, ordered by distance then training index.
  std::vector<Neighbor> neighbors(const SparseVector& x) const;
  double distance(const SparseVector& x, double x_norm, std::size_t i) const;

  const KnnConfig& config() const { return config_; }
  const std::shared_ptr<const KnnIndex>& index() const { return index_; }
  std::size_t size() const { return index_->x.size(); }

 private:
  KnnModel() = default;

  KnnConfig config_;
  std::shared_ptr<const KnnIndex> index_;
  BinaryLabels y_;
};

}  // namespace emoxai

#endif  // EMOXAI_KNN_H_
