#include "emoxai/knn.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {
namespace {

double squared_difference(const SparseVector& a, const SparseVector& b) {
  const auto ai = a.indices();
  const auto av = a.values();
  const auto bi = b.indices();
  const auto bv = b.values();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ai.size() || j < bi.size()) {
    double diff;
    if (j == bi.size() || (i < ai.size() && ai[i] < bi[j])) {
      diff = av[i++];
    } else if (i == ai.size() || bi[j] < ai[i]) {
      diff = -bv[j++];
    } else {
      diff = av[i++] - bv[j++];
    }
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

std::string_view distance_name(Distance d) { return d == Distance::kCosine ? "cosine" : "euclidean"; }

std::optional<Distance> parse_distance(std::string_view name) {
  if (name == "cosine") return Distance::kCosine;
  if (name == "euclidean") return Distance::kEuclidean;
  return std::nullopt;
}

std::shared_ptr<const KnnIndex> KnnIndex::build(FeatureMatrix x) {
  auto index = std::make_shared<KnnIndex>();
  index->norms.reserve(x.size());
  for (const SparseVector& row : x.rows) index->norms.push_back(std::sqrt(row.squared_norm()));
  index->x = std::move(x);
  return index;
}

nlohmann::json KnnIndex::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const SparseVector& row : x.rows) {
    rows.push_back({std::vector<std::uint32_t>(row.indices().begin(), row.indices().end()),
                    std::vector<double>(row.values().begin(), row.values().end())});
  }
  return {{"dim", x.dim}, {"rows", std::move(rows)}};
}

std::shared_ptr<const KnnIndex> KnnIndex::from_json(const nlohmann::json& doc) {
  FeatureMatrix x;
  x.dim = doc.at("dim").get<std::size_t>();
  for (const auto& row : doc.at("rows")) {
    const auto idx = row.at(0).get<std::vector<std::uint32_t>>();
    const auto val = row.at(1).get<std::vector<double>>();
    if (idx.size() != val.size()) throw DataError("KNN row index/value length mismatch");
    std::vector<std::pair<std::uint32_t, double>> pairs;
    for (std::size_t i = 0; i < idx.size(); ++i) pairs.emplace_back(idx[i], val[i]);
    x.rows.push_back(SparseVector::from_pairs(x.dim, std::move(pairs)));
  }
  return build(std::move(x));
}

KnnModel KnnModel::fit(FeatureMatrix x, BinaryLabels y, const KnnConfig& config) {
  return fit(KnnIndex::build(std::move(x)), std::move(y), config);
}

KnnModel KnnModel::fit(std::shared_ptr<const KnnIndex> index, BinaryLabels y, const KnnConfig& config) {
  if (!index || index->x.size() == 0) throw DataError("KNN needs a non-empty training set");
  if (index->x.size() != y.size()) throw DataError("feature rows and labels differ in length");
  if (config.k % 2 == 0 || config.k == 0) throw ConfigError("KNN k must be odd");
  if (config.k > index->x.size()) throw ConfigError("KNN k exceeds the training set size");
  KnnModel model;
  model.config_ = config;
  model.index_ = std::move(index);
  model.y_ = std::move(y);
  return model;
}

double KnnModel::distance(const SparseVector& x, double x_norm, std::size_t i) const {
  const SparseVector& row = index_->x.rows[i];
  if (config_.distance == Distance::kEuclidean) return std::sqrt(squared_difference(x, row));
  const double row_norm = index_->norms[i];
  if (x_norm == 0.0 || row_norm == 0.0) return 1.0;
  return 1.0 - x.dot(row) / (x_norm * row_norm);
}

std::vector<Neighbor> KnnModel::neighbors(const SparseVector& x) const {
  if (x.dim() != index_->x.dim) throw DataError("KNN input dimension mismatch");
  const double x_norm = std::sqrt(x.squared_norm());
  std::vector<Neighbor> all(size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = {distance(x, x_norm, i), i};
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  };
  const auto k = static_cast<std::ptrdiff_t>(config_.k);
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(config_.k);
  return all;
}

double KnnModel::vote(const std::vector<Neighbor>& neighbors) const {
  double score = 0.0;
  for (const Neighbor& n : neighbors) score += y_[n.index] ? 1.0 : -1.0;
  return score;
}

double KnnModel::decision_score(const SparseVector& x) const { return vote(neighbors(x)); }

nlohmann::json KnnModel::to_json() const {
  nlohmann::json doc = to_json_shared();
  doc["params"].erase("shared_index");
  doc["params"].update(index_->to_json());
  return doc;
}

nlohmann::json KnnModel::to_json_shared() const {
  std::vector<int> labels(y_.begin(), y_.end());
  return {{"family", family_name(family())},
          {"config", {{"k", config_.k}, {"distance", distance_name(config_.distance)}}},
          {"params", {{"labels", std::move(labels)}, {"shared_index", true}}}};
}

namespace {

KnnConfig knn_config_from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  KnnConfig config;
  config.k = c.at("k").get<std::size_t>();
  const auto distance = parse_distance(c.at("distance").get<std::string>());
  if (!distance) throw SchemaError("unknown KNN distance");
  config.distance = *distance;
  return config;
}

BinaryLabels knn_labels_from_json(const nlohmann::json& doc) {
  BinaryLabels y;
  for (int v : doc.at("params").at("labels").get<std::vector<int>>()) y.push_back(v != 0);
  return y;
}

}  // namespace

KnnModel KnnModel::from_json(const nlohmann::json& doc) {
  if (doc.at("params").value("shared_index", false)) throw DataError("KNN document refers to a shared index");
  return fit(KnnIndex::from_json(doc.at("params")), knn_labels_from_json(doc), knn_config_from_json(doc));
}

KnnModel KnnModel::from_json(const nlohmann::json& doc, std::shared_ptr<const KnnIndex> index) {
  if (!doc.at("params").value("shared_index", false)) return from_json(doc);
  return fit(std::move(index), knn_labels_from_json(doc), knn_config_from_json(doc));
}

}  // namespace emoxai
