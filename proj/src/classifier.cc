#include "emoxai/classifier.h"

#include <array>
#include <utility>

#include <nlohmann/json.hpp>

#include "emoxai/adaboost.h"
#include "emoxai/error.h"
#include "emoxai/forest.h"
#include "emoxai/knn.h"
#include "emoxai/linear_svm.h"
#include "emoxai/tree.h"

namespace emoxai {
namespace {

constexpr std::array<std::pair<Family, std::string_view>, 6> kFamilyNames = {{
    {Family::kLinearSvm, "linear_svm"},
    {Family::kKnn, "knn"},
    {Family::kDecisionTree, "decision_tree"},
    {Family::kRandomForest, "random_forest"},
    {Family::kAdaBoost, "adaboost"},
    {Family::kConstant, "constant"},
}};

}  // namespace

std::string_view family_name(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

nlohmann::json ConstantClassifier::to_json() const {
  return {{"family", family_name(family())}, {"config", nlohmann::json::object()}, {"params", {{"score", score_}}}};
}

std::unique_ptr<BinaryClassifier> classifier_from_json(const nlohmann::json& doc) {
  const std::string name = doc.at("family").get<std::string>();
  const auto family = parse_family(name);
  if (!family) throw SchemaError("unknown classifier family '" + name + "'");
  switch (*family) {
    case Family::kLinearSvm:
      return std::make_unique<LinearSvmModel>(LinearSvmModel::from_json(doc));
    case Family::kKnn:
      return std::make_unique<KnnModel>(KnnModel::from_json(doc));
    case Family::kDecisionTree:
      return std::make_unique<TreeModel>(TreeModel::from_json(doc));
    case Family::kRandomForest:
      return std::make_unique<ForestModel>(ForestModel::from_json(doc));
    case Family::kAdaBoost:
      return std::make_unique<AdaBoostModel>(AdaBoostModel::from_json(doc));
    case Family::kConstant:
      return std::make_unique<ConstantClassifier>(doc.at("params").at("score").get<double>());
  }
  throw SchemaError("unknown classifier family '" + name + "'");
}

void require_two_classes(const FeatureMatrix& x, const BinaryLabels& y) {
  if (x.size() != y.size()) throw DataError("feature rows and labels differ in length");
  bool pos = false, neg = false;
  for (bool v : y) (v ? pos : neg) = true;
  if (!pos || !neg) throw DataError("training labels contain a single class");
}

}  // namespace emoxai
