#include "emoxai/multilabel.h"

#include <fstream>
#include <sstream>

#include "emoxai/error.h"
#include "emoxai/hash.h"
#include "emoxai/text.h"

namespace emoxai {

nlohmann::json classifier_config_json(const ClassifierConfig& config) {
  nlohmann::json doc = {{"family", family_name(config.family)}, {"seed", config.seed}};
  switch (config.family) {
    case Family::kLinearSvm:
      doc["svm"] = {{"lambda", config.svm.lambda}, {"epochs", config.svm.epochs}};
      break;
    case Family::kKnn:
      doc["knn"] = {{"k", config.knn.k}, {"distance", distance_name(config.knn.distance)}};
      break;
    case Family::kDecisionTree:
      doc["tree"] = tree_config_json(config.tree);
      break;
    case Family::kRandomForest:
      doc["forest"] = {{"n_trees", config.forest.n_trees},
                       {"tree", tree_config_json(config.forest.tree)},
                       {"max_features", config.forest.max_features == MaxFeaturesRule::kSqrt ? "sqrt" : "all"},
                       {"bootstrap", config.forest.bootstrap}};
      break;
    case Family::kAdaBoost:
      doc["adaboost"] = {{"n_estimators", config.adaboost.n_estimators},
                         {"max_depth", config.adaboost.max_depth},
                         {"min_samples_leaf", config.adaboost.min_samples_leaf}};
      break;
    case Family::kConstant:
      doc["constant_score"] = config.constant_score;
      break;
  }
  return doc;
}

std::unique_ptr<BinaryClassifier> train_binary(const FeatureMatrix& x, const BinaryLabels& y,
                                               const ClassifierConfig& config, std::uint64_t seed) {
  switch (config.family) {
    case Family::kLinearSvm: {
      SvmConfig c = config.svm;
      c.seed = seed;
      return std::make_unique<LinearSvmModel>(LinearSvmModel::fit(x, y, c));
    }
    case Family::kKnn:
      return std::make_unique<KnnModel>(KnnModel::fit(x, y, config.knn));
    case Family::kDecisionTree:
      return std::make_unique<TreeModel>(TreeModel::fit(x, y, config.tree));
    case Family::kRandomForest: {
      ForestConfig c = config.forest;
      c.seed = seed;
      return std::make_unique<ForestModel>(ForestModel::fit(x, y, c));
    }
    case Family::kAdaBoost: {
      AdaBoostConfig c = config.adaboost;
      c.seed = seed;
      return std::make_unique<AdaBoostModel>(AdaBoostModel::fit(x, y, c));
    }
    case Family::kConstant:
      return std::make_unique<ConstantClassifier>(config.constant_score);
  }
  throw ConfigError("unknown classifier family");
}

FeaturePipeline::FeaturePipeline(TfidfModel tfidf, std::optional<PcaModel> pca)
    : tfidf_(std::move(tfidf)), pca_(std::move(pca)) {
  if (pca_ && pca_->input_dim() != tfidf_.dim()) {
    throw DataError("PCA input dimension does not match the TF-IDF vocabulary");
  }
  tfidf_id_ = hex_digest(tfidf_.to_json().dump());
  if (pca_) pca_id_ = hex_digest(pca_->to_json().dump());
}

FeaturePipeline FeaturePipeline::fit(const std::vector<std::string>& raw_texts, const PipelineConfig& config) {
  std::vector<std::string> docs;
  docs.reserve(raw_texts.size());
  for (const std::string& t : raw_texts) docs.push_back(preprocess(t));
  TfidfModel tfidf = TfidfModel::fit(docs, config.tfidf);
  std::optional<PcaModel> pca;
  if (config.pca) pca = PcaModel::fit(tfidf.transform_all(docs), *config.pca);
  return FeaturePipeline(std::move(tfidf), std::move(pca));
}

SparseVector FeaturePipeline::featurize(std::string_view raw_text) const {
  SparseVector v = tfidf_.transform(preprocess(raw_text));
  if (!pca_) return v;
  return SparseVector::from_dense(pca_->project(v));
}

FeatureMatrix FeaturePipeline::featurize_all(const std::vector<std::string>& raw_texts) const {
  FeatureMatrix out;
  out.dim = output_dim();
  out.rows.reserve(raw_texts.size());
  for (const std::string& t : raw_texts) out.rows.push_back(featurize(t));
  return out;
}

nlohmann::json FeaturePipeline::to_json() const {
  return {{"tfidf", tfidf_.to_json()},
          {"tfidf_id", tfidf_id_},
          {"pca", pca_ ? pca_->to_json() : nlohmann::json()},
          {"pca_id", pca_id_}};
}

FeaturePipeline FeaturePipeline::from_json(const nlohmann::json& doc) {
  std::optional<PcaModel> pca;
  if (!doc.at("pca").is_null()) pca = PcaModel::from_json(doc.at("pca"));
  FeaturePipeline pipeline(TfidfModel::from_json(doc.at("tfidf")), std::move(pca));
  if (pipeline.tfidf_id_ != doc.at("tfidf_id").get<std::string>() ||
      pipeline.pca_id_ != doc.at("pca_id").get<std::string>()) {
    throw DataError("feature pipeline ids do not match their documents");
  }
  return pipeline;
}

MultiLabelModel::MultiLabelModel(FeaturePipeline pipeline, ClassifierConfig config,
                                 std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> classifiers,
                                 std::array<bool, kNumEmotions> fallback)
    : pipeline_(std::move(pipeline)),
      config_(config),
      classifiers_(std::move(classifiers)),
      fallback_(fallback) {
  for (const auto& c : classifiers_) {
    if (!c) throw DataError("multi-label model is missing a classifier");
  }
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    if (fallback_[l]) continue;
    const auto* knn = dynamic_cast<const KnnModel*>(classifiers_[l].get());
    if (!knn || (shared_knn_ && (knn->index() != shared_knn_->index() || knn->config().k != shared_knn_->config().k ||
                                 knn->config().distance != shared_knn_->config().distance))) {
      shared_knn_ = nullptr;
      break;
    }
    if (!shared_knn_) shared_knn_ = knn;
  }
}

namespace {

std::array<double, kNumEmotions> score_all(const std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions>& classifiers,
                                           const std::array<bool, kNumEmotions>& fallback, const KnnModel* shared_knn,
                                           const SparseVector& x) {
  std::array<double, kNumEmotions> out{};
  if (!shared_knn) {
    for (std::size_t l = 0; l < kNumEmotions; ++l) out[l] = classifiers[l]->decision_score(x);
    return out;
  }
  const std::vector<Neighbor> neighbors = shared_knn->neighbors(x);
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    out[l] = fallback[l] ? classifiers[l]->decision_score(x)
                         : static_cast<const KnnModel&>(*classifiers[l]).vote(neighbors);
  }
  return out;
}

}  // namespace

std::array<double, kNumEmotions> MultiLabelModel::decision_scores(std::string_view raw_text) const {
  return score_all(classifiers_, fallback_, shared_knn_, pipeline_.featurize(raw_text));
}

double MultiLabelModel::decision_score(std::string_view raw_text, Emotion e) const {
  return classifiers_[index_of(e)]->decision_score(pipeline_.featurize(raw_text));
}

LabelVector MultiLabelModel::predict_features(const SparseVector& features) const {
  if (features.dim() != pipeline_.output_dim()) throw DataError("feature dimension does not match the pipeline");
  const auto scores = score_all(classifiers_, fallback_, shared_knn_, features);
  LabelVector out;
  for (std::size_t l = 0; l < kNumEmotions; ++l) out.values[l] = scores[l] > 0.0;
  return out;
}

LabelVector MultiLabelModel::predict(std::string_view raw_text) const {
  return predict_features(pipeline_.featurize(raw_text));
}

nlohmann::json MultiLabelModel::to_json() const {
  nlohmann::json labels = nlohmann::json::array();
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    labels.push_back({{"emotion", kEmotionNames[l]},
                      {"fallback", fallback_[l]},
                      {"requires", {{"tfidf_id", pipeline_.tfidf_id()}, {"pca_id", pipeline_.pca_id()}}},
                      {"classifier", shared_knn_ && !fallback_[l]
                                         ? static_cast<const KnnModel&>(*classifiers_[l]).to_json_shared()
                                         : classifiers_[l]->to_json()}});
  }
  nlohmann::json doc = {{"schema", kSchema},
                        {"pipeline", pipeline_.to_json()},
                        {"classifier_config", classifier_config_json(config_)},
                        {"labels", std::move(labels)},
                        {"metadata", metadata_}};
  if (shared_knn_) doc["knn_index"] = shared_knn_->index()->to_json();
  return doc;
}

namespace {

ClassifierConfig classifier_config_from_json(const nlohmann::json& doc) {
  ClassifierConfig c;
  const auto family = parse_family(doc.at("family").get<std::string>());
  if (!family) throw SchemaError("unknown classifier family");
  c.family = *family;
  c.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("svm")) {
    c.svm.lambda = doc["svm"].at("lambda").get<double>();
    c.svm.epochs = doc["svm"].at("epochs").get<std::size_t>();
  }
  if (doc.contains("knn")) {
    c.knn.k = doc["knn"].at("k").get<std::size_t>();
    c.knn.distance = parse_distance(doc["knn"].at("distance").get<std::string>()).value_or(Distance::kCosine);
  }
  if (doc.contains("tree")) c.tree = tree_config_from_json(doc["tree"]);
  if (doc.contains("forest")) {
    const auto& f = doc["forest"];
    c.forest.n_trees = f.at("n_trees").get<std::size_t>();
    c.forest.tree = tree_config_from_json(f.at("tree"));
    c.forest.max_features = f.at("max_features").get<std::string>() == "sqrt" ? MaxFeaturesRule::kSqrt
                                                                            : MaxFeaturesRule::kAll;
    c.forest.bootstrap = f.at("bootstrap").get<bool>();
  }
  if (doc.contains("adaboost")) {
    const auto& a = doc["adaboost"];
    c.adaboost.n_estimators = a.at("n_estimators").get<std::size_t>();
    c.adaboost.max_depth = a.at("max_depth").get<std::size_t>();
    c.adaboost.min_samples_leaf = a.at("min_samples_leaf").get<std::size_t>();
  }
  if (doc.contains("constant_score")) c.constant_score = doc["constant_score"].get<double>();
  return c;
}

}  // namespace

MultiLabelModel MultiLabelModel::from_json(const nlohmann::json& doc) {
  const std::string schema = doc.value("schema", "");
  if (schema != kSchema) {
    throw SchemaError("expected schema '" + std::string(kSchema) + "', found '" + schema + "'");
  }
  FeaturePipeline pipeline = FeaturePipeline::from_json(doc.at("pipeline"));
  const auto& labels = doc.at("labels");
  if (labels.size() != kNumEmotions) throw DataError("model must carry six label classifiers");
  std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> classifiers;
  std::array<bool, kNumEmotions> fallback{};
  std::shared_ptr<const KnnIndex> knn_index;
  if (doc.contains("knn_index")) knn_index = KnnIndex::from_json(doc["knn_index"]);
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    const auto& entry = labels[l];
    if (entry.at("emotion").get<std::string>() != kEmotionNames[l]) {
      throw DataError("label classifiers are not in canonical order");
    }
    const auto& req = entry.at("requires");
    if (req.at("tfidf_id").get<std::string>() != pipeline.tfidf_id() ||
        req.at("pca_id").get<std::string>() != pipeline.pca_id()) {
      throw DataError("classifier for '" + std::string(kEmotionNames[l]) +
                      "' was trained on a different feature pipeline");
    }
    fallback[l] = entry.at("fallback").get<bool>();
    const auto& c = entry.at("classifier");
    if (c.value("family", "") == family_name(Family::kKnn) && c.at("params").value("shared_index", false)) {
      if (!knn_index) throw DataError("KNN classifier refers to a missing shared index");
      classifiers[l] = std::make_unique<KnnModel>(KnnModel::from_json(c, knn_index));
    } else {
      classifiers[l] = classifier_from_json(c);
    }
  }
  MultiLabelModel model(std::move(pipeline), classifier_config_from_json(doc.at("classifier_config")),
                        std::move(classifiers), fallback);
  model.metadata_ = doc.value("metadata", nlohmann::json::object());
  return model;
}

void MultiLabelModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path.string() + "'");
  out << to_json().dump() << '\n';
}

MultiLabelModel MultiLabelModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

MultiLabelModel train_multilabel(const std::vector<RawRecord>& train, const PipelineConfig& pipeline,
                                 const ClassifierConfig& config) {
  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const RawRecord& r : train) texts.push_back(r.text);
  return train_multilabel(train, FeaturePipeline::fit(texts, pipeline), config);
}

MultiLabelModel train_multilabel(const std::vector<RawRecord>& train, const FeaturePipeline& pipeline,
                                 const ClassifierConfig& config) {
  if (train.empty()) throw DataError("cannot train on an empty record list");
  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const RawRecord& r : train) texts.push_back(r.text);
  const FeatureMatrix x = pipeline.featurize_all(texts);

  std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> classifiers;
  std::array<bool, kNumEmotions> fallback{};
  std::shared_ptr<const KnnIndex> knn_index;
  if (config.family == Family::kKnn) knn_index = KnnIndex::build(x);
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    BinaryLabels y;
    y.reserve(train.size());
    std::size_t positives = 0;
    for (const RawRecord& r : train) {
      y.push_back(r.labels.values[l]);
      positives += r.labels.values[l];
    }
    if (config.family != Family::kConstant && (positives == 0 || positives == train.size())) {
      fallback[l] = true;
      classifiers[l] = std::make_unique<ConstantClassifier>(positives == 0 ? -1.0 : 1.0);
      continue;
    }
    if (knn_index) {
      classifiers[l] = std::make_unique<KnnModel>(KnnModel::fit(knn_index, std::move(y), config.knn));
    } else {
      classifiers[l] = train_binary(x, y, config, derive_seed(config.seed, l));
    }
  }
  return MultiLabelModel(pipeline, config, std::move(classifiers), fallback);
}

}  // namespace emoxai
