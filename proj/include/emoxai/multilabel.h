#ifndef EMOXAI_MULTILABEL_H_
#define EMOXAI_MULTILABEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "emoxai/adaboost.h"
#include "emoxai/classifier.h"
#include "emoxai/corpus.h"
#include "emoxai/decomp.h"
#include "emoxai/features.h"
#include "emoxai/forest.h"
#include "emoxai/knn.h"
#include "emoxai/labels.h"
#include "emoxai/linear_svm.h"
#include "emoxai/tree.h"

namespace emoxai {

struct PipelineConfig {
  TfidfConfig tfidf;
  std::optional<PcaConfig> pca;  // set: TF-IDF vectors are projected by PCA
};

struct ClassifierConfig {
  Family family = Family::kLinearSvm;
  SvmConfig svm;
  KnnConfig knn;
  TreeConfig tree;
  ForestConfig forest;
  AdaBoostConfig adaboost;
  double constant_score = -1.0;
  // Per-label training seeds are derived from this one.
  std::uint64_t seed = 0;
};

// Only the block that belongs to config.family, plus family and seed.
nlohmann::json classifier_config_json(const ClassifierConfig& config);

std::unique_ptr<BinaryClassifier> train_binary(const FeatureMatrix& x, const BinaryLabels& y,
                                               const ClassifierConfig& config, std::uint64_t seed);

// preprocess -> TF-IDF -> optional PCA.
class FeaturePipeline {
 public:
  // Fits on raw texts; each is preprocessed first.
  static FeaturePipeline fit(const std::vector<std::string>& raw_texts, const PipelineConfig& config);
  FeaturePipeline(TfidfModel tfidf, std::optional<PcaModel> pca);

  SparseVector featurize(std::string_view raw_text) const;
  FeatureMatrix featurize_all(const std::vector<std::string>& raw_texts) const;

  const TfidfModel& tfidf() const { return tfidf_; }
  const std::optional<PcaModel>& pca() const { return pca_; }
  std::size_t output_dim() const { return pca_ ? pca_->k() : tfidf_.dim(); }
  const std::string& tfidf_id() const { return tfidf_id_; }
  // Empty without PCA.
  const std::string& pca_id() const { return pca_id_; }

  nlohmann::json to_json() const;
  static FeaturePipeline from_json(const nlohmann::json& doc);

 private:
  TfidfModel tfidf_;
  std::optional<PcaModel> pca_;
  std::string tfidf_id_;
  std::string pca_id_;
};

// Binary relevance: six independent one-vs-rest classifiers over one shared
// feature pipeline, in canonical emotion order.
class MultiLabelModel {
 public:
  static constexpr std::string_view kSchema = "emoxai.model/1";

  MultiLabelModel(FeaturePipeline pipeline, ClassifierConfig config,
                  std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> classifiers,
                  std::array<bool, kNumEmotions> fallback);

  const FeaturePipeline& pipeline() const { return pipeline_; }
  const ClassifierConfig& config() const { return config_; }
  const BinaryClassifier& classifier(Emotion e) const { return *classifiers_[index_of(e)]; }
  // Labels trained as a constant because the training data had one class.
  const std::array<bool, kNumEmotions>& fallback() const { return fallback_; }

  std::array<double, kNumEmotions> decision_scores(std::string_view raw_text) const;
  double decision_score(std::string_view raw_text, Emotion e) const;
  LabelVector predict(std::string_view raw_text) const;
  LabelVector predict_features(const SparseVector& features) const;

  // Free-form provenance (config hash, seeds) embedded in the document.
  nlohmann::json& metadata() { return metadata_; }
  const nlohmann::json& metadata() const { return metadata_; }

  nlohmann::json to_json() const;
  // Throws SchemaError on a schema mismatch and DataError when a classifier
  // was trained on a different feature pipeline.
  static MultiLabelModel from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static MultiLabelModel load(const std::filesystem::path& path);

 private:
  FeaturePipeline pipeline_;
  ClassifierConfig config_;
  std::array<std::unique_ptr<BinaryClassifier>, kNumEmotions> classifiers_;
  std::array<bool, kNumEmotions> fallback_{};
  // Set when every trained label is a KNN over one shared index; the
  // neighbor search then runs once per input for all labels.
  const KnnModel* shared_knn_ = nullptr;
  nlohmann::json metadata_ = nlohmann::json::object();
};

MultiLabelModel train_multilabel(const std::vector<RawRecord>& train, const PipelineConfig& pipeline,
                                 const ClassifierConfig& config);
// Reuses an already fitted pipeline.
MultiLabelModel train_multilabel(const std::vector<RawRecord>& train, const FeaturePipeline& pipeline,
                                 const ClassifierConfig& config);

}  // namespace emoxai

#endif  // EMOXAI_MULTILABEL_H_
