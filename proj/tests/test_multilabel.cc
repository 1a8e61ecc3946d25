#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/multilabel.h"
#include "emoxai/text.h"
#include "toy_corpora.h"

namespace emoxai {
namespace {

ClassifierConfig family(Family f) {
  ClassifierConfig c;
  c.family = f;
  c.seed = 5;
  c.knn.k = 1;
  c.tree.min_samples_leaf = 1;
  c.forest.n_trees = 15;
  c.forest.tree.min_samples_leaf = 1;
  c.adaboost.n_estimators = 10;
  return c;
}

class KeywordCorpus : public ::testing::TestWithParam<Family> {};

TEST_P(KeywordCorpus, EachRecordGetsExactlyItsEmotion) {
  const auto records = testing_corpora::keyword_records();
  const auto model = train_multilabel(records, PipelineConfig{}, family(GetParam()));
  for (const auto& r : records) EXPECT_EQ(model.predict(r.text), r.labels) << r.text;
}

INSTANTIATE_TEST_SUITE_P(Families, KeywordCorpus,
                         ::testing::Values(Family::kLinearSvm, Family::kKnn, Family::kDecisionTree,
                                           Family::kRandomForest, Family::kAdaBoost),
                         [](const ::testing::TestParamInfo<Family>& info) {
                           return std::string(family_name(info.param));
                         });

TEST(MultiLabel, EmptyTextScoresTheZeroVector) {
  const auto records = testing_corpora::keyword_records();
  const auto model = train_multilabel(records, PipelineConfig{}, family(Family::kLinearSvm));
  const SparseVector zero(model.pipeline().output_dim());
  LabelVector expected;
  for (Emotion e : kEmotions) expected[e] = model.classifier(e).predict(zero);
  EXPECT_EQ(model.predict(""), expected);
  EXPECT_EQ(model.predict("।।! 😀"), expected);
}

TEST(MultiLabel, SingleClassLabelFallsBackToConstant) {
  auto records = testing_corpora::keyword_records();
  for (auto& r : records) r.labels[Emotion::kFear] = false;
  const auto model = train_multilabel(records, PipelineConfig{}, family(Family::kLinearSvm));
  EXPECT_TRUE(model.fallback()[index_of(Emotion::kFear)]);
  EXPECT_EQ(model.classifier(Emotion::kFear).family(), Family::kConstant);
  EXPECT_FALSE(model.predict("ভয়").values[index_of(Emotion::kFear)]);
}

TEST(MultiLabel, KnnLabelsShareOneIndex) {
  auto records = testing_corpora::keyword_records();
  for (auto& r : records) r.labels[Emotion::kFear] = false;
  ClassifierConfig c = family(Family::kKnn);
  c.knn.k = 3;
  const auto model = train_multilabel(records, PipelineConfig{}, c);

  const nlohmann::json doc = model.to_json();
  ASSERT_TRUE(doc.contains("knn_index"));
  EXPECT_EQ(doc["knn_index"]["rows"].size(), records.size());
  for (const auto& label : doc["labels"]) EXPECT_FALSE(label["classifier"]["params"].contains("rows"));

  // Scores equal those of independent single-label models on the same rows.
  std::vector<std::string> texts;
  for (const auto& r : records) texts.push_back(r.text);
  const FeatureMatrix x = model.pipeline().featurize_all(texts);
  const auto reloaded = MultiLabelModel::from_json(doc);
  const std::vector<std::string> probes = {"আনন্দ", "রাগ দুঃখ", "অবাক কথা", "কিছু না"};
  for (const auto& text : probes) {
    const auto scores = reloaded.decision_scores(text);
    for (Emotion e : kEmotions) {
      if (model.fallback()[index_of(e)]) continue;
      BinaryLabels y;
      for (const auto& r : records) y.push_back(r.labels[e]);
      const auto alone = KnnModel::fit(x, y, c.knn);
      EXPECT_EQ(scores[index_of(e)], alone.decision_score(model.pipeline().featurize(text))) << text;
    }
    EXPECT_EQ(reloaded.predict(text), model.predict(text));
  }
}

TEST(MultiLabel, SerializationRoundTripAndDeterminism) {
  const auto records = testing_corpora::keyword_records();
  PipelineConfig pc;
  pc.tfidf.ngrams = {1, 2};
  PcaConfig pca;
  pca.components = 4;
  pc.pca = pca;
  for (Family f : {Family::kLinearSvm, Family::kKnn, Family::kRandomForest, Family::kAdaBoost}) {
    const auto a = train_multilabel(records, pc, family(f));
    const auto b = train_multilabel(records, pc, family(f));
    const std::string dumped = a.to_json().dump();
    EXPECT_EQ(b.to_json().dump(), dumped);
    const auto back = MultiLabelModel::from_json(nlohmann::json::parse(dumped));
    EXPECT_EQ(back.to_json().dump(), dumped);
    for (const auto& r : records) EXPECT_EQ(back.decision_scores(r.text), a.decision_scores(r.text));
  }
}

TEST(MultiLabel, LoaderRefusesMismatchedDocuments) {
  const auto records = testing_corpora::keyword_records();
  const auto model = train_multilabel(records, PipelineConfig{}, family(Family::kLinearSvm));
  auto doc = model.to_json();
  doc["schema"] = "emoxai.model/2";
  EXPECT_THROW(MultiLabelModel::from_json(doc), SchemaError);
  doc = model.to_json();
  doc["labels"][3]["requires"]["tfidf_id"] = "0000000000000000";
  EXPECT_THROW(MultiLabelModel::from_json(doc), DataError);
}

}  // namespace
}  // namespace emoxai
