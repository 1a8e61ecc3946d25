#ifndef EMOXAI_EXPERIMENT_H_
#define EMOXAI_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/corpus.h"
#include "emoxai/eval.h"
#include "emoxai/explain.h"
#include "emoxai/multilabel.h"

namespace emoxai {

enum class PcaMode { kOff, kOn, kBoth };

// Hyperparameter values that may be given as comma-separated grids. When a
// grid has more than one point the sweep selects on the validation subset.
struct HyperGrid {
  std::vector<double> svm_lambda = {1e-4};
  std::vector<std::size_t> svm_epochs = {20};
  std::vector<std::size_t> knn_k = {5};
  std::vector<std::size_t> tree_max_depth = {0};  // 0: unlimited
  std::vector<std::size_t> forest_n_trees = {100};
  std::vector<std::size_t> adaboost_n_estimators = {50};
  std::vector<std::size_t> adaboost_max_depth = {2};
};

// Everything a command needs, parsed from an INI-style file. See
// configs/paper_style.ini for the documented schema.
struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::size_t jobs = 1;

  std::filesystem::path dataset;
  Schema schema;
  SplitRatios ratios;

  std::vector<NgramRange> ngram_grid = {{1, 1}, {2, 2}, {3, 3}};
  TfidfConfig tfidf;
  PcaMode pca_mode = PcaMode::kBoth;
  PcaConfig pca;

  std::vector<Family> families = {Family::kLinearSvm, Family::kKnn, Family::kRandomForest};
  Averaging metric = Averaging::kMacro;
  ClassifierConfig classifier;
  HyperGrid grid;

  bool boosting_pair = true;
  NgramRange boosting_ngrams = {1, 1};

  LimeConfig lime;
  bool subset_accuracy = false;

  // Classifier configs for one family: the cartesian product of its grid,
  // in file order, with seeds applied.
  std::vector<ClassifierConfig> candidates(Family family) const;
  PipelineConfig pipeline(NgramRange ngrams, bool with_pca) const;

  // Canonical document; its digest identifies the configuration.
  nlohmann::json to_json() const;
  std::string hash() const;
};

// Throws ConfigError on unknown sections or keys and malformed values.
// A relative dataset path resolves against base_dir.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Applies a new master seed to every seeded component.
void apply_seed(ExperimentConfig& config, std::uint64_t seed);

std::string ngram_label(NgramRange range);
NgramRange parse_ngram_range(const std::string& text);

}  // namespace emoxai

#endif  // EMOXAI_EXPERIMENT_H_
