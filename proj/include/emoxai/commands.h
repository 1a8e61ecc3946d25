#ifndef EMOXAI_COMMANDS_H_
#define EMOXAI_COMMANDS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/corpus.h"
#include "emoxai/eval.h"
#include "emoxai/experiment.h"
#include "emoxai/explain.h"

namespace emoxai {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Records of one dataset partitioned by a split.
struct PartitionedData {
  std::vector<RawRecord> train;
  std::vector<RawRecord> validation;
  std::vector<RawRecord> test;
  DatasetSplit split;
  std::size_t rejected_rows = 0;
};

PartitionedData load_partitioned(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& split_manifest = std::nullopt);

nlohmann::json split_to_json(const DatasetSplit& split, const ExperimentConfig& config);
DatasetSplit split_from_json(const nlohmann::json& doc);

// Labels predicted by the model for each record's raw text.
std::vector<LabelVector> predict_records(const MultiLabelModel& model, const std::vector<RawRecord>& records);
MetricsReport evaluate_records(const MultiLabelModel& model, const std::vector<RawRecord>& records,
                               bool subset_accuracy = false);

// Writes stats.json.
CorpusStats cmd_stats(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Writes split.json.
DatasetSplit cmd_split(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct TrainOptions {
  std::optional<Family> family;      // default: first configured family
  std::optional<NgramRange> ngrams;  // default: first grid entry
  std::optional<bool> pca;           // default: true only when [pca] mode = on
};

// Trains on the train subset and writes model.json and split.json.
std::filesystem::path cmd_train(const ExperimentConfig& config, const TrainOptions& options,
                                const std::filesystem::path& out_dir);

struct EvaluateOptions {
  std::filesystem::path model;
  std::string subset = "test";  // train | validation | test
  std::optional<std::filesystem::path> split_manifest;
};

// Writes metrics.json and metrics.csv.
MetricsReport cmd_evaluate(const ExperimentConfig& config, const EvaluateOptions& options,
                           const std::filesystem::path& out_dir);

// Writes explanation.json and prints the ranked words.
Explanation cmd_explain(const std::filesystem::path& model_path, const std::string& text, Emotion label,
                        const LimeConfig& lime, const std::filesystem::path& out_dir, std::ostream& out);

struct SweepCell {
  std::string id;
  Family family = Family::kLinearSvm;
  NgramRange ngrams;
  bool pca = false;
  bool boosting_table = false;
  std::string column;
  std::string row;

  bool ok = false;
  std::string error;
  MetricsReport test;
  MetricsReport validation;
  nlohmann::json selected_config;
  std::string artifact;  // relative to the output directory
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::string results_table;
  std::string boosting_table;
};

// Runs every grid cell, writes results.csv, boosting.csv, results.json,
// split.json and models/<cell>.json. Failed cells are recorded as ERROR.
SweepResult cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

// Stable JSON writer used by every output file.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace emoxai

#endif  // EMOXAI_COMMANDS_H_
