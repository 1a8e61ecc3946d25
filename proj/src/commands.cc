#include "emoxai/commands.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/hash.h"
#include "emoxai/multilabel.h"

namespace emoxai {
namespace {

constexpr std::string_view kToolVersion = "emoxai 0.1.0";

nlohmann::json provenance(const ExperimentConfig& config) {
  return {{"tool", kToolVersion}, {"config_hash", config.hash()}, {"seed", config.seed}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<RawRecord> select(const std::vector<RawRecord>& records,
                              const std::unordered_map<std::string, std::size_t>& by_id,
                              const std::vector<std::string>& ids) {
  std::vector<RawRecord> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("split manifest references unknown record id '" + id + "'");
    out.push_back(records[it->second]);
  }
  return out;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string_view family_display(Family f) {
  switch (f) {
    case Family::kLinearSvm: return "Linear SVM";
    case Family::kKnn: return "KNN";
    case Family::kDecisionTree: return "Decision Tree";
    case Family::kRandomForest: return "Random Forest";
    case Family::kAdaBoost: return "AdaBoost";
    case Family::kConstant: return "Constant";
  }
  return "Unknown";
}

}  // namespace

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

nlohmann::json split_to_json(const DatasetSplit& split, const ExperimentConfig& config) {
  nlohmann::json best_effort = nlohmann::json::array();
  for (Emotion e : split.best_effort_labels) best_effort.push_back(emotion_name(e));
  return {{"schema", "emoxai.split/1"},
          {"seed", split.seed},
          {"ratios", {{"train", split.ratios.train}, {"test", split.ratios.test}, {"validation", split.ratios.validation}}},
          {"train_ids", split.train_ids},
          {"validation_ids", split.validation_ids},
          {"test_ids", split.test_ids},
          {"best_effort_labels", best_effort},
          {"provenance", provenance(config)}};
}

DatasetSplit split_from_json(const nlohmann::json& doc) {
  if (doc.value("schema", "") != "emoxai.split/1") throw SchemaError("not an emoxai split manifest");
  DatasetSplit split;
  split.seed = doc.at("seed").get<std::uint64_t>();
  const auto& r = doc.at("ratios");
  split.ratios = {r.at("train").get<double>(), r.at("test").get<double>(), r.at("validation").get<double>()};
  split.train_ids = doc.at("train_ids").get<std::vector<std::string>>();
  split.validation_ids = doc.at("validation_ids").get<std::vector<std::string>>();
  split.test_ids = doc.at("test_ids").get<std::vector<std::string>>();
  for (const auto& name : doc.at("best_effort_labels")) {
    if (auto e = parse_emotion(name.get<std::string>())) split.best_effort_labels.push_back(*e);
  }
  return split;
}

PartitionedData load_partitioned(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& split_manifest) {
  if (config.dataset.empty()) throw ConfigError("no dataset path configured ([dataset] path)");
  LoadResult loaded = load_dataset(config.dataset, config.schema);
  if (loaded.records.empty()) throw DataError("dataset has no valid records");
  PartitionedData data;
  data.rejected_rows = loaded.rejected.size();
  if (split_manifest) {
    data.split = split_from_json(nlohmann::json::parse(read_file(*split_manifest)));
  } else {
    data.split = stratified_split(loaded.records, config.ratios, config.seed);
  }
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < loaded.records.size(); ++i) by_id.emplace(loaded.records[i].id, i);
  data.train = select(loaded.records, by_id, data.split.train_ids);
  data.validation = select(loaded.records, by_id, data.split.validation_ids);
  data.test = select(loaded.records, by_id, data.split.test_ids);
  return data;
}

std::vector<LabelVector> predict_records(const MultiLabelModel& model, const std::vector<RawRecord>& records) {
  std::vector<LabelVector> out;
  out.reserve(records.size());
  for (const RawRecord& r : records) out.push_back(model.predict(r.text));
  return out;
}

MetricsReport evaluate_records(const MultiLabelModel& model, const std::vector<RawRecord>& records,
                               bool subset_accuracy) {
  std::vector<LabelVector> gold;
  gold.reserve(records.size());
  for (const RawRecord& r : records) gold.push_back(r.labels);
  return evaluate(predict_records(model, records), gold, subset_accuracy);
}

CorpusStats cmd_stats(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  if (config.dataset.empty()) throw ConfigError("no dataset path configured ([dataset] path)");
  const LoadResult loaded = load_dataset(config.dataset, config.schema);
  const CorpusStats stats = compute_stats(loaded.records);
  nlohmann::json per_label = nlohmann::json::object();
  for (std::size_t l = 0; l < kNumEmotions; ++l) per_label[std::string(kEmotionNames[l])] = stats.per_label_counts[l];
  nlohmann::json rejected = nlohmann::json::array();
  for (const RejectedRow& r : loaded.rejected) rejected.push_back({{"row", r.row}, {"reason", r.reason}});
  nlohmann::json top = nlohmann::json::array();
  for (const auto& [term, count] : stats.top_terms) top.push_back({term, count});
  write_json(out_dir / "stats.json",
             {{"schema", "emoxai.stats/1"},
              {"record_count", stats.record_count},
              {"per_label_counts", per_label},
              {"avg_sentences_per_entry", {{"mean", stats.sentences_per_entry.mean}, {"std", stats.sentences_per_entry.std}}},
              {"avg_words_per_sentence", {{"mean", stats.words_per_sentence.mean}, {"std", stats.words_per_sentence.std}}},
              {"multi_label_fraction", stats.multi_label_fraction},
              {"platform_shares", stats.platform_shares},
              {"top_terms", top},
              {"rejected_rows", rejected},
              {"provenance", provenance(config)}});
  return stats;
}

DatasetSplit cmd_split(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  if (config.dataset.empty()) throw ConfigError("no dataset path configured ([dataset] path)");
  const LoadResult loaded = load_dataset(config.dataset, config.schema);
  if (loaded.records.empty()) throw DataError("dataset has no valid records");
  DatasetSplit split = stratified_split(loaded.records, config.ratios, config.seed);
  write_json(out_dir / "split.json", split_to_json(split, config));
  return split;
}

std::filesystem::path cmd_train(const ExperimentConfig& config, const TrainOptions& options,
                                const std::filesystem::path& out_dir) {
  const PartitionedData data = load_partitioned(config);
  const Family family = options.family.value_or(config.families.front());
  const NgramRange ngrams = options.ngrams.value_or(config.ngram_grid.front());
  const bool pca = options.pca.value_or(config.pca_mode == PcaMode::kOn);
  const auto candidates = config.candidates(family);
  if (candidates.size() != 1) {
    throw ConfigError("train takes single hyperparameter values; use sweep for grids");
  }
  MultiLabelModel model = train_multilabel(data.train, config.pipeline(ngrams, pca), candidates.front());
  model.metadata() = {{"provenance", provenance(config)},
                      {"split_seed", data.split.seed},
                      {"ngrams", {ngrams.low, ngrams.high}},
                      {"pca", pca},
                      {"train_records", data.train.size()}};
  write_json(out_dir / "split.json", split_to_json(data.split, config));
  const auto path = out_dir / "model.json";
  std::filesystem::create_directories(out_dir);
  model.save(path);
  return path;
}

MetricsReport cmd_evaluate(const ExperimentConfig& config, const EvaluateOptions& options,
                           const std::filesystem::path& out_dir) {
  const MultiLabelModel model = MultiLabelModel::load(options.model);
  const PartitionedData data = load_partitioned(config, options.split_manifest);
  const std::vector<RawRecord>* subset = nullptr;
  if (options.subset == "train") subset = &data.train;
  else if (options.subset == "validation") subset = &data.validation;
  else if (options.subset == "test") subset = &data.test;
  else throw ConfigError("subset must be train, validation or test");
  const MetricsReport report = evaluate_records(model, *subset, config.subset_accuracy);
  nlohmann::json doc = report_to_json(report);
  doc["schema"] = "emoxai.metrics/1";
  doc["subset"] = options.subset;
  doc["model_digest"] = hex_digest(read_file(options.model));
  doc["split_seed"] = data.split.seed;
  doc["provenance"] = provenance(config);
  write_json(out_dir / "metrics.json", doc);
  write_text(out_dir / "metrics.csv", report_table(report));
  return report;
}

Explanation cmd_explain(const std::filesystem::path& model_path, const std::string& text, Emotion label,
                        const LimeConfig& lime, const std::filesystem::path& out_dir, std::ostream& out) {
  const MultiLabelModel model = MultiLabelModel::load(model_path);
  const Explanation e = explain_instance(model, text, label, lime);
  nlohmann::json doc = explanation_to_json(e);
  doc["model_digest"] = hex_digest(read_file(model_path));
  write_json(out_dir / "explanation.json", doc);
  out << "label " << emotion_name(label) << " score " << e.original_score << " ("
      << (e.original_score > 0.0 ? "" : "not ") << emotion_name(label) << ")\n";
  for (const FeatureWeight& f : e.features) out << f.word << '\t' << f.weight << '\n';
  return e;
}

SweepResult cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const PartitionedData data = load_partitioned(config);
  write_json(out_dir / "split.json", split_to_json(data.split, config));

  std::vector<bool> pca_variants;
  if (config.pca_mode != PcaMode::kOff) pca_variants.push_back(true);
  if (config.pca_mode != PcaMode::kOn) pca_variants.push_back(false);

  SweepResult result;
  std::vector<std::string> columns;
  for (Family family : config.families) {
    for (const NgramRange& ngrams : config.ngram_grid) {
      for (bool pca : pca_variants) {
        SweepCell cell;
        cell.family = family;
        cell.ngrams = ngrams;
        cell.pca = pca;
        cell.column = ngram_label(ngrams) + (pca ? " (PCA)" : "");
        cell.row = std::string(family_display(family));
        result.cells.push_back(cell);
        if (std::find(columns.begin(), columns.end(), cell.column) == columns.end()) columns.push_back(cell.column);
      }
    }
  }
  if (config.boosting_pair) {
    for (Family family : {Family::kAdaBoost, Family::kDecisionTree}) {
      SweepCell cell;
      cell.family = family;
      cell.ngrams = config.boosting_ngrams;
      cell.boosting_table = true;
      cell.column = ngram_label(config.boosting_ngrams);
      cell.row = family == Family::kAdaBoost ? "With AdaBoost" : "Without AdaBoost";
      result.cells.push_back(cell);
    }
  }
  for (SweepCell& cell : result.cells) {
    cell.id = std::string(family_name(cell.family)) + "__ng" + std::to_string(cell.ngrams.low) + "-" +
              std::to_string(cell.ngrams.high) + "__" + (cell.pca ? "pca" : "raw");
    cell.artifact = "models/" + cell.id + ".json";
  }

  // Pipelines are fitted once per feature configuration, in grid order.
  std::map<std::tuple<int, int, bool>, std::optional<FeaturePipeline>> pipelines;
  std::map<std::tuple<int, int, bool>, std::string> pipeline_errors;
  std::vector<std::string> train_texts;
  for (const RawRecord& r : data.train) train_texts.push_back(r.text);
  for (const SweepCell& cell : result.cells) {
    const auto key = std::make_tuple(cell.ngrams.low, cell.ngrams.high, cell.pca);
    if (pipelines.contains(key)) continue;
    log << "fitting features " << ngram_label(cell.ngrams) << (cell.pca ? " + PCA" : "") << '\n';
    try {
      pipelines[key] = FeaturePipeline::fit(train_texts, config.pipeline(cell.ngrams, cell.pca));
    } catch (const std::exception& e) {
      pipelines[key] = std::nullopt;
      pipeline_errors[key] = e.what();
    }
  }

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  auto run_cell = [&](SweepCell& cell) {
    const auto key = std::make_tuple(cell.ngrams.low, cell.ngrams.high, cell.pca);
    if (!pipelines.at(key)) {
      cell.error = "feature pipeline failed: " + pipeline_errors.at(key);
      return;
    }
    const FeaturePipeline& pipeline = *pipelines.at(key);
    const auto candidates = config.candidates(cell.family);
    std::optional<MultiLabelModel> best;
    double best_score = -1.0;
    for (const ClassifierConfig& candidate : candidates) {
      MultiLabelModel model = train_multilabel(data.train, pipeline, candidate);
      if (candidates.size() == 1) {
        best.emplace(std::move(model));
        break;
      }
      const double score = evaluate_records(model, data.validation).averaged(config.metric).f1;
      if (score > best_score) {
        best_score = score;
        best.emplace(std::move(model));
      }
    }
    cell.selected_config = classifier_config_json(best->config());
    cell.test = evaluate_records(*best, data.test, config.subset_accuracy);
    cell.validation = evaluate_records(*best, data.validation, config.subset_accuracy);
    best->metadata() = {{"provenance", provenance(config)},
                        {"split_seed", data.split.seed},
                        {"cell", cell.id},
                        {"ngrams", {cell.ngrams.low, cell.ngrams.high}},
                        {"pca", cell.pca},
                        {"train_records", data.train.size()}};
    std::filesystem::create_directories(out_dir / "models");
    best->save(out_dir / cell.artifact);
    cell.ok = true;
  };
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size()) return;
      SweepCell& cell = result.cells[i];
      {
        std::lock_guard lock(log_mutex);
        log << "running " << cell.id << '\n';
      }
      try {
        run_cell(cell);
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      if (!cell.ok) {
        std::lock_guard lock(log_mutex);
        log << "cell " << cell.id << " failed: " << cell.error << '\n';
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, result.cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  auto cell_value = [&](const SweepCell& c) {
    return c.ok ? fixed4(c.test.averaged(config.metric).f1) : std::string("ERROR");
  };
  std::string table = "model";
  for (const std::string& col : columns) table += "," + col;
  table += "\n";
  for (Family family : config.families) {
    table += std::string(family_display(family));
    for (const std::string& col : columns) {
      table += ",";
      for (const SweepCell& c : result.cells) {
        if (!c.boosting_table && c.family == family && c.column == col) table += cell_value(c);
      }
    }
    table += "\n";
  }
  result.results_table = table;
  write_text(out_dir / "results.csv", table);

  if (config.boosting_pair) {
    std::string boosting = "adaboost," + std::string(averaging_name(config.metric)) + "_f1\n";
    for (const SweepCell& c : result.cells) {
      if (c.boosting_table) boosting += c.row + "," + cell_value(c) + "\n";
    }
    result.boosting_table = boosting;
    write_text(out_dir / "boosting.csv", boosting);
  }

  nlohmann::json cells = nlohmann::json::array();
  for (const SweepCell& c : result.cells) {
    nlohmann::json entry = {{"id", c.id},
                            {"family", family_name(c.family)},
                            {"ngrams", {c.ngrams.low, c.ngrams.high}},
                            {"pca", c.pca},
                            {"table", c.boosting_table ? "boosting" : "results"},
                            {"row", c.row},
                            {"column", c.column},
                            {"ok", c.ok}};
    if (c.ok) {
      entry["artifact"] = c.artifact;
      entry["selected_config"] = c.selected_config;
      entry["test"] = report_to_json(c.test);
      entry["validation"] = report_to_json(c.validation);
    } else {
      entry["error"] = c.error;
    }
    cells.push_back(std::move(entry));
  }
  write_json(out_dir / "results.json",
             {{"schema", "emoxai.sweep/1"},
              {"metric", averaging_name(config.metric)},
              {"split", "split.json"},
              {"split_seed", data.split.seed},
              {"config", config.to_json()},
              {"provenance", provenance(config)},
              {"cells", cells}});
  return result;
}

}  // namespace emoxai
