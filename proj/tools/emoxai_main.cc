// Command-line front end: stats, split, train, evaluate, explain, sweep.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emoxai/commands.h"
#include "emoxai/error.h"
#include "emoxai/experiment.h"

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  bool strict = false;
};

void add_global_options(CLI::App* cmd, GlobalOptions& g, bool config_required) {
  auto* opt = cmd->add_option("--config", g.config, "Experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", g.seed, "Master seed, overrides [run] seed");
  cmd->add_option("--out", g.out, "Output directory");
  cmd->add_flag("--strict", g.strict, "Abort on the first invalid dataset row");
}

emoxai::ExperimentConfig resolve_config(const GlobalOptions& g) {
  emoxai::ExperimentConfig config;
  if (!g.config.empty()) config = emoxai::load_experiment_config(g.config);
  if (g.seed) emoxai::apply_seed(config, *g.seed);
  if (g.strict) config.schema.strict = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label emotion classification with TF-IDF, PCA, classical models and LIME"};
  app.require_subcommand(1);
  GlobalOptions g;

  auto* stats = app.add_subcommand("stats", "Dataset statistics -> stats.json");
  add_global_options(stats, g, true);
  std::string data_override;
  stats->add_option("--data", data_override, "Dataset file, overrides [dataset] path");

  auto* split = app.add_subcommand("split", "Stratified train/test/validation split -> split.json");
  add_global_options(split, g, true);

  auto* train = app.add_subcommand("train", "Train one multi-label model -> model.json");
  add_global_options(train, g, true);
  std::string family, ngrams;
  bool use_pca = false, no_pca = false;
  train->add_option("--family", family, "linear_svm | knn | decision_tree | random_forest | adaboost");
  train->add_option("--ngrams", ngrams, "n-gram range such as 1-1 or 1-3");
  train->add_flag("--pca", use_pca, "Project TF-IDF features with PCA");
  train->add_flag("--no-pca", no_pca, "Use raw TF-IDF features");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model on a subset -> metrics.json, metrics.csv");
  add_global_options(evaluate, g, true);
  emoxai::EvaluateOptions eval_options;
  std::string model_path, split_path;
  evaluate->add_option("--model", model_path, "Model artifact")->required();
  evaluate->add_option("--subset", eval_options.subset, "train | validation | test");
  evaluate->add_option("--split", split_path, "Split manifest; default recomputes the split from the config");

  auto* explain = app.add_subcommand("explain", "LIME explanation for one text -> explanation.json");
  add_global_options(explain, g, false);
  std::string explain_model, text, label;
  std::optional<std::size_t> samples, features;
  std::optional<double> kernel_width;
  explain->add_option("--model", explain_model, "Model artifact")->required();
  explain->add_option("--text", text, "Text to explain")->required();
  explain->add_option("--label", label, "love | joy | surprise | anger | sadness | fear")->required();
  explain->add_option("--samples", samples, "Number of perturbation samples");
  explain->add_option("--features", features, "Number of words to report");
  explain->add_option("--kernel-width", kernel_width, "Proximity kernel width");

  auto* sweep = app.add_subcommand("sweep", "Full experiment grid -> results.csv, boosting.csv, results.json");
  add_global_options(sweep, g, true);
  std::optional<std::size_t> jobs;
  sweep->add_option("--jobs", jobs, "Worker threads, overrides [run] jobs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? emoxai::kExitOk : emoxai::kExitUsage;
  }

  try {
    emoxai::ExperimentConfig config = resolve_config(g);
    if (*stats) {
      if (!data_override.empty()) config.dataset = data_override;
      const auto s = emoxai::cmd_stats(config, g.out);
      std::cout << "records " << s.record_count << ", multi-label fraction " << s.multi_label_fraction << '\n';
    } else if (*split) {
      const auto s = emoxai::cmd_split(config, g.out);
      std::cout << "train " << s.train_ids.size() << ", test " << s.test_ids.size() << ", validation "
                << s.validation_ids.size() << '\n';
    } else if (*train) {
      emoxai::TrainOptions options;
      if (!family.empty()) {
        options.family = emoxai::parse_family(family);
        if (!options.family || *options.family == emoxai::Family::kConstant) {
          throw emoxai::ConfigError("unknown model family '" + family + "'");
        }
      }
      if (!ngrams.empty()) options.ngrams = emoxai::parse_ngram_range(ngrams);
      if (use_pca && no_pca) throw emoxai::ConfigError("--pca and --no-pca are exclusive");
      if (use_pca) options.pca = true;
      if (no_pca) options.pca = false;
      std::cout << emoxai::cmd_train(config, options, g.out).string() << '\n';
    } else if (*evaluate) {
      eval_options.model = model_path;
      if (!split_path.empty()) eval_options.split_manifest = split_path;
      const auto report = emoxai::cmd_evaluate(config, eval_options, g.out);
      std::cout << "macro F1 " << report.macro.f1 << ", micro F1 " << report.micro.f1 << ", weighted F1 "
                << report.weighted.f1 << '\n';
    } else if (*explain) {
      const auto emotion = emoxai::parse_emotion(label);
      if (!emotion) throw emoxai::ConfigError("unknown label '" + label + "'");
      emoxai::LimeConfig lime = config.lime;
      if (samples) lime.num_samples = *samples;
      if (features) lime.num_features = *features;
      if (kernel_width) lime.kernel_width = *kernel_width;
      emoxai::cmd_explain(explain_model, text, *emotion, lime, g.out, std::cout);
    } else if (*sweep) {
      if (jobs) config.jobs = *jobs;
      const auto result = emoxai::cmd_sweep(config, g.out, std::cerr);
      std::cout << result.results_table;
      if (!result.boosting_table.empty()) std::cout << '\n' << result.boosting_table;
    }
  } catch (const emoxai::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return emoxai::kExitUsage;
  } catch (const emoxai::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return emoxai::kExitData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed document: " << e.what() << '\n';
    return emoxai::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return emoxai::kExitInternal;
  }
  return emoxai::kExitOk;
}
