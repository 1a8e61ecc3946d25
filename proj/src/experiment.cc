#include "emoxai/experiment.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/hash.h"

namespace emoxai {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"seed", "jobs"}},
      {"dataset",
       {"path", "delimiter", "text_column", "id_column", "platform_column", "topic_column", "label_columns",
        "drop_empty_text", "strict"}},
      {"split", {"train", "test", "validation"}},
      {"features", {"ngrams", "min_df", "max_features", "normalize", "lowercase"}},
      {"pca",
       {"mode", "components", "variance_target", "max_components", "dense_threshold", "tolerance",
        "max_iterations"}},
      {"models", {"families", "metric"}},
      {"svm", {"lambda", "epochs"}},
      {"knn", {"k", "distance"}},
      {"tree", {"max_depth", "min_samples_leaf"}},
      {"forest", {"n_trees", "max_depth", "min_samples_leaf", "max_features", "bootstrap"}},
      {"adaboost", {"n_estimators", "max_depth", "min_samples_leaf"}},
      {"boosting", {"enabled", "ngrams"}},
      {"lime", {"num_samples", "num_features", "kernel_width", "ridge"}},
      {"eval", {"subset_accuracy"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!sec) return std::nullopt;
    const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!value) return std::nullopt;
    return trim(*value);
  }

  template <class T>
  T number(const std::string& section, const std::string& key, T fallback) const {
    const auto v = get(section, key);
    if (!v || v->empty()) return fallback;
    return parse<T>(section, key, *v);
  }

  template <class T>
  std::vector<T> numbers(const std::string& section, const std::string& key, std::vector<T> fallback) const {
    const auto v = get(section, key);
    if (!v || v->empty()) return fallback;
    std::vector<T> out;
    for (const std::string& item : split_list(*v)) out.push_back(parse<T>(section, key, item));
    if (out.empty()) throw ConfigError("[" + section + "] " + key + " is empty");
    return out;
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = get(section, key);
    if (!v || v->empty()) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ConfigError("[" + section + "] " + key + " must be true or false, got '" + *v + "'");
  }

  std::string text(const std::string& section, const std::string& key, std::string fallback) const {
    const auto v = get(section, key);
    return v ? *v : fallback;
  }

 private:
  template <class T>
  static T parse(const std::string& section, const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    if constexpr (std::is_unsigned_v<T>) {
      if (value.starts_with("-")) throw ConfigError("[" + section + "] " + key + " must be non-negative");
    }
    in >> out;
    if (in.fail() || !in.eof()) {
      throw ConfigError("[" + section + "] " + key + " has malformed value '" + value + "'");
    }
    return out;
  }

  const pt::ptree& tree_;
};

std::optional<std::size_t> zero_as_unset(std::size_t v) {
  if (v == 0) return std::nullopt;
  return v;
}

nlohmann::json optional_json(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

}  // namespace

std::string ngram_label(NgramRange range) {
  if (range.low == range.high) {
    switch (range.low) {
      case 1: return "Uni-gram";
      case 2: return "Bi-gram";
      case 3: return "Tri-gram";
      default: break;
    }
  }
  return std::to_string(range.low) + "-" + std::to_string(range.high) + "-gram";
}

NgramRange parse_ngram_range(const std::string& text) {
  const std::string t = trim(text);
  NgramRange r;
  const auto dash = t.find('-');
  try {
    if (dash == std::string::npos) {
      r.low = r.high = std::stoi(t);
    } else {
      r.low = std::stoi(t.substr(0, dash));
      r.high = std::stoi(t.substr(dash + 1));
    }
  } catch (const std::exception&) {
    throw ConfigError("malformed n-gram range '" + text + "'");
  }
  validate(r);
  return r;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("key '" + section + "' must live inside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
  const Reader r(tree);
  ExperimentConfig c;
  c.seed = r.number<std::uint64_t>("run", "seed", c.seed);
  c.jobs = r.number<std::size_t>("run", "jobs", c.jobs);
  if (c.jobs < 1) throw ConfigError("[run] jobs must be at least 1");

  const std::string path = r.text("dataset", "path", "");
  if (!path.empty()) {
    std::filesystem::path p(path);
    c.dataset = p.is_absolute() ? p : base_dir / p;
  }
  const std::string delimiter = r.text("dataset", "delimiter", ",");
  if (delimiter == "\\t" || delimiter == "tab") {
    c.schema.delimiter = '\t';
  } else if (delimiter.size() == 1) {
    c.schema.delimiter = delimiter[0];
  } else {
    throw ConfigError("[dataset] delimiter must be a single character or 'tab'");
  }
  c.schema.text_column = r.text("dataset", "text_column", c.schema.text_column);
  auto optional_column = [&](const std::string& key) -> std::optional<std::string> {
    std::string v = r.text("dataset", key, "");
    if (v.empty()) return std::nullopt;
    return v;
  };
  c.schema.id_column = optional_column("id_column");
  c.schema.platform_column = optional_column("platform_column");
  c.schema.topic_column = optional_column("topic_column");
  if (const auto labels = r.get("dataset", "label_columns")) {
    const auto names = split_list(*labels);
    if (names.size() != kNumEmotions) {
      throw ConfigError("[dataset] label_columns must name six columns (love, joy, surprise, anger, sadness, fear)");
    }
    std::copy(names.begin(), names.end(), c.schema.label_columns.begin());
  }
  c.schema.drop_empty_text = r.boolean("dataset", "drop_empty_text", c.schema.drop_empty_text);
  c.schema.strict = r.boolean("dataset", "strict", c.schema.strict);

  c.ratios.train = r.number<double>("split", "train", c.ratios.train);
  c.ratios.test = r.number<double>("split", "test", c.ratios.test);
  c.ratios.validation = r.number<double>("split", "validation", c.ratios.validation);

  if (const auto grid = r.get("features", "ngrams")) {
    c.ngram_grid.clear();
    for (const std::string& item : split_list(*grid)) c.ngram_grid.push_back(parse_ngram_range(item));
    if (c.ngram_grid.empty()) throw ConfigError("[features] ngrams grid is empty");
  }
  c.tfidf.ngrams = c.ngram_grid.front();
  c.tfidf.min_df = r.number<std::size_t>("features", "min_df", c.tfidf.min_df);
  c.tfidf.max_features = zero_as_unset(r.number<std::size_t>("features", "max_features", 0));
  c.tfidf.normalize = r.boolean("features", "normalize", c.tfidf.normalize);
  c.tfidf.lowercase = r.boolean("features", "lowercase", c.tfidf.lowercase);

  const std::string mode = r.text("pca", "mode", "both");
  if (mode == "off") c.pca_mode = PcaMode::kOff;
  else if (mode == "on") c.pca_mode = PcaMode::kOn;
  else if (mode == "both") c.pca_mode = PcaMode::kBoth;
  else throw ConfigError("[pca] mode must be off, on or both");
  c.pca.components = zero_as_unset(r.number<std::size_t>("pca", "components", 0));
  c.pca.variance_target = r.number<double>("pca", "variance_target", c.pca.variance_target);
  c.pca.max_components = r.number<std::size_t>("pca", "max_components", c.pca.max_components);
  c.pca.dense_threshold = r.number<std::size_t>("pca", "dense_threshold", c.pca.dense_threshold);
  c.pca.tolerance = r.number<double>("pca", "tolerance", c.pca.tolerance);
  c.pca.max_iterations = r.number<std::size_t>("pca", "max_iterations", c.pca.max_iterations);

  if (const auto families = r.get("models", "families")) {
    c.families.clear();
    for (const std::string& name : split_list(*families)) {
      const auto f = parse_family(name);
      if (!f || *f == Family::kConstant) throw ConfigError("unknown model family '" + name + "'");
      c.families.push_back(*f);
    }
  }
  const auto metric = parse_averaging(r.text("models", "metric", "macro"));
  if (!metric) throw ConfigError("[models] metric must be micro, macro or weighted");
  c.metric = *metric;

  c.grid.svm_lambda = r.numbers<double>("svm", "lambda", c.grid.svm_lambda);
  c.grid.svm_epochs = r.numbers<std::size_t>("svm", "epochs", c.grid.svm_epochs);
  c.grid.knn_k = r.numbers<std::size_t>("knn", "k", c.grid.knn_k);
  const auto distance = parse_distance(r.text("knn", "distance", "cosine"));
  if (!distance) throw ConfigError("[knn] distance must be cosine or euclidean");
  c.classifier.knn.distance = *distance;
  c.grid.tree_max_depth = r.numbers<std::size_t>("tree", "max_depth", c.grid.tree_max_depth);
  c.classifier.tree.min_samples_leaf = r.number<std::size_t>("tree", "min_samples_leaf", 2);
  c.grid.forest_n_trees = r.numbers<std::size_t>("forest", "n_trees", c.grid.forest_n_trees);
  c.classifier.forest.tree.max_depth = zero_as_unset(r.number<std::size_t>("forest", "max_depth", 0));
  c.classifier.forest.tree.min_samples_leaf = r.number<std::size_t>("forest", "min_samples_leaf", 2);
  const std::string rule = r.text("forest", "max_features", "sqrt");
  if (rule == "sqrt") c.classifier.forest.max_features = MaxFeaturesRule::kSqrt;
  else if (rule == "all") c.classifier.forest.max_features = MaxFeaturesRule::kAll;
  else throw ConfigError("[forest] max_features must be sqrt or all");
  c.classifier.forest.bootstrap = r.boolean("forest", "bootstrap", true);
  c.grid.adaboost_n_estimators = r.numbers<std::size_t>("adaboost", "n_estimators", c.grid.adaboost_n_estimators);
  c.grid.adaboost_max_depth = r.numbers<std::size_t>("adaboost", "max_depth", c.grid.adaboost_max_depth);
  c.classifier.adaboost.min_samples_leaf = r.number<std::size_t>("adaboost", "min_samples_leaf", 1);

  c.boosting_pair = r.boolean("boosting", "enabled", c.boosting_pair);
  if (const auto b = r.get("boosting", "ngrams"); b && !b->empty()) c.boosting_ngrams = parse_ngram_range(*b);

  c.lime.num_samples = r.number<std::size_t>("lime", "num_samples", c.lime.num_samples);
  c.lime.num_features = r.number<std::size_t>("lime", "num_features", c.lime.num_features);
  const double width = r.number<double>("lime", "kernel_width", 0.0);
  if (width < 0.0) throw ConfigError("[lime] kernel_width must be non-negative");
  if (width > 0.0) c.lime.kernel_width = width;
  c.lime.ridge = r.number<double>("lime", "ridge", c.lime.ridge);
  c.subset_accuracy = r.boolean("eval", "subset_accuracy", c.subset_accuracy);

  apply_seed(c, c.seed);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), path.parent_path());
}

void apply_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.pca.seed = seed;
  config.classifier.seed = seed;
  config.lime.seed = seed;
}

std::vector<ClassifierConfig> ExperimentConfig::candidates(Family family) const {
  std::vector<ClassifierConfig> out;
  ClassifierConfig base = classifier;
  base.family = family;
  switch (family) {
    case Family::kLinearSvm:
      for (double lambda : grid.svm_lambda) {
        for (std::size_t epochs : grid.svm_epochs) {
          ClassifierConfig c = base;
          c.svm.lambda = lambda;
          c.svm.epochs = epochs;
          out.push_back(c);
        }
      }
      break;
    case Family::kKnn:
      for (std::size_t k : grid.knn_k) {
        ClassifierConfig c = base;
        c.knn.k = k;
        out.push_back(c);
      }
      break;
    case Family::kDecisionTree:
      for (std::size_t depth : grid.tree_max_depth) {
        ClassifierConfig c = base;
        c.tree.max_depth = zero_as_unset(depth);
        out.push_back(c);
      }
      break;
    case Family::kRandomForest:
      for (std::size_t n : grid.forest_n_trees) {
        ClassifierConfig c = base;
        c.forest.n_trees = n;
        out.push_back(c);
      }
      break;
    case Family::kAdaBoost:
      for (std::size_t n : grid.adaboost_n_estimators) {
        for (std::size_t depth : grid.adaboost_max_depth) {
          ClassifierConfig c = base;
          c.adaboost.n_estimators = n;
          c.adaboost.max_depth = depth;
          out.push_back(c);
        }
      }
      break;
    case Family::kConstant:
      out.push_back(base);
      break;
  }
  return out;
}

PipelineConfig ExperimentConfig::pipeline(NgramRange ngrams, bool with_pca) const {
  PipelineConfig p;
  p.tfidf = tfidf;
  p.tfidf.ngrams = ngrams;
  if (with_pca) p.pca = pca;
  return p;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json ngrams = nlohmann::json::array();
  for (const NgramRange& r : ngram_grid) ngrams.push_back({r.low, r.high});
  nlohmann::json families_json = nlohmann::json::array();
  for (Family f : families) families_json.push_back(family_name(f));
  std::vector<std::string> labels(schema.label_columns.begin(), schema.label_columns.end());
  auto opt_str = [](const std::optional<std::string>& s) { return s ? nlohmann::json(*s) : nlohmann::json(); };
  return {
      {"seed", seed},
      {"dataset",
       {{"path", dataset.generic_string()},
        {"delimiter", std::string(1, schema.delimiter)},
        {"text_column", schema.text_column},
        {"id_column", opt_str(schema.id_column)},
        {"platform_column", opt_str(schema.platform_column)},
        {"topic_column", opt_str(schema.topic_column)},
        {"label_columns", labels},
        {"drop_empty_text", schema.drop_empty_text},
        {"strict", schema.strict}}},
      {"split", {{"train", ratios.train}, {"test", ratios.test}, {"validation", ratios.validation}}},
      {"features",
       {{"ngrams", ngrams},
        {"min_df", tfidf.min_df},
        {"max_features", optional_json(tfidf.max_features)},
        {"normalize", tfidf.normalize},
        {"lowercase", tfidf.lowercase}}},
      {"pca",
       {{"mode", pca_mode == PcaMode::kOff ? "off" : pca_mode == PcaMode::kOn ? "on" : "both"},
        {"components", optional_json(pca.components)},
        {"variance_target", pca.variance_target},
        {"max_components", pca.max_components},
        {"dense_threshold", pca.dense_threshold},
        {"tolerance", pca.tolerance},
        {"max_iterations", pca.max_iterations}}},
      {"models", {{"families", families_json}, {"metric", averaging_name(metric)}}},
      {"svm", {{"lambda", grid.svm_lambda}, {"epochs", grid.svm_epochs}}},
      {"knn", {{"k", grid.knn_k}, {"distance", distance_name(classifier.knn.distance)}}},
      {"tree", {{"max_depth", grid.tree_max_depth}, {"min_samples_leaf", classifier.tree.min_samples_leaf}}},
      {"forest",
       {{"n_trees", grid.forest_n_trees},
        {"max_depth", optional_json(classifier.forest.tree.max_depth)},
        {"min_samples_leaf", classifier.forest.tree.min_samples_leaf},
        {"max_features", classifier.forest.max_features == MaxFeaturesRule::kSqrt ? "sqrt" : "all"},
        {"bootstrap", classifier.forest.bootstrap}}},
      {"adaboost",
       {{"n_estimators", grid.adaboost_n_estimators},
        {"max_depth", grid.adaboost_max_depth},
        {"min_samples_leaf", classifier.adaboost.min_samples_leaf}}},
      {"boosting", {{"enabled", boosting_pair}, {"ngrams", {boosting_ngrams.low, boosting_ngrams.high}}}},
      {"lime",
       {{"num_samples", lime.num_samples},
        {"num_features", lime.num_features},
        {"kernel_width", lime.kernel_width ? nlohmann::json(*lime.kernel_width) : nlohmann::json()},
        {"ridge", lime.ridge}}},
      {"eval", {{"subset_accuracy", subset_accuracy}}},
  };
}

std::string ExperimentConfig::hash() const { return hex_digest(to_json().dump()); }

}  // namespace emoxai
