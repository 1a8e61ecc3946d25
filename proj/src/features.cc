#include "emoxai/features.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {
namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i > start) {
      std::string token(text.substr(start, i - start));
      if (lowercase) {
        for (char& c : token) {
          if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
      }
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

void validate(const NgramRange& range) {
  if (range.low < 1 || range.low > range.high || range.high > 3) {
    throw ConfigError("n-gram range must satisfy 1 <= low <= high <= 3");
  }
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, NgramRange range) {
  validate(range);
  std::vector<std::string> grams;
  for (int n = range.low; n <= range.high; ++n) {
    const auto width = static_cast<std::size_t>(n);
    if (tokens.size() < width) continue;
    for (std::size_t start = 0; start + width <= tokens.size(); ++start) {
      std::string gram = tokens[start];
      for (std::size_t k = 1; k < width; ++k) {
        gram.push_back(' ');
        gram += tokens[start + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency)
    : terms_(std::move(terms)), df_(std::move(document_frequency)) {
  if (terms_.size() != df_.size()) throw DataError("vocabulary term/df length mismatch");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) throw DataError("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& documents, const TfidfConfig& config) {
  validate(config.ngrams);
  if (documents.empty()) throw DataError("cannot fit TF-IDF on an empty document list");
  if (config.min_df < 1) throw ConfigError("min_df must be at least 1");

  std::map<std::string, std::size_t> df;
  for (const std::string& doc : documents) {
    std::vector<std::string> grams = extract_ngrams(tokenize(doc, config.lowercase), config.ngrams);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (std::string& g : grams) ++df[std::move(g)];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= config.min_df) kept.emplace_back(term, count);
  }
  if (config.max_features && kept.size() > *config.max_features) {
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(*config.max_features);
    std::sort(kept.begin(), kept.end());
  }
  if (kept.empty()) throw DataError("empty vocabulary");

  TfidfModel model;
  model.config_ = config;
  model.num_documents_ = documents.size();
  std::vector<std::string> terms;
  std::vector<std::size_t> dfs;
  terms.reserve(kept.size());
  dfs.reserve(kept.size());
  const double n = static_cast<double>(documents.size());
  for (auto& [term, count] : kept) {
    terms.push_back(std::move(term));
    dfs.push_back(count);
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  model.vocabulary_ = Vocabulary(std::move(terms), std::move(dfs));
  return model;
}

SparseVector TfidfModel::transform(std::string_view document) const {
  std::map<std::uint32_t, double> counts;
  for (const std::string& gram : extract_ngrams(tokenize(document, config_.lowercase), config_.ngrams)) {
    if (auto index = vocabulary_.find(gram)) counts[static_cast<std::uint32_t>(*index)] += 1.0;
  }
  std::vector<std::pair<std::uint32_t, double>> pairs;
  pairs.reserve(counts.size());
  double squared = 0.0;
  for (const auto& [index, count] : counts) {
    const double value = count * idf_[index];
    squared += value * value;
    pairs.emplace_back(index, value);
  }
  if (config_.normalize && squared > 0.0) {
    const double norm = std::sqrt(squared);
    for (auto& p : pairs) p.second /= norm;
  }
  return SparseVector::from_pairs(dim(), std::move(pairs));
}

FeatureMatrix TfidfModel::transform_all(const std::vector<std::string>& documents) const {
  FeatureMatrix out;
  out.dim = dim();
  out.rows.reserve(documents.size());
  for (const std::string& doc : documents) out.rows.push_back(transform(doc));
  return out;
}

nlohmann::json TfidfModel::to_json() const {
  nlohmann::json doc;
  doc["schema"] = kSchema;
  doc["config"] = {
      {"ngram_low", config_.ngrams.low},
      {"ngram_high", config_.ngrams.high},
      {"min_df", config_.min_df},
      {"max_features", config_.max_features ? nlohmann::json(*config_.max_features) : nlohmann::json()},
      {"normalize", config_.normalize},
      {"lowercase", config_.lowercase},
  };
  doc["num_documents"] = num_documents_;
  nlohmann::json vocab = nlohmann::json::array();
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    vocab.push_back({vocabulary_.terms()[i], vocabulary_.document_frequency()[i], idf_[i]});
  }
  doc["vocabulary"] = std::move(vocab);
  return doc;
}

TfidfModel TfidfModel::from_json(const nlohmann::json& doc) {
  if (doc.value("schema", "") != kSchema) {
    throw SchemaError("expected schema '" + std::string(kSchema) + "', found '" +
                      doc.value("schema", "") + "'");
  }
  TfidfModel model;
  const auto& c = doc.at("config");
  model.config_.ngrams = {c.at("ngram_low").get<int>(), c.at("ngram_high").get<int>()};
  model.config_.min_df = c.at("min_df").get<std::size_t>();
  if (!c.at("max_features").is_null()) model.config_.max_features = c.at("max_features").get<std::size_t>();
  model.config_.normalize = c.at("normalize").get<bool>();
  model.config_.lowercase = c.at("lowercase").get<bool>();
  model.num_documents_ = doc.at("num_documents").get<std::size_t>();
  std::vector<std::string> terms;
  std::vector<std::size_t> dfs;
  for (const auto& entry : doc.at("vocabulary")) {
    terms.push_back(entry.at(0).get<std::string>());
    dfs.push_back(entry.at(1).get<std::size_t>());
    model.idf_.push_back(entry.at(2).get<double>());
  }
  model.vocabulary_ = Vocabulary(std::move(terms), std::move(dfs));
  return model;
}

}  // namespace emoxai
