#ifndef EMOXAI_FEATURES_H_
#define EMOXAI_FEATURES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/sparse.h"

namespace emoxai {

// Splits on ASCII whitespace. With lowercase set, only A-Z are folded.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = false);

struct NgramRange {
  int low = 1;
  int high = 1;

  friend bool operator==(const NgramRange&, const NgramRange&) = default;
};

// Throws ConfigError unless 1 <= low <= high <= 3.
void validate(const NgramRange& range);

// All contiguous windows for n = low..high, grouped by n, in document order.
// Window tokens are joined with one space.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, NgramRange range);

struct TfidfConfig {
  NgramRange ngrams;
  std::size_t min_df = 1;
  std::optional<std::size_t> max_features;
  bool normalize = true;
  bool lowercase = false;

  friend bool operator==(const TfidfConfig&, const TfidfConfig&) = default;
};

// Terms are stored in byte-lexicographic order; index = position.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& document_frequency() const { return df_; }
  std::optional<std::size_t> find(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::size_t> index_;
};

class TfidfModel {
 public:
  static constexpr std::string_view kSchema = "emoxai.tfidf/1";

  // Keeps n-grams with df >= min_df; when max_features is set, keeps the
  // highest-df terms with ties broken lexicographically. Smoothed idf:
  // ln((1 + N) / (1 + df)) + 1. Throws DataError "empty vocabulary" when no
  // term survives.
  static TfidfModel fit(const std::vector<std::string>& documents, const TfidfConfig& config);

  // Raw n-gram counts times idf, L2-normalized when configured. Unknown
  // n-grams are ignored.
  SparseVector transform(std::string_view document) const;
  FeatureMatrix transform_all(const std::vector<std::string>& documents) const;

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  const TfidfConfig& config() const { return config_; }
  std::size_t num_documents() const { return num_documents_; }
  std::size_t dim() const { return vocabulary_.size(); }

  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json& doc);

 private:
  TfidfConfig config_;
  Vocabulary vocabulary_;
  std::vector<double> idf_;
  std::size_t num_documents_ = 0;
};

}  // namespace emoxai

#endif  // EMOXAI_FEATURES_H_
