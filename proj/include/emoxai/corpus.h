#ifndef EMOXAI_CORPUS_H_
#define EMOXAI_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emoxai/labels.h"

namespace emoxai {

struct RawRecord {
  std::string id;
  std::string text;
  LabelVector labels;
  std::optional<std::string> platform;
  std::optional<std::string> topic;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

// Maps file columns onto record fields. Label columns follow the canonical
// emotion order.
struct Schema {
  std::string text_column = "text";
  std::array<std::string, kNumEmotions> label_columns = {
      "love", "joy", "surprise", "anger", "sadness", "fear"};
  std::optional<std::string> id_column;
  std::optional<std::string> platform_column;
  std::optional<std::string> topic_column;
  char delimiter = ',';
  // Abort on the first invalid row instead of rejecting it.
  bool strict = false;
  // Reject rows whose raw text is empty or whitespace-only.
  bool drop_empty_text = true;
};

struct RejectedRow {
  std::size_t row = 0;  // 1-based data row index, header excluded
  std::string reason;
};

struct LoadResult {
  std::vector<RawRecord> records;
  std::vector<RejectedRow> rejected;
};

// Reads a delimiter-separated file with a header row. Fields may be quoted
// with '"' and contain delimiters, newlines and doubled quotes. Ids come from
// the id column when mapped, otherwise from the 1-based data row number.
// Throws DataError for a missing file or unmapped column, and for an invalid
// row when schema.strict is set.
LoadResult load_dataset(const std::filesystem::path& path, const Schema& schema);
LoadResult parse_dataset(std::string_view content, const Schema& schema);

// Writes records with the schema's column names. Loading the output with the
// same schema reproduces ids, text and labels exactly.
void write_dataset(const std::filesystem::path& path, const Schema& schema,
                   const std::vector<RawRecord>& records);
std::string format_dataset(const Schema& schema, const std::vector<RawRecord>& records);

// Train/test/validation fractions. They must be positive and sum to 1.
struct SplitRatios {
  double train = 0.80;
  double test = 0.15;
  double validation = 0.05;
};

struct DatasetSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  // Labels whose positives could not be spread over all subsets.
  std::vector<Emotion> best_effort_labels;
};

// Iterative multi-label stratification. Records are visited in a seeded
// shuffle; labels are assigned rarest first, each positive record going to
// the open subset that most lacks that label. Subset sizes follow the ratios
// by largest-remainder rounding. A final pass swaps record pairs between
// subsets while that brings subset label rates closer to the global rates.
DatasetSplit stratified_split(const std::vector<RawRecord>& records, const SplitRatios& ratios,
                              std::uint64_t seed);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct CorpusStats {
  std::size_t record_count = 0;
  std::array<std::size_t, kNumEmotions> per_label_counts{};
  MeanStd sentences_per_entry;
  MeanStd words_per_sentence;
  double multi_label_fraction = 0.0;
  // Share of records per platform, over records that carry a platform.
  std::map<std::string, double> platform_shares;
  std::vector<std::pair<std::string, std::size_t>> top_terms;
};

// Throws DataError on an empty record list.
CorpusStats compute_stats(const std::vector<RawRecord>& records, std::size_t top_terms = 20);

}  // namespace emoxai

#endif  // EMOXAI_CORPUS_H_
