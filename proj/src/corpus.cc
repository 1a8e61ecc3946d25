#include "emoxai/corpus.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "emoxai/error.h"
#include "emoxai/features.h"
#include "emoxai/rng.h"
#include "emoxai/text.h"

namespace emoxai {
namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRow> parse_csv(std::string_view content, char delimiter) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  row.line = line;
  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // Skip blank lines.
    if (!(row.fields.size() == 1 && row.fields[0].empty())) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = line;
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted field starting near line " + std::to_string(row.line));
  if (field_started || !field.empty() || !row.fields.empty()) end_row();
  return rows;
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string quote_field(std::string_view value, char delimiter) {
  const bool needs_quotes = value.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                                std::string_view::npos ||
                            value.empty();
  if (!needs_quotes) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

LoadResult parse_dataset(std::string_view content, const Schema& schema) {
  std::vector<CsvRow> rows = parse_csv(content, schema.delimiter);
  if (rows.empty()) throw DataError("dataset has no header row");
  const std::vector<std::string>& header = rows.front().fields;

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing mapped column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_col = column(schema.text_column);
  std::array<std::size_t, kNumEmotions> label_cols{};
  for (std::size_t l = 0; l < kNumEmotions; ++l) label_cols[l] = column(schema.label_columns[l]);
  std::optional<std::size_t> id_col, platform_col, topic_col;
  if (schema.id_column) id_col = column(*schema.id_column);
  if (schema.platform_column) platform_col = column(*schema.platform_column);
  if (schema.topic_column) topic_col = column(*schema.topic_column);

  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    const std::size_t data_row = r;
    auto reject = [&](std::string reason) {
      if (schema.strict) {
        throw DataError("row " + std::to_string(data_row) + " (line " + std::to_string(row.line) +
                        "): " + reason);
      }
      result.rejected.push_back({data_row, std::move(reason)});
    };
    if (row.fields.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, found " +
             std::to_string(row.fields.size()));
      continue;
    }
    RawRecord record;
    record.text = row.fields[text_col];
    if (is_blank(record.text)) {
      if (schema.drop_empty_text) {
        result.rejected.push_back({data_row, "empty text"});
      } else {
        reject("empty text");
      }
      continue;
    }
    bool ok = true;
    for (std::size_t l = 0; l < kNumEmotions && ok; ++l) {
      const std::string_view value = trim_ascii(row.fields[label_cols[l]]);
      if (value == "1") {
        record.labels.values[l] = true;
      } else if (value != "0") {
        reject("label '" + schema.label_columns[l] + "' has value '" + std::string(value) +
               "', expected 0 or 1");
        ok = false;
      }
    }
    if (!ok) continue;
    record.id = id_col ? row.fields[*id_col] : std::to_string(data_row);
    if (record.id.empty()) {
      reject("empty id");
      continue;
    }
    if (!seen_ids.insert(record.id).second) {
      reject("duplicate id '" + record.id + "'");
      continue;
    }
    if (platform_col && !row.fields[*platform_col].empty()) record.platform = row.fields[*platform_col];
    if (topic_col && !row.fields[*topic_col].empty()) record.topic = row.fields[*topic_col];
    result.records.push_back(std::move(record));
  }
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), schema);
}

std::string format_dataset(const Schema& schema, const std::vector<RawRecord>& records) {
  const char d = schema.delimiter;
  std::string out;
  std::vector<std::string> header;
  if (schema.id_column) header.push_back(*schema.id_column);
  header.push_back(schema.text_column);
  for (const auto& name : schema.label_columns) header.push_back(name);
  if (schema.platform_column) header.push_back(*schema.platform_column);
  if (schema.topic_column) header.push_back(*schema.topic_column);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out.push_back(d);
    out += quote_field(header[i], d);
  }
  out.push_back('\n');
  for (const RawRecord& r : records) {
    if (schema.id_column) {
      out += quote_field(r.id, d);
      out.push_back(d);
    }
    out += quote_field(r.text, d);
    for (bool v : r.labels.values) {
      out.push_back(d);
      out.push_back(v ? '1' : '0');
    }
    if (schema.platform_column) {
      out.push_back(d);
      if (r.platform) out += quote_field(*r.platform, d);
    }
    if (schema.topic_column) {
      out.push_back(d);
      if (r.topic) out += quote_field(*r.topic, d);
    }
    out.push_back('\n');
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Schema& schema,
                   const std::vector<RawRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file '" + path.string() + "'");
  out << format_dataset(schema, records);
}

namespace {

// Greedy pairwise swaps between subsets while they lower the summed squared
// deviation of subset label rates from the global rates. Subset sizes are
// unchanged. Records are grouped by label signature, so a move is chosen per
// signature pair and the record moved is the earliest of its group in
// visiting order.
void refine_by_swaps(const std::vector<RawRecord>& records, const std::vector<std::size_t>& order,
                     std::vector<int>& subset_of) {
  constexpr std::size_t kSubsets = 3, kSignatures = std::size_t{1} << kNumEmotions;
  auto signature = [&](std::size_t i) {
    std::size_t s = 0;
    for (std::size_t l = 0; l < kNumEmotions; ++l) s |= std::size_t{records[i].labels.values[l]} << l;
    return s;
  };
  std::array<std::array<std::deque<std::size_t>, kSignatures>, kSubsets> members;
  std::array<std::array<double, kNumEmotions>, kSubsets> count{};
  std::array<double, kSubsets> size{};
  std::array<double, kNumEmotions> global{};
  for (std::size_t i : order) {
    const auto j = static_cast<std::size_t>(subset_of[i]);
    members[j][signature(i)].push_back(i);
    size[j] += 1.0;
    for (std::size_t l = 0; l < kNumEmotions; ++l) {
      count[j][l] += records[i].labels.values[l];
      global[l] += records[i].labels.values[l];
    }
  }
  for (double& g : global) g /= static_cast<double>(records.size());

  auto deviation = [&](std::size_t j, std::size_t l, double c) {
    const double d = c / size[j] - global[l];
    return d * d;
  };
  for (std::size_t moves = 0; moves < records.size(); ++moves) {
    double best_delta = -1e-12;
    std::size_t best_a = 0, best_b = 0, best_s = 0, best_t = 0;
    bool found = false;
    for (std::size_t a = 0; a < kSubsets; ++a) {
      for (std::size_t b = a + 1; b < kSubsets; ++b) {
        for (std::size_t s = 0; s < kSignatures; ++s) {
          if (members[a][s].empty()) continue;
          for (std::size_t t = 0; t < kSignatures; ++t) {
            if (t == s || members[b][t].empty()) continue;
            double delta = 0.0;
            for (std::size_t l = 0; l < kNumEmotions; ++l) {
              const double shift = static_cast<double>((t >> l) & 1) - static_cast<double>((s >> l) & 1);
              if (shift == 0.0) continue;
              delta += deviation(a, l, count[a][l] + shift) - deviation(a, l, count[a][l]) +
                       deviation(b, l, count[b][l] - shift) - deviation(b, l, count[b][l]);
            }
            if (delta < best_delta) {
              best_delta = delta;
              best_a = a, best_b = b, best_s = s, best_t = t;
              found = true;
            }
          }
        }
      }
    }
    if (!found) break;
    const std::size_t from_a = members[best_a][best_s].front();
    const std::size_t from_b = members[best_b][best_t].front();
    members[best_a][best_s].pop_front();
    members[best_b][best_t].pop_front();
    members[best_b][best_s].push_back(from_a);
    members[best_a][best_t].push_back(from_b);
    subset_of[from_a] = static_cast<int>(best_b);
    subset_of[from_b] = static_cast<int>(best_a);
    for (std::size_t l = 0; l < kNumEmotions; ++l) {
      const double shift = static_cast<double>((best_t >> l) & 1) - static_cast<double>((best_s >> l) & 1);
      count[best_a][l] += shift;
      count[best_b][l] -= shift;
    }
  }
}

}  // namespace

DatasetSplit stratified_split(const std::vector<RawRecord>& records, const SplitRatios& ratios,
                              std::uint64_t seed) {
  if (records.empty()) throw DataError("cannot split an empty record list");
  const std::array<double, 3> fractions = {ratios.train, ratios.test, ratios.validation};
  for (double f : fractions) {
    if (!(f > 0.0)) throw ConfigError("split ratios must be positive");
  }
  if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  constexpr std::size_t kSubsets = 3;
  const std::size_t n = records.size();

  // Largest-remainder rounding of subset sizes; ties go to the earlier subset.
  std::array<std::size_t, kSubsets> capacity{};
  std::array<double, kSubsets> remainder{};
  std::size_t assigned_total = 0;
  for (std::size_t j = 0; j < kSubsets; ++j) {
    const double exact = fractions[j] * static_cast<double>(n);
    capacity[j] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[j] = exact - static_cast<double>(capacity[j]);
    assigned_total += capacity[j];
  }
  std::array<std::size_t, kSubsets> by_remainder = {0, 1, 2};
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned_total < n; ++k, ++assigned_total) ++capacity[by_remainder[k % kSubsets]];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::array<std::size_t, kNumEmotions> remaining_positives{};
  for (const RawRecord& r : records) {
    for (std::size_t l = 0; l < kNumEmotions; ++l) remaining_positives[l] += r.labels.values[l];
  }
  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    if (remaining_positives[l] < kSubsets) split.best_effort_labels.push_back(kEmotions[l]);
  }

  std::array<std::array<double, kNumEmotions>, kSubsets> desired{};
  for (std::size_t j = 0; j < kSubsets; ++j) {
    for (std::size_t l = 0; l < kNumEmotions; ++l) {
      desired[j][l] = fractions[j] * static_cast<double>(remaining_positives[l]);
    }
  }

  std::vector<int> subset_of(n, -1);
  auto assign = [&](std::size_t i, std::size_t j) {
    subset_of[i] = static_cast<int>(j);
    --capacity[j];
    for (std::size_t l = 0; l < kNumEmotions; ++l) {
      if (records[i].labels.values[l]) {
        desired[j][l] -= 1.0;
        --remaining_positives[l];
      }
    }
  };

  for (;;) {
    std::optional<std::size_t> rarest;
    for (std::size_t l = 0; l < kNumEmotions; ++l) {
      if (remaining_positives[l] > 0 &&
          (!rarest || remaining_positives[l] < remaining_positives[*rarest])) {
        rarest = l;
      }
    }
    if (!rarest) break;
    const std::size_t label = *rarest;
    for (std::size_t i : order) {
      if (subset_of[i] >= 0 || !records[i].labels.values[label]) continue;
      std::optional<std::size_t> best;
      for (std::size_t j = 0; j < kSubsets; ++j) {
        if (capacity[j] == 0) continue;
        if (!best || desired[j][label] > desired[*best][label] ||
            (desired[j][label] == desired[*best][label] && capacity[j] > capacity[*best])) {
          best = j;
        }
      }
      assign(i, *best);
    }
  }
  for (std::size_t i : order) {
    if (subset_of[i] >= 0) continue;
    std::size_t best = 0;
    for (std::size_t j = 1; j < kSubsets; ++j) {
      if (capacity[j] > capacity[best]) best = j;
    }
    assign(i, best);
  }
  refine_by_swaps(records, order, subset_of);

  for (std::size_t i : order) {
    const std::string& id = records[i].id;
    switch (subset_of[i]) {
      case 0: split.train_ids.push_back(id); break;
      case 1: split.test_ids.push_back(id); break;
      default: split.validation_ids.push_back(id); break;
    }
  }
  return split;
}

CorpusStats compute_stats(const std::vector<RawRecord>& records, std::size_t top_terms) {
  if (records.empty()) throw DataError("cannot compute statistics of an empty corpus");
  CorpusStats stats;
  stats.record_count = records.size();

  std::vector<double> sentences_per_entry;
  std::vector<double> words_per_sentence;
  std::unordered_map<std::string, std::size_t> term_counts;
  std::map<std::string, std::size_t> platform_counts;
  std::size_t with_platform = 0;
  std::size_t multi = 0;
  for (const RawRecord& r : records) {
    for (std::size_t l = 0; l < kNumEmotions; ++l) stats.per_label_counts[l] += r.labels.values[l];
    if (r.labels.count() >= 2) ++multi;
    const std::vector<std::string> sentences = split_sentences(r.text);
    sentences_per_entry.push_back(static_cast<double>(sentences.size()));
    for (const std::string& s : sentences) {
      words_per_sentence.push_back(static_cast<double>(tokenize(s).size()));
    }
    for (std::string& token : tokenize(preprocess(r.text))) ++term_counts[std::move(token)];
    if (r.platform) {
      ++platform_counts[*r.platform];
      ++with_platform;
    }
  }
  auto mean_std = [](const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    const double n = static_cast<double>(xs.size());
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / n);
    return out;
  };
  stats.sentences_per_entry = mean_std(sentences_per_entry);
  stats.words_per_sentence = mean_std(words_per_sentence);
  stats.multi_label_fraction = static_cast<double>(multi) / static_cast<double>(records.size());
  for (const auto& [platform, count] : platform_counts) {
    stats.platform_shares[platform] = static_cast<double>(count) / static_cast<double>(with_platform);
  }
  stats.top_terms.assign(term_counts.begin(), term_counts.end());
  std::sort(stats.top_terms.begin(), stats.top_terms.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (stats.top_terms.size() > top_terms) stats.top_terms.resize(top_terms);
  return stats;
}

}  // namespace emoxai
