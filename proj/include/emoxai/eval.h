#ifndef EMOXAI_EVAL_H_
#define EMOXAI_EVAL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/labels.h"

namespace emoxai {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  std::size_t support() const { return tp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class Averaging { kMicro, kMacro, kWeighted };

std::string_view averaging_name(Averaging a);
std::optional<Averaging> parse_averaging(std::string_view name);

// Throws DataError when the lists differ in length.
ConfusionCounts confusion(std::span<const LabelVector> predictions, std::span<const LabelVector> gold,
                          Emotion label);

// Every 0/0 ratio is defined as 0.
Prf prf(const ConfusionCounts& counts);

// micro: prf of summed counts; macro: plain mean of per-label metrics;
// weighted: mean weighted by gold positives, 0 when no label has support.
Prf aggregate(std::span<const ConfusionCounts> per_label, Averaging mode);

struct LabelMetrics {
  ConfusionCounts counts;
  Prf prf;
  double accuracy = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  std::size_t instances = 0;
  std::array<LabelMetrics, kNumEmotions> per_label;
  Prf micro;
  Prf macro;
  Prf weighted;
  // Exact-match ratio; only computed on request.
  std::optional<double> subset_accuracy;

  const Prf& averaged(Averaging mode) const;
};

MetricsReport evaluate(std::span<const LabelVector> predictions, std::span<const LabelVector> gold,
                       bool with_subset_accuracy = false);

nlohmann::json report_to_json(const MetricsReport& report);
// One row per emotion with counts and metrics, then micro/macro/weighted rows.
std::string report_table(const MetricsReport& report, char delimiter = ',');

}  // namespace emoxai

#endif  // EMOXAI_EVAL_H_
