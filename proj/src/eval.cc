#include "emoxai/eval.h"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"

namespace emoxai {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

nlohmann::json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

std::string_view averaging_name(Averaging a) {
  switch (a) {
    case Averaging::kMicro: return "micro";
    case Averaging::kMacro: return "macro";
    case Averaging::kWeighted: return "weighted";
  }
  return "macro";
}

std::optional<Averaging> parse_averaging(std::string_view name) {
  if (name == "micro") return Averaging::kMicro;
  if (name == "macro") return Averaging::kMacro;
  if (name == "weighted") return Averaging::kWeighted;
  return std::nullopt;
}

ConfusionCounts confusion(std::span<const LabelVector> predictions, std::span<const LabelVector> gold,
                          Emotion label) {
  if (predictions.size() != gold.size()) throw DataError("prediction and gold lists differ in length");
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predictions[i][label];
    const bool g = gold[i][label];
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Prf prf(const ConfusionCounts& c) {
  Prf out;
  const auto tp = static_cast<double>(c.tp);
  out.precision = ratio(tp, tp + static_cast<double>(c.fp));
  out.recall = ratio(tp, tp + static_cast<double>(c.fn));
  out.f1 = ratio(2.0 * out.precision * out.recall, out.precision + out.recall);
  return out;
}

Prf aggregate(std::span<const ConfusionCounts> per_label, Averaging mode) {
  if (mode == Averaging::kMicro) {
    ConfusionCounts sum;
    for (const auto& c : per_label) sum += c;
    return prf(sum);
  }
  Prf out;
  double total_weight = 0.0;
  for (const auto& c : per_label) {
    const double w = mode == Averaging::kMacro ? 1.0 : static_cast<double>(c.support());
    const Prf p = prf(c);
    out.precision += w * p.precision;
    out.recall += w * p.recall;
    out.f1 += w * p.f1;
    total_weight += w;
  }
  out.precision = ratio(out.precision, total_weight);
  out.recall = ratio(out.recall, total_weight);
  out.f1 = ratio(out.f1, total_weight);
  return out;
}

const Prf& MetricsReport::averaged(Averaging mode) const {
  switch (mode) {
    case Averaging::kMicro: return micro;
    case Averaging::kWeighted: return weighted;
    case Averaging::kMacro: break;
  }
  return macro;
}

MetricsReport evaluate(std::span<const LabelVector> predictions, std::span<const LabelVector> gold,
                       bool with_subset_accuracy) {
  if (predictions.size() != gold.size()) throw DataError("prediction and gold lists differ in length");
  MetricsReport report;
  report.instances = gold.size();
  std::array<ConfusionCounts, kNumEmotions> counts;
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    counts[l] = confusion(predictions, gold, kEmotions[l]);
    LabelMetrics& m = report.per_label[l];
    m.counts = counts[l];
    m.prf = prf(counts[l]);
    m.support = counts[l].support();
    m.accuracy = ratio(static_cast<double>(counts[l].tp + counts[l].tn), static_cast<double>(counts[l].total()));
  }
  report.micro = aggregate(counts, Averaging::kMicro);
  report.macro = aggregate(counts, Averaging::kMacro);
  report.weighted = aggregate(counts, Averaging::kWeighted);
  if (with_subset_accuracy) {
    std::size_t exact = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) exact += predictions[i] == gold[i];
    report.subset_accuracy = ratio(static_cast<double>(exact), static_cast<double>(gold.size()));
  }
  return report;
}

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json per_label = nlohmann::json::object();
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    const LabelMetrics& m = report.per_label[l];
    per_label[std::string(kEmotionNames[l])] = {
        {"precision", m.prf.precision}, {"recall", m.prf.recall}, {"f1", m.prf.f1},
        {"accuracy", m.accuracy},       {"support", m.support},
        {"confusion", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"fn", m.counts.fn}, {"tn", m.counts.tn}}}};
  }
  nlohmann::json doc = {{"instances", report.instances},
                        {"per_label", std::move(per_label)},
                        {"micro", prf_json(report.micro)},
                        {"macro", prf_json(report.macro)},
                        {"weighted", prf_json(report.weighted)}};
  if (report.subset_accuracy) doc["subset_accuracy"] = *report.subset_accuracy;
  return doc;
}

std::string report_table(const MetricsReport& report, char delimiter) {
  const std::string d(1, delimiter);
  std::string out = "label" + d + "tp" + d + "fp" + d + "fn" + d + "tn" + d + "precision" + d + "recall" + d +
                    "f1" + d + "accuracy" + d + "support\n";
  for (std::size_t l = 0; l < kNumEmotions; ++l) {
    const LabelMetrics& m = report.per_label[l];
    out += std::string(kEmotionNames[l]) + d + std::to_string(m.counts.tp) + d + std::to_string(m.counts.fp) + d +
           std::to_string(m.counts.fn) + d + std::to_string(m.counts.tn) + d + fixed(m.prf.precision) + d +
           fixed(m.prf.recall) + d + fixed(m.prf.f1) + d + fixed(m.accuracy) + d + std::to_string(m.support) + "\n";
  }
  for (Averaging a : {Averaging::kMicro, Averaging::kMacro, Averaging::kWeighted}) {
    const Prf& p = report.averaged(a);
    out += std::string(averaging_name(a)) + d + d + d + d + d + fixed(p.precision) + d + fixed(p.recall) + d +
           fixed(p.f1) + d + d + "\n";
  }
  return out;
}

}  // namespace emoxai
