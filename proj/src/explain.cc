#include "emoxai/explain.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/features.h"
#include "emoxai/multilabel.h"
#include "emoxai/rng.h"
#include "emoxai/text.h"

namespace emoxai {

InterpretableInstance make_instance(std::string_view text, const TextScorer& scorer) {
  InterpretableInstance instance;
  instance.text = std::string(text);
  instance.tokens = tokenize(preprocess(text));
  if (instance.tokens.empty()) throw DataError("text is empty after preprocessing");
  for (const std::string& t : instance.tokens) {
    if (std::find(instance.distinct_words.begin(), instance.distinct_words.end(), t) ==
        instance.distinct_words.end()) {
      instance.distinct_words.push_back(t);
    }
  }
  instance.original_score = scorer(instance.text);
  return instance;
}

std::vector<Mask> sample_masks(std::size_t words, std::size_t num_samples, std::uint64_t seed) {
  std::vector<Mask> masks;
  if (num_samples == 0) return masks;
  masks.reserve(num_samples);
  masks.emplace_back(words, true);
  Rng rng(seed);
  std::vector<std::size_t> pool(words);
  for (std::size_t s = 1; s < num_samples; ++s) {
    const std::size_t removed = 1 + static_cast<std::size_t>(rng.uniform_index(words));
    std::iota(pool.begin(), pool.end(), 0);
    Mask mask(words, true);
    for (std::size_t a = 0; a < removed; ++a) {
      const std::size_t b = a + static_cast<std::size_t>(rng.uniform_index(words - a));
      std::swap(pool[a], pool[b]);
      mask[pool[a]] = false;
    }
    masks.push_back(std::move(mask));
  }
  return masks;
}

std::string apply_mask(const InterpretableInstance& instance, const Mask& mask) {
  std::string out;
  for (const std::string& token : instance.tokens) {
    const auto it = std::find(instance.distinct_words.begin(), instance.distinct_words.end(), token);
    if (!mask[static_cast<std::size_t>(it - instance.distinct_words.begin())]) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

double mask_distance(const Mask& mask) {
  const auto kept = static_cast<double>(std::count(mask.begin(), mask.end(), true));
  if (kept == 0.0) return 1.0;
  if (kept == static_cast<double>(mask.size())) return 0.0;
  return 1.0 - kept / (std::sqrt(kept) * std::sqrt(static_cast<double>(mask.size())));
}

RidgeFit weighted_ridge(const std::vector<std::vector<double>>& design, const std::vector<double>& target,
                        const std::vector<double>& weights, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("ridge regularization must be positive");
  if (design.size() != target.size() || design.size() != weights.size() || design.empty()) {
    throw DataError("ridge inputs differ in length or are empty");
  }
  const auto n = static_cast<Eigen::Index>(design.size());
  const auto p = static_cast<Eigen::Index>(design.front().size());
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = design[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const Eigen::Map<const Eigen::VectorXd> y(target.data(), n);
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
  const double total = w.sum();
  if (!(total > 0.0)) throw DataError("ridge sample weights sum to zero");

  const Eigen::RowVectorXd z_mean = (w.transpose() * z) / total;
  const double y_mean = w.dot(y) / total;
  const Eigen::MatrixXd zc = z.rowwise() - z_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  const Eigen::MatrixXd a =
      zc.transpose() * w.asDiagonal() * zc + alpha * Eigen::MatrixXd::Identity(p, p);
  const Eigen::VectorXd b = zc.transpose() * (w.asDiagonal() * yc);

  Eigen::LDLT<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd beta = solver.solve(b);
  for (int refine = 0; refine < 3; ++refine) {
    const Eigen::VectorXd r = b - a * beta;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-12) break;
    beta += solver.solve(r);
  }

  RidgeFit fit;
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  fit.intercept = y_mean - z_mean.dot(beta);
  fit.residual = p > 0 ? (b - a * beta).lpNorm<Eigen::Infinity>() : 0.0;
  const Eigen::VectorXd fitted = (z * beta).array() + fit.intercept;
  const double ss_res = w.dot((y - fitted).array().square().matrix());
  const double ss_tot = w.dot(yc.array().square().matrix());
  // A target constant up to rounding is fitted exactly by the intercept.
  const bool constant = ss_tot <= 1e-24 * w.sum() * std::max(1.0, y_mean * y_mean);
  fit.r_squared = !constant ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

Explanation explain_instance(const TextScorer& scorer, std::string_view text, const LimeConfig& config) {
  if (config.num_samples < 1) throw ConfigError("LIME needs at least one sample");
  if (config.num_features < 1) throw ConfigError("LIME needs at least one feature");
  const InterpretableInstance instance = make_instance(text, scorer);
  const std::size_t words = instance.distinct_words.size();
  const double width = config.kernel_width.value_or(0.75 * std::sqrt(static_cast<double>(words)));
  if (!(width > 0.0)) throw ConfigError("LIME kernel width must be positive");

  const std::vector<Mask> masks = sample_masks(words, config.num_samples, config.seed);
  std::vector<std::vector<double>> design;
  std::vector<double> target;
  std::vector<double> weights;
  design.reserve(masks.size());
  for (const Mask& mask : masks) {
    design.emplace_back(mask.begin(), mask.end());
    target.push_back(scorer(apply_mask(instance, mask)));
    const double d = mask_distance(mask);
    weights.push_back(std::exp(-(d * d) / (width * width)));
  }

  const RidgeFit full = weighted_ridge(design, target, weights, config.ridge);
  std::vector<std::size_t> order(words);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(full.coefficients[a]) > std::abs(full.coefficients[b]);
  });
  const std::size_t k = std::min(config.num_features, words);
  std::vector<std::size_t> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(selected.begin(), selected.end());

  std::vector<std::vector<double>> reduced(design.size(), std::vector<double>(k));
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) reduced[i][j] = design[i][selected[j]];
  }
  const RidgeFit local = weighted_ridge(reduced, target, weights, config.ridge);

  Explanation e;
  e.text = instance.text;
  e.original_score = instance.original_score;
  e.intercept = local.intercept;
  e.local_fit_score = local.r_squared;
  e.num_samples = masks.size();
  e.distinct_words = words;
  e.kernel_width = width;
  e.config = config;
  std::vector<std::size_t> rank(k);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(local.coefficients[a]) > std::abs(local.coefficients[b]);
  });
  for (std::size_t r : rank) e.features.push_back({instance.distinct_words[selected[r]], local.coefficients[r]});
  return e;
}

Explanation explain_instance(const MultiLabelModel& model, std::string_view text, Emotion label,
                             const LimeConfig& config) {
  Explanation e = explain_instance(
      [&](const std::string& t) { return model.decision_score(t, label); }, text, config);
  e.label = label;
  return e;
}

nlohmann::json explanation_to_json(const Explanation& e) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeatureWeight& f : e.features) features.push_back({{"word", f.word}, {"weight", f.weight}});
  return {{"schema", "emoxai.explanation/1"},
          {"label", e.label ? nlohmann::json(emotion_name(*e.label)) : nlohmann::json()},
          {"text", e.text},
          {"original_score", e.original_score},
          {"features", std::move(features)},
          {"intercept", e.intercept},
          {"local_fit_score", e.local_fit_score},
          {"num_samples", e.num_samples},
          {"distinct_words", e.distinct_words},
          {"seed", e.config.seed},
          {"config",
           {{"num_samples", e.config.num_samples},
            {"num_features", e.config.num_features},
            {"kernel_width", e.kernel_width},
            {"ridge", e.config.ridge}}}};
}

}  // namespace emoxai
