#include "emoxai/linear_svm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/rng.h"

namespace emoxai {

double svm_objective(std::span<const double> weights, double bias, const FeatureMatrix& x,
                     const BinaryLabels& y, double lambda) {
  double norm = bias * bias;
  for (double w : weights) norm += w * w;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sign = y[i] ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - sign * (x.rows[i].dot(weights) + bias));
  }
  return 0.5 * lambda * norm + loss / static_cast<double>(x.size());
}

LinearSvmModel LinearSvmModel::fit(const FeatureMatrix& x, const BinaryLabels& y, const SvmConfig& config) {
  require_two_classes(x, y);
  if (!(config.lambda > 0.0)) throw ConfigError("SVM lambda must be positive");
  if (config.epochs < 1) throw ConfigError("SVM epochs must be at least 1");
  const std::size_t n = x.size();
  const std::size_t d = x.dim;

  // w = scale * v, the last coordinate of v is the bias weight.
  std::vector<double> v(d + 1, 0.0);
  double scale = 1.0;
  double v_norm2 = 0.0;
  const double radius = 1.0 / std::sqrt(config.lambda);

  auto recompute_norm = [&] {
    v_norm2 = 0.0;
    for (double a : v) v_norm2 += a * a;
  };
  auto fold_scale = [&] {
    for (double& a : v) a *= scale;
    scale = 1.0;
    recompute_norm();
  };

  std::vector<double> best_weights(d, 0.0);
  double best_bias = 0.0;
  double best_objective = svm_objective(best_weights, 0.0, x, y, config.lambda);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const SparseVector& row = x.rows[i];
      const double sign = y[i] ? 1.0 : -1.0;
      const double eta = 1.0 / (config.lambda * static_cast<double>(t));
      const double raw = row.dot(std::span<const double>(v).first(d)) + v[d];
      const double margin = sign * scale * raw;

      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      if (shrink == 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_norm2 = 0.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double c = eta * sign / scale;
        const double current = (shrink == 0.0) ? 0.0 : raw;
        v_norm2 += 2.0 * c * current + c * c * (row.squared_norm() + 1.0);
        const auto idx = row.indices();
        const auto val = row.values();
        for (std::size_t e = 0; e < idx.size(); ++e) v[idx[e]] += c * val[e];
        v[d] += c;
      }
      const double norm = scale * std::sqrt(std::max(0.0, v_norm2));
      if (norm > radius) scale *= radius / norm;
      if (scale < 1e-9) fold_scale();
    }
    fold_scale();
    const std::span<const double> w(v.data(), d);
    const double objective = svm_objective(w, v[d], x, y, config.lambda);
    if (objective < best_objective) {
      best_objective = objective;
      best_weights.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
      best_bias = v[d];
    }
  }
  return LinearSvmModel(std::move(best_weights), best_bias, config);
}

double LinearSvmModel::decision_score(const SparseVector& x) const {
  if (x.dim() != weights_.size()) throw DataError("SVM input dimension mismatch");
  return x.dot(weights_) + bias_;
}

nlohmann::json LinearSvmModel::to_json() const {
  return {{"family", family_name(family())},
          {"config", {{"lambda", config_.lambda}, {"epochs", config_.epochs}, {"seed", config_.seed}}},
          {"params", {{"weights", weights_}, {"bias", bias_}}}};
}

LinearSvmModel LinearSvmModel::from_json(const nlohmann::json& doc) {
  const auto& c = doc.at("config");
  SvmConfig config{c.at("lambda").get<double>(), c.at("epochs").get<std::size_t>(),
                   c.at("seed").get<std::uint64_t>()};
  const auto& p = doc.at("params");
  return LinearSvmModel(p.at("weights").get<std::vector<double>>(), p.at("bias").get<double>(), config);
}

}  // namespace emoxai
