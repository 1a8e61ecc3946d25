#ifndef EMOXAI_DECOMP_H_
#define EMOXAI_DECOMP_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emoxai/sparse.h"

namespace emoxai {

struct PcaConfig {
  // Fixed component count. When unset, the smallest k reaching
  // variance_target of the total variance is kept, capped at max_components.
  std::optional<std::size_t> components;
  double variance_target = 0.95;
  std::size_t max_components = 300;
  // Feature dimensions up to this use an exact dense eigendecomposition of
  // the covariance; larger ones use block subspace iteration.
  std::size_t dense_threshold = 512;
  double tolerance = 1e-9;
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 0;
};

class PcaModel {
 public:
  static constexpr std::string_view kSchema = "emoxai.pca/1";

  // Centers implicitly: X stays sparse, the mean is carried separately.
  // Throws ConfigError when k is outside [1, min(n, d)] or n < 2, and
  // DataError "degenerate covariance" when X has no variance.
  static PcaModel fit(const FeatureMatrix& x, const PcaConfig& config);

  // components * (x - mean). Throws DataError on a dimension mismatch.
  std::vector<double> project(const SparseVector& x) const;
  FeatureMatrix project_all(const FeatureMatrix& x) const;

  std::size_t input_dim() const { return mean_.size(); }
  std::size_t k() const { return explained_variance_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  // Row-major k x d.
  const std::vector<double>& components() const { return components_; }
  std::span<const double> component(std::size_t i) const {
    return std::span<const double>(components_).subspan(i * input_dim(), input_dim());
  }
  const std::vector<double>& explained_variance() const { return explained_variance_; }
  double total_variance() const { return total_variance_; }
  std::size_t iterations() const { return iterations_; }

  nlohmann::json to_json() const;
  static PcaModel from_json(const nlohmann::json& doc);

 private:
  void finalize();

  std::vector<double> mean_;
  std::vector<double> components_;
  std::vector<double> explained_variance_;
  std::vector<double> projected_mean_;
  double total_variance_ = 0.0;
  std::size_t iterations_ = 0;
};

}  // namespace emoxai

#endif  // EMOXAI_DECOMP_H_
