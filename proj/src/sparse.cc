#include "emoxai/sparse.h"

#include <algorithm>
#include <cmath>

#include "emoxai/error.h"

namespace emoxai {

SparseVector SparseVector::from_pairs(std::size_t dim,
                                      std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out(dim);
  out.indices_.reserve(pairs.size());
  out.values_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size();) {
    const std::uint32_t index = pairs[i].first;
    if (index >= dim) throw DataError("sparse index out of range");
    double sum = 0.0;
    for (; i < pairs.size() && pairs[i].first == index; ++i) sum += pairs[i].second;
    if (!std::isfinite(sum)) throw DataError("non-finite sparse value");
    if (sum != 0.0) {
      out.indices_.push_back(index);
      out.values_.push_back(sum);
    }
  }
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!std::isfinite(dense[i])) throw DataError("non-finite dense value");
    if (dense[i] != 0.0) {
      out.indices_.push_back(static_cast<std::uint32_t>(i));
      out.values_.push_back(dense[i]);
    }
  }
  return out;
}

double SparseVector::at(std::size_t index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return 0.0;
  return values_[static_cast<std::size_t>(it - indices_.begin())];
}

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < indices_.size() && j < other.indices_.size()) {
    if (indices_[i] < other.indices_[j]) {
      ++i;
    } else if (indices_[i] > other.indices_[j]) {
      ++j;
    } else {
      sum += values_[i] * other.values_[j];
      ++i;
      ++j;
    }
  }
  return sum;
}

double SparseVector::dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < indices_.size(); ++i) sum += values_[i] * dense[indices_[i]];
  return sum;
}

double SparseVector::squared_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return sum;
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < indices_.size(); ++i) out[indices_[i]] = values_[i];
  return out;
}

void SparseVector::scale(double factor) {
  if (factor == 0.0) {
    indices_.clear();
    values_.clear();
    return;
  }
  for (double& v : values_) v *= factor;
}

}  // namespace emoxai
