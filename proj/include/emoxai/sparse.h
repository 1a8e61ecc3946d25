#ifndef EMOXAI_SPARSE_H_
#define EMOXAI_SPARSE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace emoxai {

// Sorted (index, value) pairs over a fixed dimension. Indices are strictly
// increasing and every stored value is nonzero and finite.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}

  // Sorts, merges duplicate indices by summation and drops zeros.
  // Throws DataError on an out-of-range index or a non-finite value.
  static SparseVector from_pairs(std::size_t dim,
                                 std::vector<std::pair<std::uint32_t, double>> pairs);

  // Keeps every nonzero coordinate of a dense vector.
  static SparseVector from_dense(std::span<const double> dense);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  std::span<const std::uint32_t> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }

  // Value at a coordinate, 0 when absent. O(log nnz).
  double at(std::size_t index) const;

  double dot(const SparseVector& other) const;
  double dot(std::span<const double> dense) const;
  double squared_norm() const;

  std::vector<double> to_dense() const;

  void scale(double factor);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

// Row-major collection of sparse rows sharing one dimension.
struct FeatureMatrix {
  std::size_t dim = 0;
  std::vector<SparseVector> rows;

  std::size_t size() const { return rows.size(); }
};

}  // namespace emoxai

#endif  // EMOXAI_SPARSE_H_
