#include "emoxai/decomp.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "emoxai/error.h"
#include "emoxai/rng.h"

namespace emoxai {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;


// Implicitly centered sample covariance of a sparse matrix.
class CovarianceOperator {
 public:
  CovarianceOperator(const FeatureMatrix& x, const Eigen::VectorXd& mean)
      : x_(x), mean_(mean), n_(static_cast<double>(x.size())) {}

  // (X^T X V - n mean mean^T V) / (n - 1)
  Eigen::MatrixXd apply(const Eigen::MatrixXd& v) const {
    const auto b = v.cols();
    const RowMatrix vr = v;
    RowMatrix xv = RowMatrix::Zero(static_cast<Eigen::Index>(x_.size()), b);
    for (std::size_t r = 0; r < x_.size(); ++r) {
      const auto idx = x_.rows[r].indices();
      const auto val = x_.rows[r].values();
      for (std::size_t e = 0; e < idx.size(); ++e) xv.row(static_cast<Eigen::Index>(r)) += val[e] * vr.row(idx[e]);
    }
    RowMatrix out = RowMatrix::Zero(v.rows(), b);
    for (std::size_t r = 0; r < x_.size(); ++r) {
      const auto idx = x_.rows[r].indices();
      const auto val = x_.rows[r].values();
      for (std::size_t e = 0; e < idx.size(); ++e) out.row(idx[e]) += val[e] * xv.row(static_cast<Eigen::Index>(r));
    }
    const Eigen::RowVectorXd mean_t_v = mean_.transpose() * v;
    Eigen::MatrixXd result = out;
    result.noalias() -= n_ * mean_ * mean_t_v;
    return result / (n_ - 1.0);
  }

 private:
  const FeatureMatrix& x_;
  const Eigen::VectorXd& mean_;
  double n_;
};

// Cholesky QR on the b x b Gram matrix; Householder only when the block is
// too ill-conditioned for the factorization to succeed.
bool cholesky_orthonormalize(Eigen::MatrixXd& z) {
  Eigen::MatrixXd gram(z.cols(), z.cols());
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(gram.selfadjointView<Eigen::Lower>());
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd l = llt.matrixL();
  if (l.diagonal().minCoeff() <= 1e-7 * l.diagonal().maxCoeff()) return false;
  z = llt.matrixU().solve<Eigen::OnTheRight>(z);
  return true;
}

Eigen::MatrixXd orthonormalize(Eigen::MatrixXd z, const Eigen::MatrixXd& locked) {
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) z -= locked * (locked.transpose() * z);
    if (!cholesky_orthonormalize(z)) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
      z = qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
    }
  }
  return z;
}

struct EigenPairs {
  Eigen::VectorXd values;   // non-increasing
  Eigen::MatrixXd vectors;  // d x m, column i pairs with values(i)
  std::size_t iterations = 0;
};

EigenPairs dense_eigen(const FeatureMatrix& x, const Eigen::VectorXd& mean, std::size_t count) {
  const auto d = static_cast<Eigen::Index>(x.dim);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (const SparseVector& row : x.rows) {
    const auto idx = row.indices();
    const auto val = row.values();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) gram(idx[a], idx[b]) += val[a] * val[b];
    }
  }
  const double n = static_cast<double>(x.size());
  const Eigen::MatrixXd cov = (gram - n * mean * mean.transpose()) / (n - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DataError("covariance eigendecomposition failed");
  EigenPairs out;
  const auto m = static_cast<Eigen::Index>(count);
  out.values = solver.eigenvalues().reverse().head(m);
  out.vectors = solver.eigenvectors().rowwise().reverse().leftCols(m);
  return out;
}

EigenPairs subspace_iteration(const CovarianceOperator& cov, std::size_t d, std::size_t count,
                              const PcaConfig& config) {
  // Extra columns widen the spectral gap that sets the convergence rate.
  const std::size_t block = std::min(d, count + std::max<std::size_t>(10, count / 8));
  Rng rng(config.seed);
  Eigen::MatrixXd active(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(block));
  for (Eigen::Index j = 0; j < active.cols(); ++j) {
    for (Eigen::Index i = 0; i < active.rows(); ++i) active(i, j) = rng.uniform01() - 0.5;
  }
  Eigen::MatrixXd locked(static_cast<Eigen::Index>(d), 0);
  std::vector<double> locked_values;
  active = orthonormalize(active, locked);

  EigenPairs out;
  double scale = 0.0;
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    out.iterations = it;
    Eigen::MatrixXd z = cov.apply(active);
    if (locked.cols() > 0) z -= locked * (locked.transpose() * z);
    const Eigen::MatrixXd t = active.transpose() * z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 * (t + t.transpose()));
    const Eigen::MatrixXd s = small.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = small.eigenvalues().reverse();
    active = active * s;
    z = z * s;
    if (locked_values.empty()) scale = std::max(scale, std::abs(theta(0)));

    // Lock the converged leading prefix of Ritz pairs.
    Eigen::Index converged = 0;
    while (converged < active.cols() && locked_values.size() + static_cast<std::size_t>(converged) < count) {
      const auto i = converged;
      const double z_norm = z.col(i).norm();
      const double residual = (z.col(i) - theta(i) * active.col(i)).norm();
      const bool null_direction = z_norm <= 1e-14 * std::max(scale, 1e-300);
      if (!null_direction && residual > config.tolerance * z_norm) break;
      ++converged;
    }
    if (converged > 0) {
      const Eigen::Index m = locked.cols();
      locked.conservativeResize(Eigen::NoChange, m + converged);
      locked.rightCols(converged) = active.leftCols(converged);
      for (Eigen::Index i = 0; i < converged; ++i) locked_values.push_back(theta(i));
    }
    if (locked_values.size() >= count || it == config.max_iterations) {
      // Fill any unconverged tail with the current Ritz estimates.
      Eigen::Index i = converged;
      while (locked_values.size() < count) {
        const Eigen::Index m = locked.cols();
        locked.conservativeResize(Eigen::NoChange, m + 1);
        locked.col(m) = active.col(i);
        locked_values.push_back(theta(i));
        ++i;
      }
      break;
    }
    const Eigen::Index remaining = active.cols() - converged;
    active = orthonormalize(z.rightCols(remaining), locked);
  }
  out.values = Eigen::Map<const Eigen::VectorXd>(locked_values.data(),
                                                 static_cast<Eigen::Index>(locked_values.size()));
  out.vectors = locked;
  // Locking order follows convergence, which can differ from value order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(out.values.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return out.values(a) > out.values(b); });
  EigenPairs sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.values(static_cast<Eigen::Index>(i)) = out.values(order[i]);
    sorted.vectors.col(static_cast<Eigen::Index>(i)) = out.vectors.col(order[i]);
  }
  return sorted;
}

}  // namespace

PcaModel PcaModel::fit(const FeatureMatrix& x, const PcaConfig& config) {
  const std::size_t n = x.size();
  const std::size_t d = x.dim;
  if (n < 2) throw ConfigError("PCA needs at least two rows");
  if (d == 0) throw ConfigError("PCA needs at least one feature");
  const std::size_t limit = std::min(n, d);
  if (config.components && (*config.components < 1 || *config.components > limit)) {
    throw ConfigError("component count " + std::to_string(*config.components) +
                      " outside [1, " + std::to_string(limit) + "]");
  }
  for (const SparseVector& row : x.rows) {
    if (row.dim() != d) throw DataError("PCA input rows have inconsistent dimensions");
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  Eigen::VectorXd squares = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (const SparseVector& row : x.rows) {
    const auto idx = row.indices();
    const auto val = row.values();
    for (std::size_t e = 0; e < idx.size(); ++e) {
      mean(idx[e]) += val[e];
      squares(idx[e]) += val[e] * val[e];
    }
  }
  const double nd = static_cast<double>(n);
  mean /= nd;
  double total = 0.0;
  double raw = 0.0;
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    total += (squares(j) - nd * mean(j) * mean(j)) / (nd - 1.0);
    raw += squares(j) / (nd - 1.0);
  }
  if (!(total > 1e-12 * raw)) throw DataError("degenerate covariance");

  const std::size_t wanted = config.components.value_or(std::min(config.max_components, limit));
  if (wanted < 1) throw ConfigError("max_components must be at least 1");
  EigenPairs pairs;
  if (d <= config.dense_threshold) {
    pairs = dense_eigen(x, mean, wanted);
  } else {
    CovarianceOperator cov(x, mean);
    pairs = subspace_iteration(cov, d, wanted, config);
  }

  std::size_t k = wanted;
  if (!config.components) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < wanted; ++i) {
      cumulative += std::max(0.0, pairs.values(static_cast<Eigen::Index>(i)));
      if (cumulative >= config.variance_target * total) {
        k = i + 1;
        break;
      }
    }
  }

  PcaModel model;
  model.mean_.assign(mean.data(), mean.data() + mean.size());
  model.components_.resize(k * d);
  model.total_variance_ = total;
  model.iterations_ = pairs.iterations;
  CovarianceOperator cov(x, mean);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXd v = pairs.vectors.col(static_cast<Eigen::Index>(i));
    v.normalize();
    // Sign convention: the largest-magnitude coordinate is positive.
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < v.size(); ++j) {
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    }
    if (v(arg) < 0) v = -v;
    std::copy(v.data(), v.data() + v.size(), model.components_.begin() + static_cast<std::ptrdiff_t>(i * d));
    const Eigen::MatrixXd cv = cov.apply(v);
    model.explained_variance_.push_back(std::max(0.0, v.dot(cv.col(0))));
  }
  // Rayleigh quotients can reorder values that tie to rounding.
  for (std::size_t i = 1; i < k; ++i) {
    model.explained_variance_[i] = std::min(model.explained_variance_[i], model.explained_variance_[i - 1]);
  }
  model.finalize();
  return model;
}

void PcaModel::finalize() {
  const std::size_t d = input_dim();
  projected_mean_.assign(k(), 0.0);
  for (std::size_t i = 0; i < k(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) sum += components_[i * d + j] * mean_[j];
    projected_mean_[i] = sum;
  }
}

std::vector<double> PcaModel::project(const SparseVector& x) const {
  if (x.dim() != input_dim()) {
    throw DataError("PCA input has dimension " + std::to_string(x.dim()) + ", model expects " +
                    std::to_string(input_dim()));
  }
  std::vector<double> out(k());
  for (std::size_t i = 0; i < k(); ++i) out[i] = x.dot(component(i)) - projected_mean_[i];
  return out;
}

FeatureMatrix PcaModel::project_all(const FeatureMatrix& x) const {
  FeatureMatrix out;
  out.dim = k();
  out.rows.reserve(x.size());
  for (const SparseVector& row : x.rows) out.rows.push_back(SparseVector::from_dense(project(row)));
  return out;
}

nlohmann::json PcaModel::to_json() const {
  nlohmann::json doc;
  doc["schema"] = kSchema;
  doc["mean"] = mean_;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < k(); ++i) {
    const auto c = component(i);
    rows.push_back(std::vector<double>(c.begin(), c.end()));
  }
  doc["components"] = std::move(rows);
  doc["explained_variance"] = explained_variance_;
  doc["total_variance"] = total_variance_;
  doc["iterations"] = iterations_;
  return doc;
}

PcaModel PcaModel::from_json(const nlohmann::json& doc) {
  if (doc.value("schema", "") != kSchema) {
    throw SchemaError("expected schema '" + std::string(kSchema) + "', found '" +
                      doc.value("schema", "") + "'");
  }
  PcaModel model;
  model.mean_ = doc.at("mean").get<std::vector<double>>();
  model.explained_variance_ = doc.at("explained_variance").get<std::vector<double>>();
  for (const auto& row : doc.at("components")) {
    const auto values = row.get<std::vector<double>>();
    if (values.size() != model.mean_.size()) throw DataError("PCA component length mismatch");
    model.components_.insert(model.components_.end(), values.begin(), values.end());
  }
  if (model.components_.size() != model.k() * model.input_dim()) throw DataError("PCA component count mismatch");
  model.total_variance_ = doc.at("total_variance").get<double>();
  model.iterations_ = doc.at("iterations").get<std::size_t>();
  model.finalize();
  return model;
}

}  // namespace emoxai
