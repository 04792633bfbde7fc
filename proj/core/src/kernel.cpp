#include "lk/kernel.hpp"

#include "lk/errors.hpp"

#include <cmath>
#include <string>

namespace lk::kernel {
namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InvalidArgument(std::string("kernel: non-finite ") + what);
}

}  // namespace

void KernelConfig::validate(Index n_points) const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be a positive real");
  if (!(tilde_epsilon > 0.0) || !std::isfinite(tilde_epsilon)) {
    throw InvalidArgument("tilde_epsilon must be a positive real");
  }
  if (sparsify && (k_neighbors < 2 || k_neighbors > n_points)) {
    throw InvalidArgument("k_neighbors must satisfy 2 <= k <= N (k=" + std::to_string(k_neighbors) +
                          ", N=" + std::to_string(n_points) + ")");
  }
}

double eval_prototypical_kernel(const Vector& x, const Vector& y, const Vector& drift,
                                const Matrix& diffusion_inverse, double epsilon) {
  require_finite(x, "x");
  require_finite(y, "y");
  require_finite(drift, "drift");
  if (!diffusion_inverse.allFinite()) throw InvalidArgument("kernel: non-finite diffusion inverse");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("kernel: epsilon must be positive");
  const Vector shifted = x - y + epsilon * drift;
  return std::exp(-shifted.dot(diffusion_inverse * shifted) / (2.0 * epsilon));
}

double eval_gaussian_kernel(const Vector& x, const Vector& y, double tilde_epsilon) {
  require_finite(x, "x");
  require_finite(y, "y");
  if (!(tilde_epsilon > 0.0) || !std::isfinite(tilde_epsilon)) {
    throw InvalidArgument("kernel: tilde_epsilon must be positive");
  }
  return std::exp(-(x - y).squaredNorm() / (2.0 * tilde_epsilon));
}

SparseKernelMatrix assemble_kernel_matrix(const geometry::PointCloud& cloud,
                                          const geometry::CoefficientField& coeffs,
                                          const KernelConfig& cfg) {
  geometry::validate(cloud, coeffs);
  cfg.validate(cloud.size());
  const NeighborLists pattern =
      cfg.sparsify ? build_knn_graph(cloud, cfg.k_neighbors) : complete_graph(cloud.size());
  return assemble_kernel_matrix(cloud, coeffs, cfg.epsilon, pattern);
}

SparseKernelMatrix assemble_kernel_matrix(const geometry::PointCloud& cloud,
                                          const geometry::CoefficientField& coeffs, double epsilon,
                                          const NeighborLists& pattern) {
  geometry::validate(cloud, coeffs);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be a positive real");
  if (pattern.n_points != cloud.size()) throw InvalidArgument("neighbour pattern does not match the cloud");
  const Index n_points = cloud.size();
  const Index n = cloud.ambient_dim();
  const Index k = pattern.k;

  SparseKernelMatrix out;
  out.epsilon = epsilon;
  CsrMatrix& m = out.matrix;
  m.rows = n_points;
  m.cols = n_points;
  m.row_ptr.resize(static_cast<std::size_t>(n_points) + 1);
  m.col = pattern.index;
  m.val.resize(pattern.index.size());

  Vector shifted(n);
  for (Index i = 0; i < n_points; ++i) {
    m.row_ptr[static_cast<std::size_t>(i)] = i * k;
    const auto xi = cloud.ambient.row(i);
    const auto bi = coeffs.drift.row(i);
    const Matrix& ci = coeffs.diffusion_inverse[static_cast<std::size_t>(i)];
    for (Index t = 0; t < k; ++t) {
      const Index j = pattern.index[static_cast<std::size_t>(i * k + t)];
      shifted = (xi - cloud.ambient.row(j) + epsilon * bi).transpose();
      m.val[static_cast<std::size_t>(i * k + t)] = std::exp(-shifted.dot(ci * shifted) / (2.0 * epsilon));
    }
  }
  m.row_ptr.back() = n_points * k;
  return out;
}

SparseKernelMatrix assemble_gaussian_matrix(const geometry::PointCloud& cloud, double tilde_epsilon,
                                            const NeighborLists& pattern) {
  if (!(tilde_epsilon > 0.0) || !std::isfinite(tilde_epsilon)) {
    throw InvalidArgument("tilde_epsilon must be a positive real");
  }
  if (pattern.n_points != cloud.size()) throw InvalidArgument("neighbour pattern does not match the cloud");
  const Index n_points = cloud.size();
  const Index k = pattern.k;
  SparseKernelMatrix out;
  out.epsilon = tilde_epsilon;
  CsrMatrix& m = out.matrix;
  m.rows = n_points;
  m.cols = n_points;
  m.row_ptr.resize(static_cast<std::size_t>(n_points) + 1);
  m.col = pattern.index;
  m.val.resize(pattern.index.size());
  for (Index i = 0; i < n_points; ++i) {
    m.row_ptr[static_cast<std::size_t>(i)] = i * k;
    for (Index t = 0; t < k; ++t) {
      const Index j = pattern.index[static_cast<std::size_t>(i * k + t)];
      const double r2 = (cloud.ambient.row(i) - cloud.ambient.row(j)).squaredNorm();
      m.val[static_cast<std::size_t>(i * k + t)] = std::exp(-r2 / (2.0 * tilde_epsilon));
    }
  }
  m.row_ptr.back() = n_points * k;
  return out;
}

}  // namespace lk::kernel
