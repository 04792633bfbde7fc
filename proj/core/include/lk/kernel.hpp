#pragma once

#include "lk/geometry.hpp"
#include "lk/sparse.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lk::kernel {

struct KernelConfig {
  double epsilon = 0.0;
  double tilde_epsilon = 0.0;
  Index k_neighbors = 0;
  /// false: every pair is kept (k_neighbors is ignored for the pattern).
  bool sparsify = true;

  /// Throws InvalidArgument unless eps, tilde eps > 0 and 2 <= k <= N.
  void validate(Index n_points) const;
};

/// exp(-(x - y + eps B)^T Cinv (x - y + eps B) / (2 eps)).
double eval_prototypical_kernel(const Vector& x, const Vector& y, const Vector& drift,
                                const Matrix& diffusion_inverse, double epsilon);
/// exp(-|x - y|^2 / (2 tilde_eps)).
double eval_gaussian_kernel(const Vector& x, const Vector& y, double tilde_epsilon);

/// k nearest neighbours of every point by Euclidean ambient distance, the
/// point itself included, ties broken towards the smaller index. Each list is
/// stored in increasing index order so that it doubles as a CSR row pattern.
struct NeighborLists {
  Index n_points = 0;
  Index k = 0;
  std::vector<Index> index;  ///< n_points * k entries, row-major

  std::span<const Index> row(Index i) const {
    return {index.data() + i * k, static_cast<std::size_t>(k)};
  }
};

NeighborLists build_knn_graph(const geometry::PointCloud& cloud, Index k);
/// Pattern containing every pair.
NeighborLists complete_graph(Index n_points);

struct SparseKernelMatrix {
  CsrMatrix matrix;
  double epsilon = 0.0;

  Index size() const { return matrix.rows; }
};

/// Row i holds K(eps, x_i, x_j) over the pattern of row i, with the drift and
/// diffusion of the row point x_i.
SparseKernelMatrix assemble_kernel_matrix(const geometry::PointCloud& cloud,
                                          const geometry::CoefficientField& coeffs,
                                          const KernelConfig& cfg);
SparseKernelMatrix assemble_kernel_matrix(const geometry::PointCloud& cloud,
                                          const geometry::CoefficientField& coeffs, double epsilon,
                                          const NeighborLists& pattern);

/// Isotropic Gaussian kernel at tilde eps on a given pattern.
SparseKernelMatrix assemble_gaussian_matrix(const geometry::PointCloud& cloud, double tilde_epsilon,
                                            const NeighborLists& pattern);

struct MomentReport {
  double m_hat = 0.0;
  double m_se = 0.0;
  Vector b_hat;
  Vector b_se;
  Matrix c_hat;
  Matrix c_se;
  double m_exact = 0.0;
  Index samples = 0;
};

/// Importance-sampling estimates on flat R^d of the zeroth moment
/// eps^{-d/2} int K, the drift (first moment / (m eps)) and the diffusion
/// (centred second moment / (m eps)), with standard errors. The proposal is an
/// isotropic Gaussian wider than c.
MomentReport moment_check(int d, const Matrix& c, const Vector& b, double epsilon, Index samples,
                          std::uint64_t seed);

}  // namespace lk::kernel
