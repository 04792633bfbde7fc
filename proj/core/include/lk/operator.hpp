#pragma once

#include "lk/kernel.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace lk::op {

struct DensityEstimate {
  Vector q_hat;
  double tilde_epsilon = 0.0;
};

/// q_i = sum over the kNN pattern of row i of the Gaussian kernel at tilde eps.
DensityEstimate estimate_density(const geometry::PointCloud& cloud, double tilde_epsilon, Index k);
DensityEstimate estimate_density(const geometry::PointCloud& cloud, double tilde_epsilon,
                                 const kernel::NeighborLists& pattern);

/// K_ij / q_j.
kernel::SparseKernelMatrix right_normalize(const kernel::SparseKernelMatrix& k_hat, const DensityEstimate& q);

struct GeneratorMatrix {
  CsrMatrix s_hat;  ///< row-stochastic
  double epsilon = 0.0;
  bool debiased = false;
  std::optional<double> tilde_epsilon;  ///< set when debiased
  Vector row_sums;                      ///< row sums before normalization

  Index size() const { return s_hat.rows; }
};

/// D^-1 K with D the row sums. Throws NumericalError on a row with zero sum.
GeneratorMatrix left_normalize(const kernel::SparseKernelMatrix& k_hat);

/// Matrix-free view of (S - I) / eps. Holds a reference: the generator must
/// outlive it.
class Generator {
 public:
  explicit Generator(const GeneratorMatrix& s) : s_(&s) {}

  Vector apply(const Vector& v) const;
  Vector apply_transpose(const Vector& v) const;
  Index size() const { return s_->size(); }
  double epsilon() const { return s_->epsilon; }
  const GeneratorMatrix& matrix() const { return *s_; }

 private:
  const GeneratorMatrix* s_;
};

Generator assemble_generator(const GeneratorMatrix& s);

/// (S - I) / eps as an Eigen sparse matrix.
Eigen::SparseMatrix<double> generator_sparse(const GeneratorMatrix& s);
/// diag(a) + (S - I) / eps.
Eigen::SparseMatrix<double> system_matrix(const GeneratorMatrix& s, const Vector& shift);
Matrix generator_dense(const GeneratorMatrix& s);

/// Row-wise strict diagonal dominance of (1 - eps a_i) I - S, the matrix
/// -eps (a + L) whose dominance makes the shifted system nonsingular.
bool is_strictly_diagonally_dominant(const GeneratorMatrix& s, const Vector& shift);
/// Smallest row margin |(1 - eps a_i) - S_ii| - sum_{j != i} |S_ij|.
double diagonal_dominance_margin(const GeneratorMatrix& s, const Vector& shift);

/// Kernel matrix, optional density debiasing at cfg.tilde_epsilon, left
/// normalization. The overload with a pattern reuses a cached kNN graph.
GeneratorMatrix build_operator(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                               const kernel::KernelConfig& cfg, bool debias);
GeneratorMatrix build_operator(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                               const kernel::KernelConfig& cfg, bool debias,
                               const kernel::NeighborLists& pattern);

struct TuningReport {
  std::vector<double> epsilon_grid;
  std::vector<double> q;
  std::vector<double> log_q;
  std::vector<double> slope;  ///< d log Q / d log eps
  double epsilon_star = 0.0;
  double d_hat = 0.0;
  Index argmax = 0;
  Index k_used = 0;  ///< pattern size per row; N means all pairs
};

/// 41 values, 2^-30 ... 2^10, one per integer power of two.
std::vector<double> default_tuning_grid();

/// Q(eps) = (1/N^2) sum K(eps, x_i, x_j) over the pattern (all pairs when
/// k = 0 or k = N), slopes by centred differences in log-log (one-sided at
/// the ends), d_hat = 2 max slope, eps* at the first arg-max.
TuningReport tune_bandwidth(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                            const std::vector<double>& grid, Index k = 0);
/// Same with the isotropic Gaussian kernel exp(-|x - y|^2 / (2 eps)).
TuningReport tune_bandwidth_gaussian(const geometry::PointCloud& cloud, const std::vector<double>& grid,
                                     Index k = 0);

}  // namespace lk::op
