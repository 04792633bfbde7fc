#include "lk/operator.hpp"

#include "lk/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lk::op {

DensityEstimate estimate_density(const geometry::PointCloud& cloud, double tilde_epsilon, Index k) {
  if (cloud.size() < 1) throw InvalidArgument("estimate_density: empty cloud");
  return estimate_density(cloud, tilde_epsilon, kernel::build_knn_graph(cloud, std::min(k, cloud.size())));
}

DensityEstimate estimate_density(const geometry::PointCloud& cloud, double tilde_epsilon,
                                 const kernel::NeighborLists& pattern) {
  const auto h = kernel::assemble_gaussian_matrix(cloud, tilde_epsilon, pattern);
  return {h.matrix.row_sums(), tilde_epsilon};
}

kernel::SparseKernelMatrix right_normalize(const kernel::SparseKernelMatrix& k_hat, const DensityEstimate& q) {
  if (q.q_hat.size() != k_hat.matrix.cols) throw InvalidArgument("right_normalize: size mismatch");
  for (Index j = 0; j < q.q_hat.size(); ++j) {
    if (!(q.q_hat[j] > 0.0)) {
      throw InvalidArgument("right_normalize: density estimate is not positive at point " + std::to_string(j));
    }
  }
  kernel::SparseKernelMatrix out = k_hat;
  auto& m = out.matrix;
  for (std::size_t t = 0; t < m.val.size(); ++t) m.val[t] /= q.q_hat[m.col[t]];
  return out;
}

GeneratorMatrix left_normalize(const kernel::SparseKernelMatrix& k_hat) {
  GeneratorMatrix g;
  g.s_hat = k_hat.matrix;
  g.epsilon = k_hat.epsilon;
  g.row_sums = k_hat.matrix.row_sums();
  auto& m = g.s_hat;
  for (Index i = 0; i < m.rows; ++i) {
    const double d = g.row_sums[i];
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericalError("left_normalize: row " + std::to_string(i) +
                           " has zero kernel sum (isolated point; increase k or epsilon)");
    }
    for (Index t = m.row_begin(i); t < m.row_end(i); ++t) m.val[static_cast<std::size_t>(t)] /= d;
  }
  return g;
}

Vector Generator::apply(const Vector& v) const { return (s_->s_hat.multiply(v) - v) / s_->epsilon; }

Vector Generator::apply_transpose(const Vector& v) const {
  return (s_->s_hat.transpose_multiply(v) - v) / s_->epsilon;
}

Generator assemble_generator(const GeneratorMatrix& s) { return Generator(s); }

Eigen::SparseMatrix<double> generator_sparse(const GeneratorMatrix& s) {
  return system_matrix(s, Vector::Zero(s.size()));
}

Eigen::SparseMatrix<double> system_matrix(const GeneratorMatrix& s, const Vector& shift) {
  const Index n_points = s.size();
  if (shift.size() != n_points) throw InvalidArgument("system_matrix: shift has wrong length");
  const double inv_eps = 1.0 / s.epsilon;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(s.s_hat.nonzeros() + n_points));
  for (Index i = 0; i < n_points; ++i) {
    for (Index t = s.s_hat.row_begin(i); t < s.s_hat.row_end(i); ++t) {
      triplets.emplace_back(i, s.s_hat.col[static_cast<std::size_t>(t)],
                            s.s_hat.val[static_cast<std::size_t>(t)] * inv_eps);
    }
    triplets.emplace_back(i, i, shift[i] - inv_eps);
  }
  Eigen::SparseMatrix<double> a(n_points, n_points);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

Matrix generator_dense(const GeneratorMatrix& s) {
  Matrix l = s.s_hat.to_dense();
  l.diagonal().array() -= 1.0;
  return l / s.epsilon;
}

double diagonal_dominance_margin(const GeneratorMatrix& s, const Vector& shift) {
  if (shift.size() != s.size()) throw InvalidArgument("diagonal dominance: shift has wrong length");
  double margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < s.size(); ++i) {
    double diag = 1.0 - s.epsilon * shift[i];
    double off = 0.0;
    for (Index t = s.s_hat.row_begin(i); t < s.s_hat.row_end(i); ++t) {
      const double v = s.s_hat.val[static_cast<std::size_t>(t)];
      if (s.s_hat.col[static_cast<std::size_t>(t)] == i) {
        diag -= v;
      } else {
        off += std::abs(v);
      }
    }
    margin = std::min(margin, std::abs(diag) - off);
  }
  return margin;
}

bool is_strictly_diagonally_dominant(const GeneratorMatrix& s, const Vector& shift) {
  return diagonal_dominance_margin(s, shift) > 0.0;
}

GeneratorMatrix build_operator(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                               const kernel::KernelConfig& cfg, bool debias) {
  geometry::validate(cloud, coeffs);
  cfg.validate(cloud.size());
  const auto pattern = cfg.sparsify ? kernel::build_knn_graph(cloud, cfg.k_neighbors)
                                    : kernel::complete_graph(cloud.size());
  return build_operator(cloud, coeffs, cfg, debias, pattern);
}

GeneratorMatrix build_operator(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                               const kernel::KernelConfig& cfg, bool debias,
                               const kernel::NeighborLists& pattern) {
  auto k_hat = kernel::assemble_kernel_matrix(cloud, coeffs, cfg.epsilon, pattern);
  if (debias) {
    if (!(cfg.tilde_epsilon > 0.0)) throw InvalidArgument("build_operator: debiasing needs tilde_epsilon > 0");
    k_hat = right_normalize(k_hat, estimate_density(cloud, cfg.tilde_epsilon, pattern));
  }
  GeneratorMatrix g = left_normalize(k_hat);
  g.debiased = debias;
  if (debias) g.tilde_epsilon = cfg.tilde_epsilon;
  return g;
}

}  // namespace lk::op
