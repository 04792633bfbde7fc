#include "lk/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace lk::linalg {
namespace {

double resolve_tol(const Matrix& a, double rel_tol) {
  if (rel_tol >= 0.0) return rel_tol;
  return static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon();
}

}  // namespace

Matrix pseudo_inverse(const Matrix& a, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = (s.size() > 0 ? s[0] : 0.0) * resolve_tol(a, rel_tol);
  Vector s_inv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) s_inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

Index numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  const double cutoff = s[0] * resolve_tol(a, rel_tol);
  return static_cast<Index>((s.array() > cutoff).count());
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_positive_semidefinite(const Matrix& a, double tol) {
  if (!is_symmetric(a, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() >= -tol * std::max(scale, 1e-300);
}

double largest_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace lk::linalg
