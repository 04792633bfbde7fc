#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lk::testing {
namespace {

Vector shifted(const Vector& x, int a, double delta) {
  Vector y = x;
  y[a] += delta;
  return y;
}

double second_partial(const geometry::AnalyticProblem& p, const Vector& x, int a, int b, double h) {
  const auto& u = p.u_true;
  if (a == b) return (u(shifted(x, a, h)) - 2.0 * u(x) + u(shifted(x, a, -h))) / (h * h);
  return (u(shifted(shifted(x, a, h), b, h)) - u(shifted(shifted(x, a, h), b, -h)) -
          u(shifted(shifted(x, a, -h), b, h)) + u(shifted(shifted(x, a, -h), b, -h))) /
         (4.0 * h * h);
}

double apply_with(const geometry::AnalyticProblem& p, const Vector& x, double h,
                  const geometry::Christoffels& gamma) {
  const int d = p.manifold.intrinsic_dim;
  const Matrix g = p.metric_g(x);
  const Matrix g_inv = g.inverse();
  const Matrix c = p.diffusion_c(x);
  const Vector b = p.drift_b(x);
  Vector grad(d);
  for (int a = 0; a < d; ++a) grad[a] = fd_partial(p, x, a, h);
  double out = p.shift_a(x) * p.u_true(x);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out += g_inv(i, j) * b[i] * grad[j];
      double hess = second_partial(p, x, i, j, h);
      for (int k = 0; k < d; ++k) hess -= gamma[static_cast<std::size_t>(k)](i, j) * grad[k];
      out += 0.5 * c(i, j) * hess;
    }
  }
  return out;
}

}  // namespace

double fd_partial(const geometry::AnalyticProblem& p, const Vector& x, int a, double h) {
  return (p.u_true(shifted(x, a, h)) - p.u_true(shifted(x, a, -h))) / (2.0 * h);
}

geometry::Christoffels fd_christoffels(const geometry::AnalyticProblem& p, const Vector& x, double h) {
  const int d = p.manifold.intrinsic_dim;
  std::vector<Matrix> dg(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    dg[static_cast<std::size_t>(l)] = (p.metric_g(shifted(x, l, h)) - p.metric_g(shifted(x, l, -h))) / (2.0 * h);
  }
  const Matrix g_inv = p.metric_g(x).inverse();
  geometry::Christoffels gamma(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          // d_i g_jl + d_j g_il - d_l g_ij
          s += g_inv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                              dg[static_cast<std::size_t>(l)](i, j));
        }
        gamma[static_cast<std::size_t>(k)](i, j) = 0.5 * s;
      }
    }
  }
  return gamma;
}

double fd_apply_operator(const geometry::AnalyticProblem& p, const Vector& x, double h) {
  return apply_with(p, x, h, fd_christoffels(p, x, h));
}

double fd_apply_operator_given_christoffels(const geometry::AnalyticProblem& p, const Vector& x, double h) {
  return apply_with(p, x, h, p.christoffels(x));
}

std::vector<std::vector<Index>> brute_force_knn(const PointMatrix& points, Index k) {
  const Index n = points.rows();
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Index>> all;
    for (Index j = 0; j < n; ++j) {
      double d2 = 0.0;
      for (Index a = 0; a < points.cols(); ++a) d2 += (points(i, a) - points(j, a)) * (points(i, a) - points(j, a));
      all.emplace_back(j == i ? -1.0 : d2, j);
    }
    std::sort(all.begin(), all.end());
    auto& row = out[static_cast<std::size_t>(i)];
    for (Index t = 0; t < k; ++t) row.push_back(all[static_cast<std::size_t>(t)].second);
    std::sort(row.begin(), row.end());
  }
  return out;
}

double reference_kernel(const Vector& x, const Vector& y, const Vector& b, const Matrix& cinv, double eps) {
  const Index n = x.size();
  double q = 0.0;
  for (Index r = 0; r < n; ++r) {
    for (Index s = 0; s < n; ++s) {
      q += (x[r] - y[r] + eps * b[r]) * cinv(r, s) * (x[s] - y[s] + eps * b[s]);
    }
  }
  return std::exp(-q / (2.0 * eps));
}

Matrix dense_generator(const PointMatrix& points, const std::vector<Vector>& drift,
                       const std::vector<Matrix>& cinv, double eps, double tilde_eps, Index k, bool debias) {
  const Index n = points.rows();
  const auto nbrs = brute_force_knn(points, k);
  Matrix mask = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : nbrs[static_cast<std::size_t>(i)]) mask(i, j) = 1.0;
  }
  Matrix kmat = Matrix::Zero(n, n);
  Matrix hmat = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector xi = points.row(i).transpose();
    for (Index j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0) continue;
      const Vector xj = points.row(j).transpose();
      kmat(i, j) = reference_kernel(xi, xj, drift[static_cast<std::size_t>(i)], cinv[static_cast<std::size_t>(i)], eps);
      hmat(i, j) = std::exp(-(xi - xj).squaredNorm() / (2.0 * tilde_eps));
    }
  }
  if (debias) {
    const Vector q = hmat.rowwise().sum();
    kmat = kmat * q.cwiseInverse().asDiagonal();
  }
  const Vector d = kmat.rowwise().sum();
  const Matrix s = d.cwiseInverse().asDiagonal() * kmat;
  return (s - Matrix::Identity(n, n)) / eps;
}

}  // namespace lk::testing
