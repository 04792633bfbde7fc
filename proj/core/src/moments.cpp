#include "lk/errors.hpp"
#include "lk/kernel.hpp"
#include "lk/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>

namespace lk::kernel {

// With y = x + sqrt(eps) z the kernel on flat R^d becomes
// exp(-(z - sqrt(eps) b)^T c^-1 (z - sqrt(eps) b) / 2), so
//   m   = int K dz,
//   b   = int K z dz / (m sqrt(eps)),
//   c   = int K (z - mu)(z - mu)^T dz / m,  mu = int K z dz / m.
// Integrals are estimated with draws z ~ N(0, s^2 I) and weights K / p.
MomentReport moment_check(int d, const Matrix& c, const Vector& b, double epsilon, Index samples,
                          std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("moment_check: dimension must be positive");
  if (c.rows() != d || c.cols() != d || b.size() != d) throw InvalidArgument("moment_check: size mismatch");
  if (!(epsilon > 0.0)) throw InvalidArgument("moment_check: epsilon must be positive");
  if (samples < 2) throw InvalidArgument("moment_check: need at least 2 samples");
  Eigen::LLT<Matrix> llt(c);
  if (llt.info() != Eigen::Success || !linalg::is_symmetric(c, 1e-12)) {
    throw InvalidArgument("moment_check: c must be symmetric positive definite");
  }
  const Matrix c_inv = llt.solve(Matrix::Identity(d, d));
  const double s2 = 1.5 * linalg::largest_eigenvalue(c);
  const double log_norm = 0.5 * d * std::log(2.0 * std::numbers::pi * s2);
  const double root_eps = std::sqrt(epsilon);
  const Vector centre = root_eps * b;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto m_count = static_cast<double>(samples);

  std::vector<double> w(static_cast<std::size_t>(samples));
  Matrix z(d, samples);
  for (Index s = 0; s < samples; ++s) {
    for (int a = 0; a < d; ++a) z(a, s) = std::sqrt(s2) * normal(rng);
    const Vector zs = z.col(s);
    const Vector off = zs - centre;
    const double log_k = -0.5 * off.dot(c_inv * off);
    const double log_p = -0.5 * zs.squaredNorm() / s2 - log_norm;
    w[static_cast<std::size_t>(s)] = std::exp(log_k - log_p);
  }

  double sum_w = 0.0;
  double sum_w2 = 0.0;
  Vector sum_wz = Vector::Zero(d);
  for (Index s = 0; s < samples; ++s) {
    const double ws = w[static_cast<std::size_t>(s)];
    sum_w += ws;
    sum_w2 += ws * ws;
    sum_wz += ws * z.col(s);
  }
  const double mean_w = sum_w / m_count;
  const Vector mu = sum_wz / sum_w;

  MomentReport r;
  r.samples = samples;
  r.m_exact = std::pow(2.0 * std::numbers::pi, 0.5 * d) * std::sqrt(c.determinant());
  r.m_hat = mean_w;
  r.m_se = std::sqrt(std::max(0.0, sum_w2 / m_count - mean_w * mean_w) / (m_count - 1.0));

  r.c_hat = Matrix::Zero(d, d);
  for (Index s = 0; s < samples; ++s) {
    const Vector off = z.col(s) - mu;
    r.c_hat += w[static_cast<std::size_t>(s)] * off * off.transpose();
  }
  r.c_hat /= sum_w;

  // Self-normalised importance sampling: var(sum w g / sum w) is estimated by
  // sum w^2 (g - estimate)^2 / (sum w)^2.
  r.b_hat = mu / root_eps;
  r.b_se = Vector::Zero(d);
  r.c_se = Matrix::Zero(d, d);
  for (Index s = 0; s < samples; ++s) {
    const double ws2 = w[static_cast<std::size_t>(s)] * w[static_cast<std::size_t>(s)];
    const Vector off = z.col(s) - mu;
    r.b_se += ws2 * off.cwiseAbs2();
    r.c_se += ws2 * (off * off.transpose() - r.c_hat).cwiseAbs2();
  }
  r.b_se = r.b_se.cwiseSqrt() / (sum_w * root_eps);
  r.c_se = r.c_se.cwiseSqrt() / sum_w;
  return r;
}

}  // namespace lk::kernel
