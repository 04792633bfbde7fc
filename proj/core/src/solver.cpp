#include "lk/solver.hpp"

#include "lk/errors.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace lk::solver {
namespace {

Vector apply_system(const op::GeneratorMatrix& g, const Vector& shift, const Vector& v) {
  return shift.cwiseProduct(v) + (g.s_hat.multiply(v) - v) / g.epsilon;
}

Vector apply_system_transpose(const op::GeneratorMatrix& g, const Vector& shift, const Vector& v) {
  return shift.cwiseProduct(v) + (g.s_hat.transpose_multiply(v) - v) / g.epsilon;
}

SolveReport base_report(const LinearProblem& p, Method method) {
  SolveReport r;
  r.method = method;
  r.epsilon_used = p.generator->epsilon;
  r.tilde_epsilon_used = p.generator->tilde_epsilon;
  return r;
}

}  // namespace

void LinearProblem::validate() const {
  if (generator == nullptr) throw InvalidArgument("linear problem has no generator");
  const Index n = generator->size();
  if (shift_a.size() != n || rhs_f.size() != n) throw InvalidArgument("linear problem: size mismatch");
  if (!shift_a.allFinite() || !rhs_f.allFinite()) throw InvalidArgument("linear problem: non-finite data");
}

std::string_view to_string(Method m) { return m == Method::direct ? "direct" : "min_norm"; }
std::string_view to_string(MinNormMethod m) { return m == MinNormMethod::lsqr ? "lsqr" : "truncated_svd"; }

SolveReport solve_direct(const LinearProblem& problem) {
  problem.validate();
  const op::GeneratorMatrix& g = *problem.generator;
  if (!(problem.shift_a.maxCoeff() < 0.0)) {
    throw InvalidArgument("solve_direct needs a strictly negative shift a (max a = " +
                          std::to_string(problem.shift_a.maxCoeff()) + "); use solve_min_norm");
  }
  const Eigen::SparseMatrix<double> a = op::system_matrix(g, problem.shift_a);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU factorization failed: " + lu.lastErrorMessage());
  SolveReport r = base_report(problem, Method::direct);
  r.u_hat = lu.solve(problem.rhs_f);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");

  const double f_norm = problem.rhs_f.lpNorm<Eigen::Infinity>();
  Vector res = a * r.u_hat - problem.rhs_f;
  double res_norm = res.lpNorm<Eigen::Infinity>();
  if (res_norm > 1e-13 * f_norm) {
    // One step of iterative refinement.
    r.u_hat -= lu.solve(res);
    res = a * r.u_hat - problem.rhs_f;
    res_norm = res.lpNorm<Eigen::Infinity>();
  }
  r.residual_inf = res_norm;
  r.residual_max = res_norm;
  r.normal_residual = (a.transpose() * res).norm();
  // The 1e-10 contract, unless rounding in forming the residual alone exceeds
  // it; with |A| ~ 2/eps that happens only for very small eps.
  const double a_norm = (a.cwiseAbs() * Vector::Ones(a.cols())).lpNorm<Eigen::Infinity>();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       (a_norm * r.u_hat.lpNorm<Eigen::Infinity>() + f_norm);
  const double limit = std::max(1e-10 * f_norm, floor);
  if (!std::isfinite(res_norm) || res_norm > limit) {
    std::ostringstream msg;
    msg << "direct solve residual " << res_norm << " exceeds " << limit << " (1e-10 |f|_inf = " << 1e-10 * f_norm
        << ")";
    throw NumericalError(msg.str());
  }
  return r;
}

SolveReport solve_min_norm(const LinearProblem& problem, const MinNormOptions& options) {
  problem.validate();
  const op::GeneratorMatrix& g = *problem.generator;
  const Index n = g.size();
  SolveReport r = base_report(problem, Method::min_norm);
  r.min_norm_method = options.method;

  if (options.method == MinNormMethod::truncated_svd) {
    if (n > options.svd_max_size) {
      throw InvalidArgument("truncated SVD is limited to N <= " + std::to_string(options.svd_max_size));
    }
    Matrix a = op::generator_dense(g);
    a.diagonal() += problem.shift_a;
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    const double cutoff = options.svd_truncation * (sigma.size() ? sigma[0] : 0.0);
    Vector coeff = svd.matrixU().transpose() * problem.rhs_f;
    Index rank = 0;
    for (Index i = 0; i < sigma.size(); ++i) {
      if (sigma[i] > cutoff) {
        coeff[i] /= sigma[i];
        ++rank;
      } else {
        coeff[i] = 0.0;
      }
    }
    r.u_hat = svd.matrixV() * coeff;
    r.rank = rank;
  } else {
    const Index cap = options.max_iterations > 0 ? options.max_iterations : 20 * n;
    const auto result = lsqr([&](const Vector& v) { return apply_system(g, problem.shift_a, v); },
                             [&](const Vector& v) { return apply_system_transpose(g, problem.shift_a, v); },
                             problem.rhs_f, options.tol, cap);
    r.iterations = result.iterations;
    if (!result.converged) {
      throw ConvergenceError("LSQR did not converge in " + std::to_string(cap) + " iterations (residual " +
                                 std::to_string(result.residual_norm) + ")",
                             result.x, result.residual_norm, result.iterations);
    }
    r.u_hat = result.x;
  }
  const Vector res = apply_system(g, problem.shift_a, r.u_hat) - problem.rhs_f;
  r.residual_inf = res.norm();
  r.residual_max = res.lpNorm<Eigen::Infinity>();
  r.normal_residual = apply_system_transpose(g, problem.shift_a, res).norm();
  return r;
}

ErrorReport error_report(const Vector& u_hat, const Vector& u_true) {
  if (u_hat.size() != u_true.size()) throw InvalidArgument("error_report: length mismatch");
  if (u_hat.size() == 0) return {};
  const Vector e = u_hat - u_true;
  return {e.lpNorm<Eigen::Infinity>(), e.norm() / std::sqrt(static_cast<double>(e.size()))};
}

double shifted_error_inf(const Vector& u_hat, const Vector& u_true) {
  if (u_hat.size() != u_true.size()) throw InvalidArgument("shifted_error_inf: length mismatch");
  if (u_hat.size() == 0) return 0.0;
  const Vector e = u_hat - u_true;
  return 0.5 * (e.maxCoeff() - e.minCoeff());
}

void attach_errors(SolveReport& report, const Vector& u_true) {
  const auto e = error_report(report.u_hat, u_true);
  report.error_inf = e.inf;
  report.error_l2 = e.l2;
  report.error_inf_shifted = shifted_error_inf(report.u_hat, u_true);
}

double null_component(const Vector& u_hat) {
  if (u_hat.size() == 0) return 0.0;
  return std::abs(u_hat.sum()) / std::sqrt(static_cast<double>(u_hat.size()));
}

bool check_minimum_norm_certificate(const Vector& u_hat, const op::GeneratorMatrix& generator, double tol) {
  if (u_hat.size() != generator.size()) throw InvalidArgument("certificate: length mismatch");
  const double norm = u_hat.norm();
  if (norm == 0.0) return true;
  return null_component(u_hat) <= tol * norm;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fitted_slope: need two or more pairs");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("fitted_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("fitted_slope: x values are all equal");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace lk::solver
