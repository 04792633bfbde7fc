#include "lk/errors.hpp"
#include "lk/solver.hpp"

#include <cmath>

namespace lk::solver {

// LSQR of Paige and Saunders (ACM TOMS 8, 1982) without damping and without
// the condition-number stop, which would end a singular but consistent solve
// early. Starting from zero keeps every iterate in range(A^T), so the limit is
// the minimum-norm least-squares solution.
LsqrResult lsqr(const LinearMap& a, const LinearMap& at, const Vector& b, double tol, Index max_iterations) {
  if (!(tol > 0.0)) throw InvalidArgument("lsqr: tolerance must be positive");
  LsqrResult res;
  Vector u = b;
  double beta = u.norm();
  const double bnorm = beta;
  if (beta > 0.0) u /= beta;
  // x has one entry per column of A; only A^T reveals that count.
  Vector v = at(u);
  res.x = Vector::Zero(v.size());
  if (beta == 0.0) {
    res.converged = true;
    res.stop_reason = 1;
    return res;
  }
  double alpha = v.norm();
  if (alpha == 0.0) {
    // b is orthogonal to range(A): x = 0 is the least-squares solution.
    res.converged = true;
    res.stop_reason = 2;
    res.residual_norm = bnorm;
    return res;
  }
  v /= alpha;
  Vector w = v;

  double rhobar = alpha;
  double phibar = beta;
  double anorm2 = 0.0;
  double rnorm = beta;
  double arnorm = alpha * beta;

  for (Index itn = 1; itn <= max_iterations; ++itn) {
    u = a(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) {
      u /= beta;
      anorm2 += alpha * alpha + beta * beta;
      v = at(u) - beta * v;
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    } else {
      anorm2 += alpha * alpha;
    }

    const double rho = std::hypot(rhobar, beta);
    const double cs = rhobar / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const double tau = sn * phi;

    res.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    rnorm = phibar;
    arnorm = alpha * std::abs(tau);
    res.iterations = itn;

    const double anorm = std::sqrt(anorm2);
    const double xnorm = res.x.norm();
    const double test1 = rnorm / bnorm;
    const double test2 = (anorm * rnorm) > 0.0 ? arnorm / (anorm * rnorm) : 0.0;
    const double rtol = tol + tol * anorm * xnorm / bnorm;
    if (test1 <= rtol) {
      res.stop_reason = 1;
      res.converged = true;
    } else if (test2 <= tol) {
      res.stop_reason = 2;
      res.converged = true;
    }
    if (!res.converged && alpha == 0.0) {
      res.stop_reason = 2;  // A^T r vanishes exactly
      res.converged = true;
    }
    if (res.converged) break;
  }
  res.residual_norm = rnorm;
  res.normal_residual_norm = arnorm;
  return res;
}

}  // namespace lk::solver
