#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's kernel, operator or solver code paths.

#include "lk/problems.hpp"

#include <vector>

namespace lk::testing {

/// Christoffel symbols from central differences of the metric.
geometry::Christoffels fd_christoffels(const geometry::AnalyticProblem& p, const Vector& x, double h);

/// (a + L) u at x: derivatives of u and of the metric by central differences
/// with step h, Christoffels from the metric.
double fd_apply_operator(const geometry::AnalyticProblem& p, const Vector& x, double h);

/// Same, but with the problem's analytic Christoffel symbols.
double fd_apply_operator_given_christoffels(const geometry::AnalyticProblem& p, const Vector& x, double h);

/// Central-difference partial derivative of u along coordinate a.
double fd_partial(const geometry::AnalyticProblem& p, const Vector& x, int a, double h);

/// kNN by sorting all (distance, index) pairs.
std::vector<std::vector<Index>> brute_force_knn(const PointMatrix& points, Index k);

/// Scalar kernel written out component by component.
double reference_kernel(const Vector& x, const Vector& y, const Vector& b, const Matrix& cinv, double eps);

/// Dense generator (S - I) / eps built with plain loops and dense algebra;
/// entries outside the kNN mask are zero. k = N gives the unsparsified pipeline.
Matrix dense_generator(const PointMatrix& points, const std::vector<Vector>& drift,
                       const std::vector<Matrix>& cinv, double eps, double tilde_eps, Index k, bool debias);

}  // namespace lk::testing
