#pragma once

#include "lk/types.hpp"

namespace lk::linalg {

/// Singular values below rel_tol * sigma_max count as zero. A negative
/// rel_tol selects max(rows, cols) * machine epsilon.
Matrix pseudo_inverse(const Matrix& a, double rel_tol = -1.0);
Index numerical_rank(const Matrix& a, double rel_tol = -1.0);

bool is_symmetric(const Matrix& a, double tol = 1e-12);
/// Symmetric with no eigenvalue below -tol * max|eigenvalue|.
bool is_positive_semidefinite(const Matrix& a, double tol = 1e-10);
double largest_eigenvalue(const Matrix& symmetric);

}  // namespace lk::linalg
