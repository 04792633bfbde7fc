#pragma once

#include "lk/errors.hpp"
#include "lk/operator.hpp"
#include "lk/problems.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace lk::solver {

/// (diag(a) + L) u = f. Non-owning: the generator must outlive the problem.
struct LinearProblem {
  const op::GeneratorMatrix* generator = nullptr;
  Vector shift_a;
  Vector rhs_f;

  void validate() const;
};

enum class Method { direct, min_norm };
enum class MinNormMethod { lsqr, truncated_svd };

std::string_view to_string(Method m);
std::string_view to_string(MinNormMethod m);

struct SolveReport {
  Vector u_hat;
  Method method = Method::direct;
  MinNormMethod min_norm_method = MinNormMethod::lsqr;
  /// direct: |(a + L) u - f|_inf. min_norm: least-squares residual |L u - f|_2.
  double residual_inf = 0.0;
  double residual_max = 0.0;     ///< |(a + L) u - f|_inf for both methods
  double normal_residual = 0.0;  ///< |A^T r|_2 (min_norm)
  Index iterations = 0;
  Index rank = 0;  ///< truncated_svd only
  std::optional<double> error_inf;
  std::optional<double> error_l2;
  std::optional<double> error_inf_shifted;  ///< after removing the best constant offset
  double epsilon_used = 0.0;
  std::optional<double> tilde_epsilon_used;
};

/// Sparse LU. Requires max a_i < 0; otherwise throws InvalidArgument pointing
/// at solve_min_norm. Throws NumericalError when the relative residual
/// exceeds 1e-10, or the rounding level of the residual if that is larger.
SolveReport solve_direct(const LinearProblem& problem);

struct MinNormOptions {
  MinNormMethod method = MinNormMethod::lsqr;
  double tol = 1e-10;
  Index max_iterations = 0;  ///< 0: 20 N
  double svd_truncation = 1e-8;
  Index svd_max_size = 3000;
};

/// Raised when the iterative solver hits its cap; carries the best iterate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, Vector best, double residual, Index iterations)
      : NumericalError(what), best_(std::move(best)), residual_(residual), iterations_(iterations) {}
  const Vector& best_iterate() const { return best_; }
  double residual() const { return residual_; }
  Index iterations() const { return iterations_; }

 private:
  Vector best_;
  double residual_;
  Index iterations_;
};

/// Minimum-norm least-squares solution of (a + L) u = f.
SolveReport solve_min_norm(const LinearProblem& problem, const MinNormOptions& options = {});

/// Result of an LSQR run on a generic operator.
struct LsqrResult {
  Vector x;
  Index iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;
  double normal_residual_norm = 0.0;
  int stop_reason = 0;  ///< 1 consistent, 2 least squares, 3 condition limit, 0 cap
};

/// Paige-Saunders LSQR from x0 = 0 with atol = btol = tol on A x ~ b, with
/// A given as matrix-vector products.
using LinearMap = std::function<Vector(const Vector&)>;
LsqrResult lsqr(const LinearMap& a, const LinearMap& at, const Vector& b, double tol, Index max_iterations);

struct ErrorReport {
  double inf = 0.0;
  double l2 = 0.0;  ///< |e|_2 / sqrt(N)
};
ErrorReport error_report(const Vector& u_hat, const Vector& u_true);
/// Uniform error after subtracting the constant c minimizing |u_hat - c - u|_inf.
double shifted_error_inf(const Vector& u_hat, const Vector& u_true);
/// Fills the error fields of a report.
void attach_errors(SolveReport& report, const Vector& u_true);

/// Component of u along the constant null vector of L (exact by row
/// stochasticity) is at most tol |u|_2.
bool check_minimum_norm_certificate(const Vector& u_hat, const op::GeneratorMatrix& generator, double tol = 1e-6);
double null_component(const Vector& u_hat);

/// Least-squares slope of log y against log x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class Tuning { automatic, oracle };
std::string_view to_string(Tuning t);

struct StudyOptions {
  Index k_neighbors = 100;
  bool debias = false;
  geometry::SamplingOptions sampling;
  /// Oracle: golden-section search on log eps over [lo, hi] * h^2, h the
  /// median nearest-neighbour distance.
  double bracket_lo = 0.25;
  double bracket_hi = 32.0;
  double log_tolerance = 1e-6;
  /// tilde eps: same as eps when unset.
  std::optional<double> tilde_epsilon;
  MinNormOptions min_norm;
};

struct ConvergenceStudy {
  std::vector<Index> N_values;
  std::vector<double> errors_inf;
  std::vector<double> epsilons;
  std::vector<double> tilde_epsilons;
  double fitted_slope = 0.0;
  Tuning tuning = Tuning::automatic;
};

class StudyError : public NumericalError {
 public:
  StudyError(const std::string& what, ConvergenceStudy partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const ConvergenceStudy& partial() const { return partial_; }

 private:
  ConvergenceStudy partial_;
};

/// Solves one discretized analytic problem at the given bandwidths.
SolveReport solve_problem(const geometry::DiscreteProblem& problem, const kernel::KernelConfig& cfg, bool debias,
                          const kernel::NeighborLists& pattern, const MinNormOptions& min_norm = {});

/// Median distance from each node to its nearest other node.
double median_spacing(const geometry::PointCloud& cloud);

/// Oracle tuning: eps minimizing the true uniform error. Returns (eps, error).
std::pair<double, double> oracle_epsilon(const geometry::DiscreteProblem& problem, const StudyOptions& options,
                                         const kernel::NeighborLists& pattern);

ConvergenceStudy convergence_study(geometry::ProblemId problem, const std::vector<Index>& N_values, Tuning tuning,
                                   const StudyOptions& options = {});
ConvergenceStudy convergence_study(const geometry::AnalyticProblem& problem, const std::vector<Index>& N_values,
                                   Tuning tuning, const StudyOptions& options = {});

}  // namespace lk::solver
