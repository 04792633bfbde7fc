#include "lk/errors.hpp"
#include "lk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace lk::solver {

std::string_view to_string(Tuning t) { return t == Tuning::automatic ? "auto" : "oracle"; }

SolveReport solve_problem(const geometry::DiscreteProblem& problem, const kernel::KernelConfig& cfg, bool debias,
                          const kernel::NeighborLists& pattern, const MinNormOptions& min_norm) {
  const auto gen = op::build_operator(problem.cloud, problem.coeffs, cfg, debias, pattern);
  LinearProblem lp{&gen, problem.shift, problem.rhs};
  SolveReport r = problem.shift.size() > 0 && problem.shift.maxCoeff() < 0.0 ? solve_direct(lp)
                                                                             : solve_min_norm(lp, min_norm);
  attach_errors(r, problem.u_true);
  return r;
}

double median_spacing(const geometry::PointCloud& cloud) {
  const auto nn = kernel::build_knn_graph(cloud, 2);
  std::vector<double> d(static_cast<std::size_t>(cloud.size()));
  for (Index i = 0; i < cloud.size(); ++i) {
    const auto row = nn.row(i);
    const Index j = row[0] == i ? row[1] : row[0];
    d[static_cast<std::size_t>(i)] = (cloud.ambient.row(i) - cloud.ambient.row(j)).norm();
  }
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size() / 2;
  return d.size() % 2 ? d[m] : 0.5 * (d[m - 1] + d[m]);
}

std::pair<double, double> oracle_epsilon(const geometry::DiscreteProblem& problem, const StudyOptions& options,
                                         const kernel::NeighborLists& pattern) {
  const double h = median_spacing(problem.cloud);
  if (!(h > 0.0)) throw NumericalError("oracle tuning: nodes are not distinct");
  const auto error_at = [&](double log_eps) {
    const double eps = std::exp(log_eps);
    kernel::KernelConfig cfg{eps, options.tilde_epsilon.value_or(eps), pattern.k, true};
    return *solve_problem(problem, cfg, options.debias, pattern, options.min_norm).error_inf;
  };
  // Golden-section search on log eps.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(options.bracket_lo * h * h);
  double hi = std::log(options.bracket_hi * h * h);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = error_at(x1);
  double f2 = error_at(x2);
  while (hi - lo > options.log_tolerance) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = error_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = error_at(x2);
    }
  }
  return f1 < f2 ? std::pair{std::exp(x1), f1} : std::pair{std::exp(x2), f2};
}

ConvergenceStudy convergence_study(geometry::ProblemId problem, const std::vector<Index>& N_values, Tuning tuning,
                                   const StudyOptions& options) {
  return convergence_study(geometry::analytic_pair(problem), N_values, tuning, options);
}

ConvergenceStudy convergence_study(const geometry::AnalyticProblem& problem, const std::vector<Index>& N_values,
                                   Tuning tuning, const StudyOptions& options) {
  if (N_values.size() < 4) throw InvalidArgument("convergence study needs at least 4 values of N");
  for (std::size_t i = 1; i < N_values.size(); ++i) {
    if (N_values[i] <= N_values[i - 1]) throw InvalidArgument("convergence study: N values must increase strictly");
  }
  ConvergenceStudy study;
  study.tuning = tuning;
  for (Index n_points : N_values) {
    try {
      const auto discrete = geometry::discretize(problem, n_points, options.sampling);
      const Index k = std::min(options.k_neighbors, n_points);
      const auto pattern = kernel::build_knn_graph(discrete.cloud, k);
      double eps = 0.0;
      double err = 0.0;
      double tilde = 0.0;
      if (tuning == Tuning::oracle) {
        std::tie(eps, err) = oracle_epsilon(discrete, options, pattern);
        tilde = options.tilde_epsilon.value_or(eps);
      } else {
        const auto grid = op::default_tuning_grid();
        eps = op::tune_bandwidth(discrete.cloud, discrete.coeffs, grid, k).epsilon_star;
        tilde = options.tilde_epsilon ? *options.tilde_epsilon
                                      : op::tune_bandwidth_gaussian(discrete.cloud, grid, k).epsilon_star;
        kernel::KernelConfig cfg{eps, tilde, k, true};
        err = *solve_problem(discrete, cfg, options.debias, pattern, options.min_norm).error_inf;
      }
      study.N_values.push_back(n_points);
      study.epsilons.push_back(eps);
      study.tilde_epsilons.push_back(tilde);
      study.errors_inf.push_back(err);
    } catch (const Error& e) {
      throw StudyError("convergence study failed at N=" + std::to_string(n_points) + ": " + e.what(), study);
    }
  }
  std::vector<double> xs(study.N_values.begin(), study.N_values.end());
  study.fitted_slope = fitted_slope(xs, study.errors_inf);
  return study;
}

}  // namespace lk::solver
