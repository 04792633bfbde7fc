#pragma once

#include "lk/geometry.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace lk::geometry {

enum class ProblemId { bvp1d, ellipse, half_ellipse, torus, half_torus };

std::string_view to_string(ProblemId id);
std::optional<ProblemId> parse_problem_id(std::string_view name);

/// Christoffel symbols of the second kind: gamma[k](i, j).
using Christoffels = std::vector<Matrix>;

/// A manifold, the operator coefficients and an exact (u, f) pair with
/// (a + L) u = f, all as functions of intrinsic coordinates. L = b.grad +
/// (1/2) c_ij Hess_ij; the drift b is given by its covariant components, so
/// the directional term is g^ij b_i d_j u.
struct AnalyticProblem {
  using ScalarField = std::function<double(const Vector&)>;

  ProblemId id = ProblemId::bvp1d;
  Manifold manifold;
  ScalarField u_true;
  ScalarField f_rhs;
  ScalarField shift_a;
  std::function<Vector(const Vector&)> drift_b;
  std::function<Matrix(const Vector&)> diffusion_c;
  std::function<Matrix(const Vector&)> metric_g;
  std::function<Christoffels(const Vector&)> christoffels;
};

AnalyticProblem analytic_pair(ProblemId id);

/// (1/2) c u'' + b u' + shift u = f on [0,1] with u = cos(2 pi x) and
/// Neumann ends. analytic_pair(bvp1d) is bvp1d_problem(2, 1, -2).
AnalyticProblem bvp1d_problem(double drift, double diffusion, double shift);

/// Coefficients at every node of a parametrized cloud.
CoefficientField lift_field(const AnalyticProblem& problem, const PointCloud& cloud);

struct DiscreteProblem {
  PointCloud cloud;
  CoefficientField coeffs;
  Vector u_true;
  Vector rhs;
  Vector shift;
};

DiscreteProblem discretize(const AnalyticProblem& problem, PointCloud cloud);
DiscreteProblem discretize(const AnalyticProblem& problem, Index n_points,
                           const SamplingOptions& options);

}  // namespace lk::geometry
