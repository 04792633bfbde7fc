#include "lk/problems.hpp"

#include "lk/errors.hpp"

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <numbers>

namespace lk::geometry {
namespace {

constexpr double kPi = std::numbers::pi;

// Exact value, gradient and Hessian of the reference solution in intrinsic
// coordinates; f is assembled from them so that every problem shares one
// definition of (a + L).
struct Jet {
  double value;
  Vector grad;
  Matrix hess;
};

using JetFn = std::function<Jet(const Vector&)>;

double apply_operator(const AnalyticProblem& p, const Jet& u, const Vector& x) {
  const Matrix g = p.metric_g(x);
  const Matrix c = p.diffusion_c(x);
  const Vector b = p.drift_b(x);
  const Christoffels gamma = p.christoffels(x);
  const Index d = g.rows();
  const Vector drift_dir = g.ldlt().solve(b);
  double out = p.shift_a(x) * u.value + drift_dir.dot(u.grad);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      double second = u.hess(i, j);
      for (Index k = 0; k < d; ++k) second -= gamma[static_cast<std::size_t>(k)](i, j) * u.grad[k];
      out += 0.5 * c(i, j) * second;
    }
  }
  return out;
}

void finish(AnalyticProblem& p, JetFn jet) {
  p.u_true = [jet](const Vector& x) { return jet(x).value; };
  // Capture a copy of the problem's coefficient evaluators, not the problem itself.
  AnalyticProblem coeffs = p;
  p.f_rhs = [coeffs, jet](const Vector& x) { return apply_operator(coeffs, jet(x), x); };
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

AnalyticProblem ellipse_problem(ProblemId id) {
  AnalyticProblem p;
  p.id = id;
  p.manifold = make_manifold(id == ProblemId::ellipse ? ManifoldId::ellipse : ManifoldId::half_ellipse);
  p.shift_a = [](const Vector&) { return 0.0; };
  p.drift_b = [](const Vector& x) { return Vector::Constant(1, std::cos(x[0])); };
  p.diffusion_c = [](const Vector& x) { return scalar(1.1 + std::cos(x[0])); };
  p.metric_g = [](const Vector& x) {
    const double s = std::sin(x[0]);
    const double c = std::cos(x[0]);
    return scalar(s * s + 4.0 * c * c);
  };
  p.christoffels = [](const Vector& x) {
    const double s = std::sin(x[0]);
    const double c = std::cos(x[0]);
    return Christoffels{scalar(-3.0 * s * c / (s * s + 4.0 * c * c))};
  };
  finish(p, [](const Vector& x) {
    return Jet{std::cos(x[0]), Vector::Constant(1, -std::sin(x[0])), scalar(-std::cos(x[0]))};
  });
  return p;
}

AnalyticProblem torus_problem(ProblemId id) {
  const bool half = id == ProblemId::half_torus;
  AnalyticProblem p;
  p.id = id;
  p.manifold = make_manifold(half ? ManifoldId::half_torus : ManifoldId::torus);
  p.shift_a = [](const Vector&) { return 0.0; };
  p.drift_b = [](const Vector& x) {
    Vector b(2);
    b << 2.0 + std::sin(x[0]), 0.0;
    return b;
  };
  p.diffusion_c = [](const Vector& x) {
    Matrix c(2, 2);
    c << 3.0 + std::cos(x[1]), 0.1, 0.1, 2.0;
    return c;
  };
  p.metric_g = [](const Vector& x) {
    const double r = 2.0 + std::cos(x[0]);
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = r * r;
    return g;
  };
  p.christoffels = [](const Vector& x) {
    const double r = 2.0 + std::cos(x[0]);
    const double s = std::sin(x[0]);
    Christoffels gamma(2, Matrix::Zero(2, 2));
    gamma[0](1, 1) = s * r;
    gamma[1](0, 1) = -s / r;
    gamma[1](1, 0) = -s / r;
    return gamma;
  };
  if (half) {
    finish(p, [](const Vector& x) {
      const double st = std::sin(x[0]), ct = std::cos(x[0]);
      const double c2 = std::cos(2.0 * x[1]), s2 = std::sin(2.0 * x[1]);
      Vector grad(2);
      grad << ct * c2, -2.0 * st * s2;
      Matrix hess(2, 2);
      hess << -st * c2, -2.0 * ct * s2, -2.0 * ct * s2, -4.0 * st * c2;
      return Jet{st * c2, grad, hess};
    });
  } else {
    finish(p, [](const Vector& x) {
      const double st = std::sin(x[0]), ct = std::cos(x[0]);
      const double c2 = std::cos(2.0 * x[1]), s2 = std::sin(2.0 * x[1]);
      Vector grad(2);
      grad << ct * s2, 2.0 * st * c2;
      Matrix hess(2, 2);
      hess << -st * s2, 2.0 * ct * c2, 2.0 * ct * c2, -4.0 * st * s2;
      return Jet{st * s2, grad, hess};
    });
  }
  return p;
}

constexpr std::array<std::pair<std::string_view, ProblemId>, 5> kProblemNames{{
    {"bvp1d", ProblemId::bvp1d},
    {"ellipse", ProblemId::ellipse},
    {"half_ellipse", ProblemId::half_ellipse},
    {"torus", ProblemId::torus},
    {"half_torus", ProblemId::half_torus},
}};

}  // namespace

std::string_view to_string(ProblemId id) {
  for (const auto& [key, value] : kProblemNames) {
    if (value == id) return key;
  }
  return "unknown";
}

std::optional<ProblemId> parse_problem_id(std::string_view name) {
  for (const auto& [key, value] : kProblemNames) {
    if (key == name) return value;
  }
  return std::nullopt;
}

AnalyticProblem bvp1d_problem(double drift, double diffusion, double shift) {
  if (!(diffusion > 0.0)) throw InvalidArgument("bvp1d_problem: diffusion must be positive");
  AnalyticProblem p;
  p.id = ProblemId::bvp1d;
  p.manifold = make_manifold(ManifoldId::interval);
  p.shift_a = [shift](const Vector&) { return shift; };
  p.drift_b = [drift](const Vector&) { return Vector::Constant(1, drift); };
  p.diffusion_c = [diffusion](const Vector&) { return scalar(diffusion); };
  p.metric_g = [](const Vector&) { return scalar(1.0); };
  p.christoffels = [](const Vector&) { return Christoffels{scalar(0.0)}; };
  finish(p, [](const Vector& x) {
    const double w = 2.0 * kPi;
    return Jet{std::cos(w * x[0]), Vector::Constant(1, -w * std::sin(w * x[0])),
               scalar(-w * w * std::cos(w * x[0]))};
  });
  return p;
}

AnalyticProblem analytic_pair(ProblemId id) {
  switch (id) {
    case ProblemId::bvp1d:
      return bvp1d_problem(2.0, 1.0, -2.0);
    case ProblemId::ellipse:
    case ProblemId::half_ellipse:
      return ellipse_problem(id);
    case ProblemId::torus:
    case ProblemId::half_torus:
      return torus_problem(id);
  }
  throw InvalidArgument("analytic_pair: unknown problem id");
}

CoefficientField lift_field(const AnalyticProblem& problem, const PointCloud& cloud) {
  if (!cloud.intrinsic) throw InvalidArgument("lift_field: cloud has no intrinsic coordinates");
  const Index n_points = cloud.size();
  const Index n = cloud.ambient_dim();
  const Index d = problem.manifold.intrinsic_dim;
  CoefficientField field;
  field.drift.resize(n_points, n);
  field.diffusion_inverse.resize(static_cast<std::size_t>(n_points));
  PointMatrix ib(n_points, d);
  std::vector<Matrix> ic(static_cast<std::size_t>(n_points));
  for (Index i = 0; i < n_points; ++i) {
    const Vector x = cloud.intrinsic->row(i).transpose();
    const Vector b = problem.drift_b(x);
    const Matrix c = problem.diffusion_c(x);
    const auto lifted = lift_coefficients(problem.manifold, b, c, x);
    field.drift.row(i) = lifted.drift.transpose();
    field.diffusion_inverse[static_cast<std::size_t>(i)] = lifted.diffusion_inverse;
    ib.row(i) = b.transpose();
    ic[static_cast<std::size_t>(i)] = c;
  }
  field.intrinsic_b = std::move(ib);
  field.intrinsic_c = std::move(ic);
  return field;
}

DiscreteProblem discretize(const AnalyticProblem& problem, PointCloud cloud) {
  if (!cloud.intrinsic) throw InvalidArgument("discretize: cloud has no intrinsic coordinates");
  DiscreteProblem out;
  out.coeffs = lift_field(problem, cloud);
  const Index n_points = cloud.size();
  out.u_true.resize(n_points);
  out.rhs.resize(n_points);
  out.shift.resize(n_points);
  for (Index i = 0; i < n_points; ++i) {
    const Vector x = cloud.intrinsic->row(i).transpose();
    out.u_true[i] = problem.u_true(x);
    out.rhs[i] = problem.f_rhs(x);
    out.shift[i] = problem.shift_a(x);
  }
  out.cloud = std::move(cloud);
  return out;
}

DiscreteProblem discretize(const AnalyticProblem& problem, Index n_points, const SamplingOptions& options) {
  return discretize(problem, sample_points(problem.manifold, n_points, options));
}

}  // namespace lk::geometry
