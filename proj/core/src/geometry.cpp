#include "lk/geometry.hpp"

#include "lk/errors.hpp"
#include "lk/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace lk::geometry {
namespace {

constexpr double kPi = std::numbers::pi;

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view name, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, ManifoldId>, 6> kManifoldNames{{
    {"interval", ManifoldId::interval},
    {"ellipse", ManifoldId::ellipse},
    {"half_ellipse", ManifoldId::half_ellipse},
    {"torus", ManifoldId::torus},
    {"half_torus", ManifoldId::half_torus},
    {"ambient_cloud", ManifoldId::ambient_cloud},
}};

constexpr std::array<std::pair<std::string_view, SamplingMode>, 2> kModeNames{{
    {"uniform_grid", SamplingMode::uniform_grid},
    {"iid_density", SamplingMode::iid_density},
}};

constexpr std::array<std::pair<std::string_view, NodePlacement>, 3> kPlacementNames{{
    {"default", NodePlacement::manifold_default},
    {"endpoints", NodePlacement::endpoints},
    {"cell_centered", NodePlacement::cell_centered},
}};

NodePlacement resolve_placement(ManifoldId id, NodePlacement requested) {
  if (requested != NodePlacement::manifold_default) return requested;
  return id == ManifoldId::interval ? NodePlacement::endpoints : NodePlacement::cell_centered;
}

std::vector<double> axis_nodes(const ParameterRange& range, Index count, NodePlacement placement) {
  std::vector<double> nodes(static_cast<std::size_t>(count));
  const double len = range.length();
  for (Index i = 0; i < count; ++i) {
    double t;
    if (range.periodic) {
      t = range.lo + len * static_cast<double>(i) / static_cast<double>(count);
    } else if (placement == NodePlacement::cell_centered) {
      t = range.lo + len * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    } else {
      t = count == 1 ? range.lo : range.lo + len * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    nodes[static_cast<std::size_t>(i)] = t;
  }
  return nodes;
}

std::vector<Index> grid_counts(const Manifold& m, Index n_points, const SamplingOptions& options) {
  if (m.intrinsic_dim == 1) {
    if (!options.axis_counts.empty() &&
        (options.axis_counts.size() != 1 || options.axis_counts[0] != n_points)) {
      throw InvalidArgument("sample_points: axis_counts inconsistent with N");
    }
    return {n_points};
  }
  if (!options.axis_counts.empty()) {
    if (options.axis_counts.size() != 2 || options.axis_counts[0] * options.axis_counts[1] != n_points ||
        options.axis_counts[0] < 1 || options.axis_counts[1] < 1) {
      throw InvalidArgument("sample_points: axis_counts must be two positive counts whose product is N");
    }
    return options.axis_counts;
  }
  if (m.id == ManifoldId::torus) {
    const auto side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n_points))));
    if (side * side != n_points) {
      throw InvalidArgument("sample_points: torus uniform grid needs N = n^2 (or explicit axis_counts), got " +
                            std::to_string(n_points));
    }
    return {side, side};
  }
  const auto m_phi = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n_points) / 2.0)));
  if (2 * m_phi * m_phi != n_points) {
    throw InvalidArgument("sample_points: half-torus uniform grid needs N = 2 m^2 (or explicit axis_counts), got " +
                          std::to_string(n_points));
  }
  return {2 * m_phi, m_phi};
}

void require_params(const Manifold& m, const Vector& intrinsic) {
  if (!m.has_embedding()) throw InvalidArgument("ambient_cloud has no embedding");
  if (intrinsic.size() != m.intrinsic_dim) throw InvalidArgument("intrinsic point has wrong dimension");
}

}  // namespace

std::string_view to_string(ManifoldId id) {
  for (const auto& [key, value] : kManifoldNames) {
    if (value == id) return key;
  }
  return "unknown";
}
std::optional<ManifoldId> parse_manifold_id(std::string_view name) { return lookup(name, kManifoldNames); }

std::string_view to_string(SamplingMode mode) {
  for (const auto& [key, value] : kModeNames) {
    if (value == mode) return key;
  }
  return "unknown";
}
std::optional<SamplingMode> parse_sampling_mode(std::string_view name) { return lookup(name, kModeNames); }

std::string_view to_string(NodePlacement placement) {
  for (const auto& [key, value] : kPlacementNames) {
    if (value == placement) return key;
  }
  return "unknown";
}
std::optional<NodePlacement> parse_node_placement(std::string_view name) { return lookup(name, kPlacementNames); }

Manifold make_manifold(ManifoldId id) {
  const ParameterRange full_angle{0.0, 2.0 * kPi, true};
  const ParameterRange half_angle{0.0, kPi, false};
  switch (id) {
    case ManifoldId::interval:
      return {id, 1, 1, {{0.0, 1.0, false}}, true};
    case ManifoldId::ellipse:
      return {id, 1, 2, {full_angle}, false};
    case ManifoldId::half_ellipse:
      return {id, 1, 2, {half_angle}, true};
    case ManifoldId::torus:
      return {id, 2, 3, {full_angle, full_angle}, false};
    case ManifoldId::half_torus:
      return {id, 2, 3, {full_angle, half_angle}, true};
    case ManifoldId::ambient_cloud:
      break;
  }
  throw InvalidArgument("make_manifold: ambient_cloud needs make_ambient_manifold(n)");
}

Manifold make_ambient_manifold(int ambient_dim) {
  if (ambient_dim < 1) throw InvalidArgument("make_ambient_manifold: ambient dimension must be positive");
  return {ManifoldId::ambient_cloud, 0, ambient_dim, {}, false};
}

Vector embed(const Manifold& m, const Vector& p) {
  require_params(m, p);
  Vector x(m.ambient_dim);
  switch (m.id) {
    case ManifoldId::interval:
      x[0] = p[0];
      break;
    case ManifoldId::ellipse:
    case ManifoldId::half_ellipse:
      x << std::cos(p[0]), 2.0 * std::sin(p[0]);
      break;
    case ManifoldId::torus:
    case ManifoldId::half_torus: {
      const double r = 2.0 + std::cos(p[0]);
      x << r * std::cos(p[1]), r * std::sin(p[1]), std::sin(p[0]);
      break;
    }
    case ManifoldId::ambient_cloud:
      break;
  }
  return x;
}

Matrix embedding_jacobian(const Manifold& m, const Vector& p) {
  require_params(m, p);
  Matrix j(m.ambient_dim, m.intrinsic_dim);
  switch (m.id) {
    case ManifoldId::interval:
      j(0, 0) = 1.0;
      break;
    case ManifoldId::ellipse:
    case ManifoldId::half_ellipse:
      j << -std::sin(p[0]), 2.0 * std::cos(p[0]);
      break;
    case ManifoldId::torus:
    case ManifoldId::half_torus: {
      const double st = std::sin(p[0]);
      const double ct = std::cos(p[0]);
      const double sp = std::sin(p[1]);
      const double cp = std::cos(p[1]);
      const double r = 2.0 + ct;
      j << -st * cp, -r * sp,
           -st * sp, r * cp,
           ct, 0.0;
      break;
    }
    case ManifoldId::ambient_cloud:
      break;
  }
  return j;
}

PointCloud sample_points(const Manifold& m, Index n_points, const SamplingOptions& options) {
  if (n_points < 2) throw InvalidArgument("sample_points: need N >= 2");
  if (!m.has_embedding()) {
    throw InvalidArgument("sample_points: ambient_cloud has no parametrization; load it from a file instead");
  }
  const int d = m.intrinsic_dim;
  PointMatrix params(n_points, d);

  if (options.mode == SamplingMode::uniform_grid) {
    const NodePlacement placement = resolve_placement(m.id, options.placement);
    const auto counts = grid_counts(m, n_points, options);
    if (d == 1) {
      const auto nodes = axis_nodes(m.parameter_domain[0], counts[0], placement);
      for (Index i = 0; i < n_points; ++i) params(i, 0) = nodes[static_cast<std::size_t>(i)];
    } else {
      const auto first = axis_nodes(m.parameter_domain[0], counts[0], placement);
      const auto second = axis_nodes(m.parameter_domain[1], counts[1], placement);
      Index row = 0;
      for (double t : first) {
        for (double s : second) {
          params(row, 0) = t;
          params(row, 1) = s;
          ++row;
        }
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    for (Index i = 0; i < n_points; ++i) {
      for (int a = 0; a < d; ++a) {
        const auto& range = m.parameter_domain[static_cast<std::size_t>(a)];
        std::uniform_real_distribution<double> uniform(range.lo, range.hi);
        params(i, a) = uniform(rng);
      }
    }
  }

  PointCloud cloud;
  cloud.ambient.resize(n_points, m.ambient_dim);
  for (Index i = 0; i < n_points; ++i) {
    cloud.ambient.row(i) = embed(m, params.row(i).transpose()).transpose();
  }
  cloud.intrinsic = std::move(params);
  cloud.sampling = options.mode;
  cloud.seed = options.mode == SamplingMode::iid_density ? options.seed : 0;
  return cloud;
}

PointCloud sample_sphere(Index n_points, std::uint64_t seed) {
  if (n_points < 2) throw InvalidArgument("sample_sphere: need N >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PointCloud cloud;
  cloud.ambient.resize(n_points, 3);
  for (Index i = 0; i < n_points; ++i) {
    Eigen::Vector3d v;
    do {
      v << normal(rng), normal(rng), normal(rng);
    } while (v.norm() < 1e-12);
    cloud.ambient.row(i) = v.normalized().transpose();
  }
  cloud.sampling = SamplingMode::iid_density;
  cloud.seed = seed;
  return cloud;
}

PointCloud circle_grid(Index n_points) {
  if (n_points < 2) throw InvalidArgument("circle_grid: need N >= 2");
  PointCloud cloud;
  cloud.ambient.resize(n_points, 2);
  for (Index i = 0; i < n_points; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_points);
    cloud.ambient(i, 0) = std::cos(t);
    cloud.ambient(i, 1) = std::sin(t);
  }
  cloud.sampling = SamplingMode::uniform_grid;
  return cloud;
}

LiftedCoefficients lift_coefficients(const Matrix& jacobian, const Vector& b, const Matrix& c) {
  const Index d = jacobian.cols();
  if (b.size() != d || c.rows() != d || c.cols() != d) {
    throw InvalidArgument("lift_coefficients: b and c must match the Jacobian's column count");
  }
  if (!linalg::is_symmetric(c, 1e-12)) throw InvalidArgument("lift_coefficients: c is not symmetric");
  if (linalg::numerical_rank(jacobian, 1e-10) < d) {
    throw InvalidArgument("lift_coefficients: embedding Jacobian is rank deficient (degenerate parametrization point)");
  }
  LiftedCoefficients out;
  out.drift = linalg::pseudo_inverse(jacobian).transpose() * b;
  const Matrix lifted = jacobian * c * jacobian.transpose();
  Matrix cinv = linalg::pseudo_inverse(lifted, 1e-12);
  out.diffusion_inverse = 0.5 * (cinv + cinv.transpose());
  return out;
}

LiftedCoefficients lift_coefficients(const Manifold& m, const Vector& b, const Matrix& c, const Vector& intrinsic) {
  return lift_coefficients(embedding_jacobian(m, intrinsic), b, c);
}

CoefficientField constant_coefficients(Index n_points, const Vector& drift, const Matrix& diffusion_inverse) {
  if (diffusion_inverse.rows() != drift.size() || diffusion_inverse.cols() != drift.size()) {
    throw InvalidArgument("constant_coefficients: dimension mismatch");
  }
  CoefficientField f;
  f.drift.resize(n_points, drift.size());
  for (Index i = 0; i < n_points; ++i) f.drift.row(i) = drift.transpose();
  f.diffusion_inverse.assign(static_cast<std::size_t>(n_points), diffusion_inverse);
  return f;
}

CoefficientField isotropic_coefficients(Index n_points, Index ambient_dim, double diffusion) {
  if (!(diffusion > 0.0)) throw InvalidArgument("isotropic_coefficients: diffusion must be positive");
  return constant_coefficients(n_points, Vector::Zero(ambient_dim),
                               Matrix::Identity(ambient_dim, ambient_dim) / diffusion);
}

void validate(const PointCloud& cloud, const CoefficientField& coeffs) {
  const Index n = cloud.ambient_dim();
  if (cloud.size() < 1) throw InvalidArgument("empty point cloud");
  if (!cloud.ambient.allFinite()) throw InvalidArgument("point cloud has non-finite coordinates");
  if (coeffs.size() != cloud.size() || coeffs.drift.cols() != n ||
      static_cast<Index>(coeffs.diffusion_inverse.size()) != cloud.size()) {
    throw InvalidArgument("coefficient field is not sized to the point cloud");
  }
  if (!coeffs.drift.allFinite()) throw InvalidArgument("drift has non-finite entries");
  for (const auto& c : coeffs.diffusion_inverse) {
    if (c.rows() != n || c.cols() != n) throw InvalidArgument("diffusion inverse has wrong shape");
    if (!c.allFinite()) throw InvalidArgument("diffusion inverse has non-finite entries");
    if (!linalg::is_symmetric(c, 1e-10)) throw InvalidArgument("diffusion inverse is not symmetric");
  }
}

}  // namespace lk::geometry
