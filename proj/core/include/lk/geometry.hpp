#pragma once

#include "lk/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lk::geometry {

enum class ManifoldId { interval, ellipse, half_ellipse, torus, half_torus, ambient_cloud };

std::string_view to_string(ManifoldId id);
std::optional<ManifoldId> parse_manifold_id(std::string_view name);

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;
  /// Closed angular coordinate: lo and hi are the same point.
  bool periodic = false;
  double length() const { return hi - lo; }
};

struct Manifold {
  ManifoldId id = ManifoldId::ambient_cloud;
  int intrinsic_dim = 0;
  int ambient_dim = 0;
  std::vector<ParameterRange> parameter_domain;
  bool has_boundary = false;

  bool has_embedding() const { return id != ManifoldId::ambient_cloud; }
};

/// interval [0,1]; ellipse (cos t, 2 sin t), t in [0,2pi]; half ellipse t in
/// [0,pi]; torus ((2+cos t)cos p, (2+cos t)sin p, sin t) with t,p in
/// [0,2pi]; half torus p in [0,pi].
Manifold make_manifold(ManifoldId id);
/// Cloud with no parametrization; the intrinsic dimension is unknown (0).
Manifold make_ambient_manifold(int ambient_dim);

enum class SamplingMode { uniform_grid, iid_density };

std::string_view to_string(SamplingMode mode);
std::optional<SamplingMode> parse_sampling_mode(std::string_view name);

/// Where grid nodes sit on a bounded (non-periodic) coordinate. Periodic
/// coordinates always use i * period / count.
enum class NodePlacement {
  manifold_default,  ///< endpoints for the interval, cell-centred for half manifolds
  endpoints,         ///< lo + i (hi - lo) / (count - 1)
  cell_centered,     ///< lo + (i + 1/2) (hi - lo) / count
};

std::string_view to_string(NodePlacement placement);
std::optional<NodePlacement> parse_node_placement(std::string_view name);

struct SamplingOptions {
  SamplingMode mode = SamplingMode::uniform_grid;
  std::uint64_t seed = 0;
  NodePlacement placement = NodePlacement::manifold_default;
  /// Per-axis grid counts for 2-D manifolds. Empty: square grid on the torus,
  /// a 2m x m grid on the half torus.
  std::vector<Index> axis_counts;
};

struct PointCloud {
  PointMatrix ambient;
  std::optional<PointMatrix> intrinsic;
  SamplingMode sampling = SamplingMode::iid_density;
  std::uint64_t seed = 0;

  Index size() const { return ambient.rows(); }
  Index ambient_dim() const { return ambient.cols(); }
};

/// Uniform grid or iid draws in parameter space, embedded into ambient space.
/// iid draws are uniform in the parameters, hence non-uniform on the manifold.
PointCloud sample_points(const Manifold& manifold, Index n_points, const SamplingOptions& options);

/// iid uniform samples on the unit sphere in R^3, ambient coordinates only.
PointCloud sample_sphere(Index n_points, std::uint64_t seed);

/// Ambient cloud on the unit circle at angles 2 pi i / N.
PointCloud circle_grid(Index n_points);

Vector embed(const Manifold& manifold, const Vector& intrinsic);
/// n x d Jacobian of the embedding.
Matrix embedding_jacobian(const Manifold& manifold, const Vector& intrinsic);

struct LiftedCoefficients {
  Vector drift;              ///< B = (J^+)^T b
  Matrix diffusion_inverse;  ///< C^-1 = (J c J^T)^+
};

/// Lifts intrinsic drift b (d) and SPD diffusion c (d x d) through the n x d
/// Jacobian. Throws InvalidArgument when the Jacobian is rank deficient.
LiftedCoefficients lift_coefficients(const Matrix& jacobian, const Vector& b, const Matrix& c);
LiftedCoefficients lift_coefficients(const Manifold& manifold, const Vector& b, const Matrix& c,
                                     const Vector& intrinsic);

/// Per-point ambient drift B and diffusion pseudo-inverse C^-1.
struct CoefficientField {
  PointMatrix drift;
  std::vector<Matrix> diffusion_inverse;
  std::optional<PointMatrix> intrinsic_b;
  std::optional<std::vector<Matrix>> intrinsic_c;

  Index size() const { return drift.rows(); }
};

CoefficientField constant_coefficients(Index n_points, const Vector& drift,
                                       const Matrix& diffusion_inverse);
/// B = 0, C = diffusion * I. diffusion = 2 gives the Laplace-Beltrami operator.
CoefficientField isotropic_coefficients(Index n_points, Index ambient_dim, double diffusion = 1.0);

/// Checks sizes, finiteness and symmetry. Throws InvalidArgument.
void validate(const PointCloud& cloud, const CoefficientField& coeffs);

}  // namespace lk::geometry
