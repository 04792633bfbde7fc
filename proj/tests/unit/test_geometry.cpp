#include "lk/errors.hpp"
#include "lk/geometry.hpp"
#include "lk/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace lk;
using namespace lk::geometry;

namespace {
constexpr double kPi = std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST(Manifold, DimensionsAndDomains) {
  const auto interval = make_manifold(ManifoldId::interval);
  EXPECT_EQ(interval.intrinsic_dim, 1);
  EXPECT_EQ(interval.ambient_dim, 1);
  EXPECT_TRUE(interval.has_boundary);

  const auto ellipse = make_manifold(ManifoldId::ellipse);
  EXPECT_EQ(ellipse.ambient_dim, 2);
  EXPECT_FALSE(ellipse.has_boundary);
  EXPECT_DOUBLE_EQ(ellipse.parameter_domain[0].hi, 2 * kPi);

  const auto half = make_manifold(ManifoldId::half_ellipse);
  EXPECT_DOUBLE_EQ(half.parameter_domain[0].hi, kPi);
  EXPECT_TRUE(half.has_boundary);

  const auto torus = make_manifold(ManifoldId::torus);
  EXPECT_EQ(torus.intrinsic_dim, 2);
  EXPECT_EQ(torus.ambient_dim, 3);

  const auto half_torus = make_manifold(ManifoldId::half_torus);
  EXPECT_DOUBLE_EQ(half_torus.parameter_domain[0].hi, 2 * kPi);
  EXPECT_DOUBLE_EQ(half_torus.parameter_domain[1].hi, kPi);
  EXPECT_FALSE(half_torus.parameter_domain[1].periodic);

  for (auto id : {ManifoldId::interval, ManifoldId::ellipse, ManifoldId::half_ellipse, ManifoldId::torus,
                  ManifoldId::half_torus}) {
    const auto m = make_manifold(id);
    EXPECT_LE(m.intrinsic_dim, m.ambient_dim);
    EXPECT_EQ(parse_manifold_id(to_string(id)), id);
  }
  EXPECT_THROW(make_manifold(ManifoldId::ambient_cloud), InvalidArgument);
}

TEST(Embed, KnownValues) {
  const auto ellipse = make_manifold(ManifoldId::ellipse);
  EXPECT_TRUE(embed(ellipse, vec({0.0})).isApprox(vec({1.0, 0.0})));
  const auto torus = make_manifold(ManifoldId::torus);
  EXPECT_TRUE(embed(torus, vec({0.0, 0.0})).isApprox(vec({3.0, 0.0, 0.0})));
  const Vector p = embed(torus, vec({kPi / 2, kPi}));
  EXPECT_NEAR(p[0], -2.0, 1e-15);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
  EXPECT_NEAR(p[2], 1.0, 1e-15);
}

TEST(Embed, AmbientCloudHasNoEmbedding) {
  EXPECT_THROW(embed(make_ambient_manifold(3), vec({0.0})), InvalidArgument);
}

TEST(Embed, PeriodicOnClosedCoordinates) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  const auto ellipse = make_manifold(ManifoldId::ellipse);
  const auto torus = make_manifold(ManifoldId::torus);
  for (int t = 0; t < 100; ++t) {
    const double a = angle(rng);
    const double b = angle(rng);
    EXPECT_LE((embed(ellipse, vec({a})) - embed(ellipse, vec({a + 2 * kPi}))).norm(), 1e-14);
    EXPECT_LE((embed(torus, vec({a, b})) - embed(torus, vec({a + 2 * kPi, b}))).norm(), 1e-14);
    EXPECT_LE((embed(torus, vec({a, b})) - embed(torus, vec({a, b + 2 * kPi}))).norm(), 1e-14);
  }
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.1, 3.0);
  for (auto id : {ManifoldId::interval, ManifoldId::ellipse, ManifoldId::torus}) {
    const auto m = make_manifold(id);
    for (int t = 0; t < 20; ++t) {
      Vector x(m.intrinsic_dim);
      for (int a = 0; a < m.intrinsic_dim; ++a) x[a] = id == ManifoldId::interval ? angle(rng) / 3.0 : angle(rng);
      const Matrix j = embedding_jacobian(m, x);
      for (int a = 0; a < m.intrinsic_dim; ++a) {
        const double h = 1e-6;
        Vector xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const Vector fd = (embed(m, xp) - embed(m, xm)) / (2 * h);
        EXPECT_LE((fd - j.col(a)).norm(), 1e-8);
      }
    }
  }
}

TEST(SamplePoints, EllipseFourPoints) {
  const auto cloud = sample_points(make_manifold(ManifoldId::ellipse), 4, {});
  ASSERT_TRUE(cloud.intrinsic.has_value());
  const double expected_theta[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
  const double expected_xy[][2] = {{1, 0}, {0, 2}, {-1, 0}, {0, -2}};
  for (Index i = 0; i < 4; ++i) {
    EXPECT_NEAR((*cloud.intrinsic)(i, 0), expected_theta[i], 1e-15);
    EXPECT_NEAR(cloud.ambient(i, 0), expected_xy[i][0], 1e-15);
    EXPECT_NEAR(cloud.ambient(i, 1), expected_xy[i][1], 1e-15);
  }
}

TEST(SamplePoints, IntervalIncludesBothEndpoints) {
  const auto cloud = sample_points(make_manifold(ManifoldId::interval), 1000, {});
  EXPECT_EQ(cloud.size(), 1000);
  EXPECT_DOUBLE_EQ(cloud.ambient(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(cloud.ambient(999, 0), 1.0);
  EXPECT_NEAR(cloud.ambient(1, 0) - cloud.ambient(0, 0), 1.0 / 999.0, 1e-15);
}

TEST(SamplePoints, IntervalCellCentredOption) {
  SamplingOptions opt;
  opt.placement = NodePlacement::cell_centered;
  const auto cloud = sample_points(make_manifold(ManifoldId::interval), 10, opt);
  EXPECT_NEAR(cloud.ambient(0, 0), 0.05, 1e-15);
  EXPECT_NEAR(cloud.ambient(9, 0), 0.95, 1e-15);
}

TEST(SamplePoints, TorusGrid80By80) {
  const auto cloud = sample_points(make_manifold(ManifoldId::torus), 6400, {});
  EXPECT_EQ(cloud.size(), 6400);
  std::set<double> theta, phi;
  for (Index i = 0; i < cloud.size(); ++i) {
    theta.insert((*cloud.intrinsic)(i, 0));
    phi.insert((*cloud.intrinsic)(i, 1));
  }
  EXPECT_EQ(theta.size(), 80u);
  EXPECT_EQ(phi.size(), 80u);
  EXPECT_DOUBLE_EQ(*theta.begin(), 0.0);
  EXPECT_LT(*theta.rbegin(), 2 * kPi);  // period endpoint excluded
}

TEST(SamplePoints, HalfTorusGridShapeAndPlacement) {
  const auto cloud = sample_points(make_manifold(ManifoldId::half_torus), 3200, {});
  std::set<double> phi;
  for (Index i = 0; i < cloud.size(); ++i) phi.insert((*cloud.intrinsic)(i, 1));
  EXPECT_EQ(phi.size(), 40u);
  EXPECT_NEAR(*phi.begin(), kPi / 80, 1e-15);

  SamplingOptions endpoints;
  endpoints.placement = NodePlacement::endpoints;
  const auto ep = sample_points(make_manifold(ManifoldId::half_torus), 3200, endpoints);
  std::set<double> phi2;
  for (Index i = 0; i < ep.size(); ++i) phi2.insert((*ep.intrinsic)(i, 1));
  EXPECT_DOUBLE_EQ(*phi2.begin(), 0.0);
  EXPECT_DOUBLE_EQ(*phi2.rbegin(), kPi);
}

TEST(SamplePoints, AxisCountsMustMultiplyToN) {
  SamplingOptions opt;
  opt.axis_counts = {10, 20};
  EXPECT_EQ(sample_points(make_manifold(ManifoldId::torus), 200, opt).size(), 200);
  EXPECT_THROW(sample_points(make_manifold(ManifoldId::torus), 201, opt), InvalidArgument);
  EXPECT_THROW(sample_points(make_manifold(ManifoldId::torus), 50, {}), InvalidArgument);
}

TEST(SamplePoints, Errors) {
  EXPECT_THROW(sample_points(make_manifold(ManifoldId::interval), 1, {}), InvalidArgument);
  EXPECT_THROW(sample_points(make_ambient_manifold(3), 10, {}), InvalidArgument);
}

TEST(SamplePoints, GridPointsDistinctAndEmbedded) {
  for (auto [id, n] : std::vector<std::pair<ManifoldId, Index>>{{ManifoldId::interval, 200},
                                                                 {ManifoldId::ellipse, 200},
                                                                 {ManifoldId::half_ellipse, 200},
                                                                 {ManifoldId::torus, 400},
                                                                 {ManifoldId::half_torus, 450}}) {
    const auto m = make_manifold(id);
    const auto cloud = sample_points(m, n, {});
    std::set<std::vector<double>> seen;
    for (Index i = 0; i < n; ++i) {
      const Vector x = cloud.intrinsic->row(i).transpose();
      EXPECT_LE((embed(m, x) - cloud.ambient.row(i).transpose()).norm(), 1e-15);
      seen.insert(std::vector<double>(cloud.ambient.row(i).data(), cloud.ambient.row(i).data() + m.ambient_dim));
    }
    EXPECT_EQ(static_cast<Index>(seen.size()), n) << to_string(id);
  }
}

TEST(SamplePoints, IidIsSeededAndInDomain) {
  SamplingOptions opt;
  opt.mode = SamplingMode::iid_density;
  opt.seed = 42;
  const auto m = make_manifold(ManifoldId::half_torus);
  const auto a = sample_points(m, 500, opt);
  const auto b = sample_points(m, 500, opt);
  EXPECT_EQ(a.ambient, b.ambient);
  EXPECT_EQ(a.seed, 42u);
  for (Index i = 0; i < 500; ++i) {
    EXPECT_GE((*a.intrinsic)(i, 1), 0.0);
    EXPECT_LE((*a.intrinsic)(i, 1), kPi);
  }
  opt.seed = 43;
  EXPECT_NE(sample_points(m, 500, opt).ambient, a.ambient);
}

TEST(SampleSphere, UnitNormAndSeeded) {
  const auto a = sample_sphere(300, 9);
  for (Index i = 0; i < a.size(); ++i) EXPECT_NEAR(a.ambient.row(i).norm(), 1.0, 1e-15);
  EXPECT_EQ(a.ambient, sample_sphere(300, 9).ambient);
  EXPECT_FALSE(a.intrinsic.has_value());
}

TEST(Lift, IntervalIdentity) {
  const auto r = lift_coefficients(make_manifold(ManifoldId::interval), vec({2.0}), Matrix::Constant(1, 1, 1.0),
                                   vec({0.3}));
  EXPECT_NEAR(r.drift[0], 2.0, 1e-15);
  EXPECT_NEAR(r.diffusion_inverse(0, 0), 1.0, 1e-15);
}

TEST(Lift, EllipseAtZero) {
  const auto r = lift_coefficients(make_manifold(ManifoldId::ellipse), vec({1.0}), Matrix::Constant(1, 1, 2.1),
                                   vec({0.0}));
  EXPECT_NEAR(r.drift[0], 0.0, 1e-15);
  EXPECT_NEAR(r.drift[1], 0.5, 1e-15);
  EXPECT_NEAR(r.diffusion_inverse(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(r.diffusion_inverse(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(r.diffusion_inverse(1, 1), 1.0 / 8.4, 1e-15);
  // Same through a hand-rolled pseudo-inverse of J c J^T (rank one: v v^T / |v|^4).
  Vector v(2);
  v << 0.0, 2.0;
  const Matrix jcj = 2.1 * v * v.transpose();
  const Matrix pinv = jcj / std::pow(jcj.trace(), 2);
  EXPECT_LE((pinv - r.diffusion_inverse).norm(), 1e-15);
}

TEST(Lift, TorusAtOrigin) {
  const auto r = lift_coefficients(make_manifold(ManifoldId::torus), vec({2.0, 0.0}), Matrix::Identity(2, 2),
                                   vec({0.0, 0.0}));
  EXPECT_LE((r.drift - vec({0.0, 0.0, 2.0})).norm(), 1e-15);
  EXPECT_EQ(linalg::numerical_rank(r.diffusion_inverse, 1e-10), 2);
}

TEST(Lift, RankDeficientJacobianIsAnError) {
  Matrix j = Matrix::Zero(3, 2);
  j(0, 0) = 1.0;
  j(0, 1) = 2.0;
  EXPECT_THROW(lift_coefficients(j, vec({1.0, 0.0}), Matrix::Identity(2, 2)), InvalidArgument);
}

// J c J^T restricted to the tangent plane equals the pseudo-inverse of Cinv,
// Cinv is symmetric PSD of rank d, and B pulls back to b through J^T B = g g^-1 b.
TEST(Lift, RoundTripAtRandomPoints) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto id : {ManifoldId::interval, ManifoldId::ellipse, ManifoldId::half_ellipse, ManifoldId::torus,
                  ManifoldId::half_torus}) {
    const auto m = make_manifold(id);
    const int d = m.intrinsic_dim;
    for (int t = 0; t < 100; ++t) {
      Vector x(d);
      for (int a = 0; a < d; ++a) {
        const auto& r = m.parameter_domain[static_cast<std::size_t>(a)];
        x[a] = r.lo + unit(rng) * r.length();
      }
      Matrix a = Matrix::Random(d, d);
      const Matrix c = a * a.transpose() + 0.5 * Matrix::Identity(d, d);
      Vector b(d);
      for (int s = 0; s < d; ++s) b[s] = unit(rng) - 0.5;
      const auto lifted = lift_coefficients(m, b, c, x);
      const Matrix jac = embedding_jacobian(m, x);
      const Matrix jcj = jac * c * jac.transpose();
      EXPECT_TRUE(linalg::is_symmetric(lifted.diffusion_inverse, 1e-12));
      EXPECT_TRUE(linalg::is_positive_semidefinite(lifted.diffusion_inverse, 1e-10));
      EXPECT_EQ(linalg::numerical_rank(lifted.diffusion_inverse, 1e-8), d);
      const Matrix back = linalg::pseudo_inverse(lifted.diffusion_inverse, 1e-10);
      for (int s = 0; s < d; ++s) {
        const Vector tangent = jac.col(s);
        EXPECT_LE((back * tangent - jcj * tangent).norm(), 1e-8 * (1.0 + (jcj * tangent).norm()));
      }
      EXPECT_LE((jac.transpose() * lifted.drift - b).norm(), 1e-10);
    }
  }
}

TEST(Coefficients, ValidateCatchesMismatches) {
  const auto cloud = sample_points(make_manifold(ManifoldId::ellipse), 10, {});
  auto coeffs = isotropic_coefficients(10, 2);
  EXPECT_NO_THROW(validate(cloud, coeffs));
  auto bad = coeffs;
  bad.diffusion_inverse[3](0, 1) = 1.0;
  EXPECT_THROW(validate(cloud, bad), InvalidArgument);
  EXPECT_THROW(validate(cloud, isotropic_coefficients(9, 2)), InvalidArgument);
  EXPECT_THROW(validate(cloud, isotropic_coefficients(10, 3)), InvalidArgument);
  EXPECT_THROW(isotropic_coefficients(10, 2, 0.0), InvalidArgument);
}
