#include "lk/errors.hpp"
#include "lk/operator.hpp"
#include "lk/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lk;

namespace {

geometry::PointCloud torus_grid() {
  return geometry::sample_points(geometry::make_manifold(geometry::ManifoldId::torus), 6400, {});
}

}  // namespace

TEST(TuningGrid, DefaultIsPowersOfTwo) {
  const auto grid = op::default_tuning_grid();
  ASSERT_EQ(grid.size(), 41u);
  EXPECT_EQ(grid.front(), std::ldexp(1.0, -30));
  EXPECT_EQ(grid.back(), 1024.0);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_EQ(grid[i], 2.0 * grid[i - 1]);
}

TEST(Tuning, MatchesDirectSummation) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  geometry::PointCloud cloud;
  cloud.ambient.resize(30, 2);
  for (Index i = 0; i < 30; ++i) {
    for (Index a = 0; a < 2; ++a) cloud.ambient(i, a) = normal(rng);
  }
  const std::vector<double> grid{0.01, 0.1, 1.0, 10.0};
  auto r = op::tune_bandwidth_gaussian(cloud, grid);
  ASSERT_EQ(r.q.size(), grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (Index i = 0; i < 30; ++i) {
      for (Index j = 0; j < 30; ++j) {
        sum += std::exp(-(cloud.ambient.row(i) - cloud.ambient.row(j)).squaredNorm() / (2.0 * grid[g]));
      }
    }
    EXPECT_NEAR(r.q[g], sum / 900.0, 1e-14) << grid[g];
    EXPECT_NEAR(r.log_q[g], std::log(sum / 900.0), 1e-12);
  }
  const double mid = (r.log_q[2] - r.log_q[0]) / (std::log(grid[2]) - std::log(grid[0]));
  EXPECT_NEAR(r.slope[1], mid, 1e-12);
  const double end = (r.log_q[3] - r.log_q[2]) / (std::log(grid[3]) - std::log(grid[2]));
  EXPECT_NEAR(r.slope[3], end, 1e-12);
}

TEST(Tuning, PrototypicalWithIsotropicCoefficientsEqualsGaussian) {
  auto cloud = geometry::circle_grid(200);
  const auto grid = op::default_tuning_grid();
  auto a = op::tune_bandwidth(cloud, geometry::isotropic_coefficients(200, 2), grid);
  auto b = op::tune_bandwidth_gaussian(cloud, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(a.log_q[g], b.log_q[g], 1e-12);
  EXPECT_EQ(a.argmax, b.argmax);
}

TEST(Tuning, FullPatternEqualsAllPairs) {
  auto cloud = geometry::circle_grid(150);
  const auto grid = op::default_tuning_grid();
  auto all = op::tune_bandwidth_gaussian(cloud, grid);
  auto full = op::tune_bandwidth_gaussian(cloud, grid, 150);
  EXPECT_EQ(all.k_used, 150);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(all.log_q[g], full.log_q[g], 1e-12);
  auto sparse = op::tune_bandwidth_gaussian(cloud, grid, 20);
  EXPECT_EQ(sparse.k_used, 20);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_LE(sparse.q[g], all.q[g] * (1.0 + 1e-12));
}

TEST(Tuning, ReportInvariants) {
  auto cloud = geometry::circle_grid(500);
  auto r = op::tune_bandwidth_gaussian(cloud, op::default_tuning_grid());
  double max_slope = -1.0;
  for (double s : r.slope) max_slope = std::max(max_slope, s);
  EXPECT_EQ(r.d_hat, 2.0 * max_slope);
  EXPECT_EQ(r.slope[static_cast<std::size_t>(r.argmax)], max_slope);
  EXPECT_EQ(r.epsilon_star, r.epsilon_grid[static_cast<std::size_t>(r.argmax)]);
  for (Index g = 0; g < r.argmax; ++g) EXPECT_LT(r.slope[static_cast<std::size_t>(g)], max_slope);
}

TEST(Tuning, SlopesVanishAtGridEnds) {
  auto cloud = geometry::circle_grid(400);
  auto r = op::tune_bandwidth_gaussian(cloud, op::default_tuning_grid());
  EXPECT_NEAR(r.slope.front(), 0.0, 1e-6);
  EXPECT_NEAR(r.slope.back(), 0.0, 1e-2);
  EXPECT_NEAR(r.q.front(), 1.0 / 400.0, 1e-12);
  EXPECT_NEAR(r.q.back(), 1.0, 1e-2);
}

TEST(Tuning, CircleDimensionNearOne) {
  auto r = op::tune_bandwidth_gaussian(geometry::circle_grid(2000), op::default_tuning_grid());
  EXPECT_NEAR(r.d_hat, 1.0, 0.2);
}

TEST(Tuning, TorusDimensionNearTwo) {
  auto r = op::tune_bandwidth_gaussian(torus_grid(), op::default_tuning_grid());
  EXPECT_NEAR(r.d_hat, 2.0, 0.4);
}

TEST(Tuning, DegenerateTwoPointCloud) {
  geometry::PointCloud cloud;
  cloud.ambient.resize(2, 3);
  cloud.ambient << 0, 0, 0, 1, 0, 0;
  auto r = op::tune_bandwidth_gaussian(cloud, op::default_tuning_grid());
  for (double q : r.q) EXPECT_TRUE(std::isfinite(q) && q > 0.0);
  EXPECT_NEAR(r.slope.front(), 0.0, 1e-12);
  EXPECT_NEAR(r.slope.back(), 0.0, 1e-3);
  EXPECT_TRUE(std::isfinite(r.d_hat));
}

TEST(Tuning, RejectsShortOrInvalidGrid) {
  auto cloud = geometry::circle_grid(10);
  EXPECT_THROW(op::tune_bandwidth_gaussian(cloud, {0.1, 0.2}), InvalidArgument);
  EXPECT_THROW(op::tune_bandwidth_gaussian(cloud, {}), InvalidArgument);
  EXPECT_THROW(op::tune_bandwidth_gaussian(cloud, {0.1, -0.2, 0.3}), InvalidArgument);
  EXPECT_THROW(op::tune_bandwidth_gaussian(cloud, {0.1, 0.3, 0.2}), InvalidArgument);
}
