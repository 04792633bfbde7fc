#include "lk/errors.hpp"
#include "lk/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lk::op {
namespace {

// exp(-(d + eps B)^T C (d + eps B) / (2 eps)) = exp(-(alpha / eps + beta + gamma eps))
// with alpha = d^T C d / 2, beta = B^T C d, gamma = B^T C B / 2, so each pair costs
// one quadratic form regardless of the grid size.
constexpr double kMaxExponent = 745.0;  // exp(-745) is already below the smallest subnormal

// sum_j exp(-e_j) kept as exp(-floor) * scaled: with a strong drift every
// term can underflow at large eps while log Q stays finite.
struct LogSum {
  double floor = std::numeric_limits<double>::infinity();
  double scaled = 0.0;

  void add(double e) {
    if (e < floor) {
      const double gap = floor - e;
      scaled = (gap < kMaxExponent ? scaled * std::exp(-gap) : 0.0) + 1.0;
      floor = e;
    } else if (e - floor < kMaxExponent) {
      scaled += std::exp(floor - e);
    }
  }
  void merge(const LogSum& other) {
    if (other.scaled == 0.0) return;
    if (other.floor < floor) {
      const double gap = floor - other.floor;
      scaled = (gap < kMaxExponent ? scaled * std::exp(-gap) : 0.0) + other.scaled;
      floor = other.floor;
    } else if (other.floor - floor < kMaxExponent) {
      scaled += other.scaled * std::exp(floor - other.floor);
    }
  }
  double log() const { return std::log(scaled) - floor; }
};

struct PairTerms {
  double alpha;
  double beta;
  double gamma;
};

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 3) throw InvalidArgument("tuning grid needs at least 3 points");
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (!(grid[m] > 0.0) || !std::isfinite(grid[m])) throw InvalidArgument("tuning grid values must be positive");
    if (m > 0 && !(grid[m] > grid[m - 1])) throw InvalidArgument("tuning grid must be strictly increasing");
  }
}

template <typename TermFn>
TuningReport run_tuning(const geometry::PointCloud& cloud, const std::vector<double>& grid, Index k, TermFn terms) {
  check_grid(grid);
  const Index n_points = cloud.size();
  if (k == 0) k = n_points;
  if (k < 1 || k > n_points) throw InvalidArgument("tuning: need 1 <= k <= N");
  const bool all_pairs = k == n_points;
  const auto pattern = all_pairs ? kernel::NeighborLists{} : kernel::build_knn_graph(cloud, k);
  const std::size_t g = grid.size();

  std::vector<double> inv_grid(g);
  for (std::size_t m = 0; m < g; ++m) inv_grid[m] = 1.0 / grid[m];
  std::vector<LogSum> total(g);
  std::vector<LogSum> row(g);
  for (Index i = 0; i < n_points; ++i) {
    std::fill(row.begin(), row.end(), LogSum{});
    const auto accumulate = [&](Index j) {
      const PairTerms t = terms(i, j);
      for (std::size_t m = 0; m < g; ++m) row[m].add(t.alpha * inv_grid[m] + t.beta + t.gamma * grid[m]);
    };
    if (all_pairs) {
      for (Index j = 0; j < n_points; ++j) accumulate(j);
    } else {
      for (Index j : pattern.row(i)) accumulate(j);
    }
    for (std::size_t m = 0; m < g; ++m) total[m].merge(row[m]);
  }

  TuningReport r;
  r.epsilon_grid = grid;
  r.k_used = k;
  const double log_scale = -2.0 * std::log(static_cast<double>(n_points));
  r.q.resize(g);
  r.log_q.resize(g);
  for (std::size_t m = 0; m < g; ++m) {
    r.log_q[m] = total[m].log() + log_scale;
    r.q[m] = std::exp(r.log_q[m]);
  }
  r.slope.resize(g);
  for (std::size_t m = 0; m < g; ++m) {
    const std::size_t lo = m == 0 ? 0 : m - 1;
    const std::size_t hi = m + 1 == g ? m : m + 1;
    r.slope[m] = (r.log_q[hi] - r.log_q[lo]) / (std::log(grid[hi]) - std::log(grid[lo]));
  }
  std::size_t best = 0;
  for (std::size_t m = 1; m < g; ++m) {
    if (r.slope[m] > r.slope[best]) best = m;
  }
  r.argmax = static_cast<Index>(best);
  r.epsilon_star = grid[best];
  r.d_hat = 2.0 * r.slope[best];
  return r;
}

}  // namespace

std::vector<double> default_tuning_grid() {
  std::vector<double> grid;
  for (int p = -30; p <= 10; ++p) grid.push_back(std::ldexp(1.0, p));
  return grid;
}

TuningReport tune_bandwidth(const geometry::PointCloud& cloud, const geometry::CoefficientField& coeffs,
                            const std::vector<double>& grid, Index k) {
  geometry::validate(cloud, coeffs);
  const Index n = cloud.ambient_dim();
  Vector d(n);
  Vector cd(n);
  return run_tuning(cloud, grid, k, [&](Index i, Index j) {
    const Matrix& c = coeffs.diffusion_inverse[static_cast<std::size_t>(i)];
    const auto b = coeffs.drift.row(i).transpose();
    d = (cloud.ambient.row(i) - cloud.ambient.row(j)).transpose();
    cd.noalias() = c * d;
    return PairTerms{0.5 * d.dot(cd), b.dot(cd), 0.5 * b.dot(c * b)};
  });
}

TuningReport tune_bandwidth_gaussian(const geometry::PointCloud& cloud, const std::vector<double>& grid, Index k) {
  return run_tuning(cloud, grid, k, [&](Index i, Index j) {
    return PairTerms{0.5 * (cloud.ambient.row(i) - cloud.ambient.row(j)).squaredNorm(), 0.0, 0.0};
  });
}

}  // namespace lk::op
