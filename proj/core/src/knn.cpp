#include "lk/errors.hpp"
#include "lk/kernel.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lk::kernel {

NeighborLists build_knn_graph(const geometry::PointCloud& cloud, Index k) {
  const Index n_points = cloud.size();
  if (k < 1 || k > n_points) {
    throw InvalidArgument("build_knn_graph: need 1 <= k <= N (k=" + std::to_string(k) +
                          ", N=" + std::to_string(n_points) + ")");
  }
  if (k == n_points) return complete_graph(n_points);

  NeighborLists out;
  out.n_points = n_points;
  out.k = k;
  out.index.resize(static_cast<std::size_t>(n_points * k));

  std::vector<double> dist(static_cast<std::size_t>(n_points));
  std::vector<Index> order(static_cast<std::size_t>(n_points));
  for (Index i = 0; i < n_points; ++i) {
    const auto xi = cloud.ambient.row(i);
    for (Index j = 0; j < n_points; ++j) {
      dist[static_cast<std::size_t>(j)] = (cloud.ambient.row(j) - xi).squaredNorm();
    }
    dist[static_cast<std::size_t>(i)] = -1.0;  // self first even among duplicate points
    std::iota(order.begin(), order.end(), Index{0});
    const auto closer = [&dist](Index a, Index b) {
      const double da = dist[static_cast<std::size_t>(a)];
      const double db = dist[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    };
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), closer);
    auto dest = out.index.begin() + i * k;
    std::copy(order.begin(), order.begin() + k, dest);
    std::sort(dest, dest + k);
  }
  return out;
}

NeighborLists complete_graph(Index n_points) {
  NeighborLists out;
  out.n_points = n_points;
  out.k = n_points;
  out.index.resize(static_cast<std::size_t>(n_points * n_points));
  for (Index i = 0; i < n_points; ++i) {
    std::iota(out.index.begin() + i * n_points, out.index.begin() + (i + 1) * n_points, Index{0});
  }
  return out;
}

}  // namespace lk::kernel
