#include "pcx/generate.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace pcx {

namespace {

std::vector<double> draw_penalties(std::mt19937_64& rng, const MetricSpace& sp, double scale) {
  std::uniform_real_distribution<double> u(0.0, std::max(scale * sp.diameter(), 0.0));
  std::vector<double> pen(static_cast<std::size_t>(sp.size()));
  for (double& p : pen) p = u(rng);
  return pen;
}

std::vector<PointId> all_points(int n) {
  std::vector<PointId> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

PcxInstance generate(const std::string& family, const GenerateParams& p) {
  std::mt19937_64 rng(p.seed);
  if (family == "line_two_cluster") {
    if (p.m < 1 || p.t < 0 || p.l <= 0) throw InvalidInput("line_two_cluster needs m >= 1, t >= 0, l > 0");
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 2 * p.m; ++i) coords.push_back({static_cast<double>(i)});
    const double right = (2 * p.m - 1) + p.l;
    for (int i = 0; i < p.m; ++i) coords.push_back({right + i});
    auto sp = std::make_shared<const MetricSpace>(MetricSpace::from_coordinates(coords, 1));
    std::vector<double> pen(coords.size(), p.t);
    return PcxInstance(p.variant, sp, all_points(sp->size()), pen);
  }
  if (p.n < 1) throw InvalidInput("n must be positive");
  if (family == "uniform2d" || family == "clustered2d") {
    if (p.side <= 0) throw InvalidInput("side must be positive");
    std::uniform_real_distribution<double> u(0.0, p.side);
    std::vector<std::vector<double>> coords;
    if (family == "uniform2d") {
      for (int i = 0; i < p.n; ++i) {
        double x = u(rng);
        double y = u(rng);
        coords.push_back({x, y});
      }
    } else {
      if (p.clusters < 1) throw InvalidInput("clusters must be positive");
      std::vector<std::array<double, 2>> centers;
      for (int c = 0; c < p.clusters; ++c) {
        double x = u(rng);
        double y = u(rng);
        centers.push_back({x, y});
      }
      std::normal_distribution<double> g(0.0, p.spread);
      for (int i = 0; i < p.n; ++i) {
        const auto& c = centers[static_cast<std::size_t>(i % p.clusters)];
        double dx = g(rng);
        double dy = g(rng);
        coords.push_back({c[0] + dx, c[1] + dy});
      }
    }
    auto sp = std::make_shared<const MetricSpace>(MetricSpace::from_coordinates(coords, 2));
    auto pen = draw_penalties(rng, *sp, p.penalty_scale);
    return PcxInstance(p.variant, sp, all_points(p.n), pen);
  }
  if (family == "matrix_random_metric") {
    std::uniform_real_distribution<double> u(1.0, p.side);
    std::vector<std::vector<double>> d(static_cast<std::size_t>(p.n), std::vector<double>(static_cast<std::size_t>(p.n), 0.0));
    for (int a = 0; a < p.n; ++a)
      for (int b = a + 1; b < p.n; ++b) d[a][b] = d[b][a] = u(rng);
    // Shortest-path closure turns the random weights into a metric.
    for (int k = 0; k < p.n; ++k)
      for (int a = 0; a < p.n; ++a)
        for (int b = 0; b < p.n; ++b) d[a][b] = std::min(d[a][b], d[a][k] + d[k][b]);
    // Doubling dimension of an arbitrary finite metric is at most log2 n.
    int k = 1;
    while ((1 << k) < p.n) ++k;
    auto sp = std::make_shared<const MetricSpace>(MetricSpace::from_matrix(d, k));
    auto pen = draw_penalties(rng, *sp, p.penalty_scale);
    return PcxInstance(p.variant, sp, all_points(p.n), pen);
  }
  throw InvalidInput("unknown family '" + family + "'");
}

}  // namespace pcx
