#pragma once

#include <cstdint>
#include <string>

#include "pcx/instance.hpp"

namespace pcx {

struct GenerateParams {
  Variant variant = Variant::kPctsp;
  int n = 8;
  std::uint64_t seed = 1;
  double side = 100.0;     // uniform2d, clustered2d
  int clusters = 3;        // clustered2d
  double spread = 3.0;     // clustered2d: cluster radius
  int m = 3;               // line_two_cluster
  double t = 100.0;        // line_two_cluster penalty
  double l = 10000.0;      // line_two_cluster gap
  /// Penalties are drawn uniformly from [0, penalty_scale * diameter].
  double penalty_scale = 1.0;
};

/// Families: uniform2d, clustered2d, line_two_cluster, matrix_random_metric.
/// Every point is a terminal.
PcxInstance generate(const std::string& family, const GenerateParams& params);

}  // namespace pcx
