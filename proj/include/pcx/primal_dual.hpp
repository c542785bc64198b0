#pragma once

#include <vector>

#include "pcx/instance.hpp"

namespace pcx {

/// One moat of a growth run: its member points and final dual value.
struct Moat {
  std::vector<PointId> members;
  double y = 0;
  bool deactivated = false;
};

/// Dual record of the best rooted run, for checking feasibility in tests.
struct GwTrace {
  PointId root = -1;
  /// Penalties the growth actually used (halved for tours, must-visit
  /// replaced by a large finite value, negative values clamped to zero).
  std::vector<double> growth_penalty;
  std::vector<Moat> moats;
};

/// Moat growing for the rooted prize-collecting Steiner tree, run from every
/// terminal as root; the cheapest pruned result (or the empty solution) wins.
/// Tours double the tree and shortcut it.
Solution gw_solve(const PcxInstance& inst, GwTrace* trace = nullptr);

/// Terminals of inst inside B(u, radius).
PcxInstance ball_instance(const PcxInstance& inst, PointId u, double radius);

/// gw_solve on the terminals in B(u, t s^i), made net-respecting.
Solution approx_subsolver(const PcxInstance& inst, const NetTree& tree, int i, PointId u, double t, double eps_nr);

}  // namespace pcx
