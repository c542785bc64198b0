#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pcx/hierdecomp.hpp"

namespace pcx {

/// Connectivity contract of a cluster towards the outside.
///
/// Tours: each group is a pair {p, q} (sorted; p may equal q) standing for a
/// path inside the cluster between two active portals. Trees: each group is
/// a part of the partition of the active portals. Groups are sorted; the
/// active set R is the union of the groups.
using Interface = std::vector<std::vector<PointId>>;

std::vector<PointId> interface_portals(const Interface& iface);

/// The augmented interface graph of one cluster: the cross edges G plus the
/// virtual edges standing for the children's interfaces.
struct InterfaceGraph {
  std::vector<std::pair<PointId, PointId>> edges;
  /// Directed edges (tail, head) for the tour check; undirected otherwise.
  bool directed = false;
  /// Union of the children's active portals.
  std::vector<PointId> child_portals;
};

/// Tours, R empty: Eulerian and connected over every child portal.
/// Tours, R non-empty: the edges split into trails joining each pair of P
/// (a pair {p,p} may be an empty trail) and every child portal is on a trail
/// or in R. Pairs are ordered when the graph is directed.
/// Trees: the graph is a forest; R empty means one component over every
/// child portal, otherwise every component meets R and induces exactly P.
bool check_consistency(const InterfaceGraph& g, const std::vector<PointId>& R, const Interface& P, Variant variant);

struct ChildChoice {
  bool active = false;
  double value = 0;        // v(C_i, R_i, P_i) when active
  double penalty = 0;      // pi(C_i)
  double closed_value = 0; // v(C_i, {}, {}), used only when R is empty
};

/// w(G) + active child values + penalties of inactive children; when R is
/// empty also the alternative of one child closing on its own while every
/// other child pays its penalty.
double candidate_value(double g_weight, const std::vector<ChildChoice>& children, bool r_empty);

struct DpOptions {
  int m = 32;  // portals per cluster the program may use
  int r = 3;   // active portals per cluster
  int max_pairs = 2;
  /// Open chains (tours) or components (trees) while merging children.
  int max_open = 3;
  std::size_t max_states = 200000;
  /// Verify every winning configuration with check_consistency.
  bool self_check = true;
};

struct DpStats {
  std::size_t entries = 0;
  std::size_t states = 0;
  std::vector<std::size_t> entries_per_height;
};

struct DpResult {
  double value = 0;
  Solution solution;
  DpStats stats;
};

/// Bottom-up program over the cluster tree. Throws BudgetExceeded when a
/// merge exceeds max_states.
DpResult dp_solve(const PcxInstance& inst, const HierarchicalDecomposition& d, const DpOptions& options = {});

/// Portals of the cluster the program may route through: inner portals, the
/// m closest to the center.
std::vector<PointId> dp_portals(const HierarchicalDecomposition& d, int cluster, int m);

}  // namespace pcx
