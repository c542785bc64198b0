#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "pcx/instance.hpp"

namespace pcx {

struct DecompOptions {
  /// chi = chi_base^k in the truncated exponential density.
  double chi_base = 2.0;
  /// Portal granularity: a height-i cluster uses portals at the height j
  /// with s^j <= theta_p s^i < s^{j+1}, clipped at 0.
  double theta_p = 0.25;
};

struct Cluster {
  int id = 0;
  int height = 0;
  PointId center = 0;
  std::vector<PointId> points;  // sorted
  int parent = -1;
  std::vector<int> children;    // sorted by center id
};

/// Nested partitions of the space from the whole space at height L down to
/// singletons at height 0, sampled from per-height random orderings and
/// truncated-exponential radii.
class HierarchicalDecomposition {
 public:
  HierarchicalDecomposition(TreePtr tree, DecompOptions options, std::uint64_t seed);

  const NetTree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }
  const MetricSpace& space() const { return tree_->space(); }
  const DecompOptions& options() const { return options_; }
  std::uint64_t seed() const { return seed_; }
  int top() const { return tree_->top(); }

  const std::vector<Cluster>& clusters() const { return clusters_; }
  const Cluster& cluster(int id) const { return clusters_[id]; }
  int root() const { return root_; }
  /// Cluster ids at one height, in creation order.
  const std::vector<int>& at_height(int i) const { return by_height_[i]; }
  int cluster_of(int height, PointId p) const { return cluster_of_[height][p]; }
  int leaf(PointId p) const { return cluster_of_[0][p]; }
  bool contains(int ancestor, int descendant) const;
  bool siblings(int a, int b) const;

  /// Largest height at which a and b lie in different clusters; -1 if never.
  int cut_height(PointId a, PointId b) const;

  /// r_u at height i for u in N_i (height 0 is discrete and has no radii).
  double radius(int i, PointId u) const { return radius_[i][u]; }
  const std::vector<PointId>& ordering(int i) const { return ordering_[i]; }

  int portal_height(int cluster_height) const;
  /// {anc(u, j) : u in C}, sorted.
  const std::vector<NetNode>& portals(int cluster) const { return portals_[cluster]; }
  /// Portal points lying inside the cluster, sorted; the dynamic program
  /// routes through these only.
  const std::vector<PointId>& inner_portals(int cluster) const { return inner_portals_[cluster]; }

  /// Points not covered by any ball at some height and assigned to the
  /// nearest center instead.
  int uncovered_assignments() const { return uncovered_; }

 private:
  TreePtr tree_;
  DecompOptions options_;
  std::uint64_t seed_;
  std::vector<Cluster> clusters_;
  int root_ = 0;
  std::vector<std::vector<int>> by_height_;
  std::vector<std::vector<int>> cluster_of_;
  std::vector<std::vector<double>> radius_;
  std::vector<std::vector<PointId>> ordering_;
  std::vector<std::vector<NetNode>> portals_;
  std::vector<std::vector<PointId>> inner_portals_;
  int uncovered_ = 0;
};

/// Draw from the density proportional to exp(-t ln(chi) / scale) on [0, scale].
double sample_truncated_exponential(std::mt19937_64& rng, double scale, double chi);

/// A portal: net-tree node together with the cluster it serves.
struct Portal {
  NetNode node;
  int cluster = 0;
  friend bool operator==(const Portal&, const Portal&) = default;
  friend auto operator<=>(const Portal&, const Portal&) = default;
};

struct PortalEdge {
  Portal a;
  Portal b;
};

/// Multigraph on portals. A terminal t counts as visited when the leaf
/// portal ((t,0), leaf(t)) is present.
struct PortalGraph {
  std::vector<PortalEdge> edges;
  std::vector<Portal> isolated;

  double weight(const MetricSpace& space) const;
  std::vector<Portal> vertices() const;  // sorted, unique
  /// Points whose leaf portal is present.
  std::vector<PointId> visited(const HierarchicalDecomposition& d) const;
  bool eulerian() const;  // every portal has even degree
  bool connected() const;
  /// Maps (v, j) to v and drops edges whose endpoints coincide.
  Solution induced() const;
};

struct PortalRespecting {
  PortalGraph graph;
  /// First original edge whose rerouting made each portal non-leaf active.
  std::map<Portal, int> witness;
};

/// Replaces each edge {u,v} cut at height i by the ancestor path from
/// u's leaf up to its height-i cluster portal, across to v's sibling cluster
/// portal and down to v's leaf.
PortalRespecting make_portal_respecting(const Solution& f, const HierarchicalDecomposition& d);

/// Edges join portals of one cluster, of siblings or of a parent and child,
/// and each endpoint is a portal of its cluster.
bool is_portal_respecting(const PortalGraph& g, const HierarchicalDecomposition& d);

/// Portals of C adjacent to a portal of C's parent or of a sibling of C.
std::vector<Portal> active_portals(const PortalGraph& g, const HierarchicalDecomposition& d, int cluster);

struct Crossing {
  Portal enter;
  Portal leave;
  std::size_t first = 0;  // index range in the circuit, inclusive, cyclic
  std::size_t last = 0;
};

/// Closed walk over all edges of a connected Eulerian portal graph.
std::vector<Portal> portal_circuit(const PortalGraph& g);
/// Maximal runs of the circuit inside C's subtree.
std::vector<Crossing> crossings(const std::vector<Portal>& circuit, const HierarchicalDecomposition& d, int cluster);

/// Rewrites two crossings of one cluster through the same ordered pair into
/// a single crossing, then shortcuts the resulting scratch, until each pair
/// is used at most once. Throws InvalidInput on a non-Eulerian graph.
PortalGraph make_economical(const PortalGraph& g, const HierarchicalDecomposition& d);
bool is_economical(const PortalGraph& g, const HierarchicalDecomposition& d);

/// Keeps one active portal of C when more than r are active: the others lose
/// their outside edges and are tied to the kept one inside C, and the
/// outside endpoints are reconnected by a spanning tree through it. Tours
/// get extra edges to the kept portal to restore even degrees.
PortalGraph patch_cluster(const PortalGraph& g, const HierarchicalDecomposition& d, int cluster, int r,
                          bool tour);
/// Top-down sweep of patch_cluster over every cluster.
PortalGraph make_light(const PortalGraph& g, const HierarchicalDecomposition& d, int m, int r, bool tour);
bool is_light(const PortalGraph& g, const HierarchicalDecomposition& d, int m, int r);

}  // namespace pcx
