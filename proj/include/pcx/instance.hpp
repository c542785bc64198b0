#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pcx/metric.hpp"

namespace pcx {

enum class Variant { kPctsp, kPcstp };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// Penalty value forcing a terminal to be visited.
inline constexpr double kMustVisit = std::numeric_limits<double>::infinity();

/// Terminals with penalties over a shared metric space.
///
/// User-facing instances carry penalties that are non-negative or kMustVisit.
/// Instances built by the decomposition driver are flagged internal and may
/// carry finite negative penalties; they may also mark points as unusable so
/// that a solver never routes through them.
class PcxInstance {
 public:
  PcxInstance(Variant variant, SpacePtr space, std::vector<PointId> terminals, std::vector<double> penalties,
              bool internal = false);

  Variant variant() const { return variant_; }
  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int num_points() const { return space_->size(); }

  /// Sorted ascending.
  const std::vector<PointId>& terminals() const { return terminals_; }
  bool is_terminal(PointId p) const { return terminal_[p] != 0; }
  /// Zero for non-terminals.
  double penalty(PointId p) const { return penalty_[p]; }
  bool internal() const { return internal_; }

  bool usable(PointId p) const { return forbidden_.empty() || forbidden_[p] == 0; }
  void forbid(PointId p);

  /// Same space, variant and flags, keeping only the listed terminals.
  PcxInstance with_terminals(const std::vector<PointId>& keep) const;

  double total_penalty() const;
  double penalty_sum(const std::vector<PointId>& points) const;

 private:
  Variant variant_;
  SpacePtr space_;
  std::vector<PointId> terminals_;
  std::vector<char> terminal_;
  std::vector<double> penalty_;
  std::vector<char> forbidden_;
  bool internal_;
};

struct Edge {
  PointId a = 0;
  PointId b = 0;
  Edge() = default;
  Edge(PointId x, PointId y) : a(x < y ? x : y), b(x < y ? y : x) {}
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge multiset plus self-loops. A self-loop {x} weighs nothing and only
/// contributes x to the visited set.
struct Solution {
  std::vector<Edge> edges;
  std::vector<PointId> self_loops;

  static Solution self_loop(PointId p) { return Solution{{}, {p}}; }

  bool empty() const { return edges.empty() && self_loops.empty(); }
  /// Sorted, unique.
  std::vector<PointId> vertices() const;
  bool covers(PointId p) const;
  double weight(const MetricSpace& space) const;
  /// Sorts edges, drops duplicate loops and loops on vertices that have edges.
  void normalize();
  friend bool operator==(const Solution&, const Solution&) = default;
};

/// w(F) + penalties of uncovered terminals; +inf when a must-visit terminal is
/// left out.
double cost(const PcxInstance& inst, const Solution& f);

struct ValidationReport {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

ValidationReport validate(const PcxInstance& inst, const Solution& f);

/// Multigraph helpers shared by the solvers.
bool is_connected(const Solution& f);
bool all_degrees_even(const Solution& f);
/// Closed walk using every edge once (Hierholzer), as a vertex sequence
/// without the repeated start. Requires a connected even multigraph.
std::vector<PointId> euler_circuit(const Solution& f);
/// Shortcuts a closed walk to a simple cycle on its distinct vertices.
Solution shortcut_to_cycle(const std::vector<PointId>& walk);

/// Rewrites each edge {x,y} whose endpoints are not both in N_i (with
/// s^i <= eps_nr d(x,y) < s^{i+1}) into the path x, x', y', y through the
/// nearest N_i points. Repeats on the new edges until every edge conforms.
Solution make_net_respecting(const Solution& f, const NetTree& tree, double eps_nr);
bool is_net_respecting(const Solution& f, const NetTree& tree, double eps_nr);

}  // namespace pcx
