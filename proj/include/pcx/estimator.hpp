#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "pcx/instance.hpp"

namespace pcx {

/// Memoized costs c(F^{(i,t)}_u) of the approximate subsolver on balls
/// B(u, t s^i) of one instance.
class HeuristicTable {
 public:
  HeuristicTable(const PcxInstance& inst, const NetTree& tree, double eps_nr);

  /// Cost of the subsolver on the terminals in B(u, t s^i), under the
  /// sub-instance's own cost function.
  double value(int i, PointId u, double t);
  /// The heuristic proper: value(i, u, 4).
  double heuristic(int i, PointId u) { return value(i, u, 4.0); }

  const PcxInstance& instance() const { return inst_; }
  const NetTree& tree() const { return tree_; }
  std::size_t evaluations() const { return memo_.size(); }

 private:
  const PcxInstance& inst_;
  const NetTree& tree_;
  double eps_nr_;
  std::mutex mu_;
  std::map<std::tuple<int, PointId, double>, double> memo_;
};

struct Critical {
  int height = 0;
  PointId center = 0;
  double value = 0;
  friend bool operator==(const Critical&, const Critical&) = default;
};

/// Smallest height i where some u in N_i has h(i,u) > q0 s^i; the u with the
/// largest value there (smallest id on ties).
std::optional<Critical> find_critical(HeuristicTable& table, double q0);

struct LambdaChoice {
  int lambda = 0;
  /// No lambda < k met T(lambda+1) <= 30 k T(lambda); lambda is the argmin
  /// of the ratio instead.
  bool fallback = false;
  std::vector<double> table;  // T(0..k)
};

/// T(lambda) = value(i, u, 4 + 2 lambda).
LambdaChoice choose_lambda(HeuristicTable& table, int i, PointId u);

}  // namespace pcx
