#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pcx/dp.hpp"
#include "pcx/estimator.hpp"

namespace pcx {

struct SolveConfig {
  double eps = 0.5;
  double s = 4.0;
  /// Top height of the net tree; 0 picks it from the diameter.
  int top = 0;
  /// Critical threshold; 0 means 10 s k / eps.
  double q0 = 0;
  /// Portal granularity; 0 means eps / (k L).
  double theta_p = 0;
  double chi_base = 2.0;
  /// Net-respecting precision of the subsolver; 0 means eps.
  double eps_nr = 0;
  /// At most this many terminals go to the exact oracle.
  int base_threshold = 3;
  /// Independent decompositions tried per dynamic-program call.
  int repetitions = 1;
  DpOptions dp;
  std::uint64_t seed = 1;
};

struct SplitRecord {
  int depth = 0;
  int height = 0;
  PointId center = 0;
  double critical_value = 0;
  int lambda = 0;
  bool lambda_fallback = false;
  std::vector<double> t_table;
  double h = 0;
  double radius = 0;
  std::vector<PointId> w1_terminals;
  std::vector<PointId> w2_terminals;
  std::string f1_solver;  // oracle, dp or gw
  double c1 = 0;
  double pi2_u = 0;
  double c2 = 0;
  double extended_cost = 0;  // cost(W, extend(F2, F1, u))
  bool f2_covers_u = false;
  /// First critical pair of W2, if any.
  std::optional<std::pair<int, PointId>> next_critical;
};

struct SolveStats {
  int steps = 0;
  int step_limit = 0;
  int splits = 0;
  int oracle_calls = 0;
  int dp_calls = 0;
  int gw_calls = 0;
  int budget_events = 0;
  int critical_instances = 0;
  int lambda_fallbacks = 0;
  std::size_t dp_entries = 0;
};

struct SolveResult {
  Solution solution;
  double cost = 0;
  std::vector<SplitRecord> trace;
  SolveStats stats;
};

/// F2 ∪ F1 when both visit u, otherwise F2.
Solution extend(const Solution& f2, const Solution& f1, PointId u);

/// Sub-instance W1 of a split: the terminals in the ball plus u, u must be
/// visited, and negative-penalty terminals left out become unusable.
PcxInstance first_subinstance(const PcxInstance& w, const std::vector<PointId>& ball_terminals, PointId u);
/// Sub-instance W2: the terminals outside the ball plus u with penalty
/// pi2_u; left-out negative-penalty terminals become unusable.
PcxInstance second_subinstance(const PcxInstance& w, const std::vector<PointId>& ball_terminals, PointId u,
                               double pi2_u);

/// The generic divide-and-conquer algorithm on one instance.
SolveResult solve(const PcxInstance& w, const SolveConfig& config);

struct PipelineConfig {
  SolveConfig solve;
  /// Rescaling guesses (u, v); 0 means every pair for up to 12 terminals and
  /// 32 sampled pairs beyond.
  int max_guesses = 0;
};

struct GuessOutcome {
  PointId u = -1;
  PointId v = -1;
  double cost = 0;
  bool cached = false;
  /// Recursion steps of this guess's solve against its limit |X| L.
  int steps = 0;
  int step_limit = 0;
};

struct PipelineResult {
  Solution solution;
  double cost = 0;
  Solution gw_solution;
  double gw_cost = 0;
  std::vector<GuessOutcome> guesses;
  /// Split records of every distinct guess solved, in guess order.
  std::vector<SplitRecord> trace;
  SolveStats stats;
};

/// Rescales under each guess, solves, lifts back to the original points and
/// keeps the cheapest; trivial solutions (empty, one self-loop) compete too.
PipelineResult run_pipeline(const PcxInstance& inst, const PipelineConfig& config);

}  // namespace pcx
