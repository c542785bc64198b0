#pragma once

#include "pcx/instance.hpp"

namespace pcx {

struct ExactResult {
  double cost = 0;
  Solution solution;
};

struct OracleLimits {
  int max_tour_terminals = 15;
  int max_tree_terminals = 10;
  int max_tree_points = 15;
};

/// Held–Karp over every terminal subset plus the penalties of the rest.
/// Steiner points never shorten a metric tour, so only terminals are routed.
ExactResult exact_pctsp(const PcxInstance& inst, const OracleLimits& limits = {});

/// Dreyfus–Wagner over every terminal subset with all usable points as
/// Steiner candidates.
ExactResult exact_pcstp(const PcxInstance& inst, const OracleLimits& limits = {});

ExactResult exact_solve(const PcxInstance& inst, const OracleLimits& limits = {});

}  // namespace pcx
