#pragma once

#include <string>

#include "pcx/decompose.hpp"
#include "pcx/dp.hpp"
#include "pcx/hierdecomp.hpp"
#include "pcx/instance.hpp"

namespace pcx {

/// Instance JSON: {"variant", "points": [[x, y], ...] or {"matrix": [[...]]},
/// "terminals", "penalties", "k"}. A penalty of null means must-visit. A
/// top-level "matrix" is accepted in place of "points"; "k" defaults to the
/// coordinate dimension (1 for matrices). Throws InvalidInput.
PcxInstance parse_instance(const std::string& text);
std::string format_instance(const PcxInstance& inst);

PcxInstance load_instance(const std::string& path);
void save_instance(const PcxInstance& inst, const std::string& path);

/// {"edges": [[i, j], ...], "self_loops": [...], "cost": c}; a cost of null
/// stands for an infinite cost.
std::string format_solution(const Solution& f, double cost);
Solution parse_solution(const std::string& text);

/// One JSON object on a single line.
std::string format_split_record(const SplitRecord& rec);
SplitRecord parse_split_record(const std::string& line);

/// Seed, options and the cluster tree, enough to replay a decomposition.
std::string format_decomposition(const HierarchicalDecomposition& d);

std::string format_dp_stats(const DpStats& stats, int budget_events);

}  // namespace pcx
