#include "pcx/estimator.hpp"

#include <limits>

#include "pcx/primal_dual.hpp"

namespace pcx {

HeuristicTable::HeuristicTable(const PcxInstance& inst, const NetTree& tree, double eps_nr)
    : inst_(inst), tree_(tree), eps_nr_(eps_nr) {}

double HeuristicTable::value(int i, PointId u, double t) {
  const auto key = std::make_tuple(i, u, t);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  PcxInstance sub = ball_instance(inst_, u, t * tree_.nets().scale(i));
  double v = sub.terminals().empty() ? 0.0 : cost(sub, approx_subsolver(inst_, tree_, i, u, t, eps_nr_));
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.emplace(key, v).first->second;
}

std::optional<Critical> find_critical(HeuristicTable& table, double q0) {
  const auto& nets = table.tree().nets();
  for (int i = 0; i <= nets.top; ++i) {
    const double bound = q0 * nets.scale(i);
    std::optional<Critical> best;
    for (PointId u : nets.level(i)) {
      if (!table.instance().usable(u)) continue;  // cannot anchor a must-visit sub-instance
      double h = table.heuristic(i, u);
      if (h > bound && (!best || h > best->value)) best = Critical{i, u, h};
    }
    if (best) return best;
  }
  return std::nullopt;
}

LambdaChoice choose_lambda(HeuristicTable& table, int i, PointId u) {
  const int k = table.instance().space().doubling_dimension();
  LambdaChoice out;
  for (int l = 0; l <= k; ++l) out.table.push_back(table.value(i, u, 4.0 + 2.0 * l));
  for (int l = 0; l < k; ++l)
    if (out.table[l + 1] <= 30.0 * k * out.table[l] + kTolerance) {
      out.lambda = l;
      return out;
    }
  out.fallback = true;
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < k; ++l) {
    double ratio = out.table[l] > 0 ? out.table[l + 1] / out.table[l] : std::numeric_limits<double>::infinity();
    if (ratio < best) {
      best = ratio;
      out.lambda = l;
    }
  }
  return out;
}

}  // namespace pcx
