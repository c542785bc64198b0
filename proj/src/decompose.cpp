#include "pcx/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pcx/oracle.hpp"
#include "pcx/primal_dual.hpp"

namespace pcx {

Solution extend(const Solution& f2, const Solution& f1, PointId u) {
  if (!(f1.covers(u) && f2.covers(u))) return f2;
  Solution out = f2;
  out.edges.insert(out.edges.end(), f1.edges.begin(), f1.edges.end());
  out.self_loops.insert(out.self_loops.end(), f1.self_loops.begin(), f1.self_loops.end());
  out.normalize();
  return out;
}

namespace {

PcxInstance sub_instance(const PcxInstance& w, std::vector<PointId> terminals, PointId u, double pi_u) {
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  std::vector<double> pen;
  for (PointId t : terminals) pen.push_back(t == u ? pi_u : w.penalty(t));
  PcxInstance out(w.variant(), w.space_ptr(), terminals, pen, true);
  for (PointId p = 0; p < w.num_points(); ++p)
    if (!w.usable(p)) out.forbid(p);
  // Visiting a left-out terminal of negative penalty would cost the parent
  // instance money that the sub-instance never sees.
  for (PointId t : w.terminals())
    if (w.penalty(t) < 0 && !std::binary_search(terminals.begin(), terminals.end(), t)) out.forbid(t);
  return out;
}

}  // namespace

PcxInstance first_subinstance(const PcxInstance& w, const std::vector<PointId>& ball_terminals, PointId u) {
  std::vector<PointId> t = ball_terminals;
  t.push_back(u);
  return sub_instance(w, t, u, kMustVisit);
}

PcxInstance second_subinstance(const PcxInstance& w, const std::vector<PointId>& ball_terminals, PointId u,
                               double pi2_u) {
  std::vector<PointId> t;
  for (PointId x : w.terminals())
    if (!std::binary_search(ball_terminals.begin(), ball_terminals.end(), x)) t.push_back(x);
  t.push_back(u);
  return sub_instance(w, t, u, pi2_u);
}

namespace {

class Driver {
 public:
  Driver(const PcxInstance& w, const SolveConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    NetOptions no;
    no.s = cfg.s;
    no.top = cfg.top;
    no.allow_small_s = cfg.s < 4;
    tree_ = std::make_shared<const NetTree>(w.space_ptr(), build_nets(w.space(), no));
    const int k = w.space().doubling_dimension();
    const int L = tree_->top();
    q0_ = cfg.q0 > 0 ? cfg.q0 : 10.0 * cfg.s * k / cfg.eps;
    theta_ = cfg.theta_p > 0 ? cfg.theta_p : cfg.eps / (k * std::max(L, 1));
    eps_nr_ = cfg.eps_nr > 0 ? cfg.eps_nr : cfg.eps;
    stats_.step_limit = w.num_points() * std::max(L, 1);
  }

  Solution run(const PcxInstance& w, int depth, std::optional<std::pair<int, PointId>>* first_critical) {
    if (++stats_.steps > stats_.step_limit)
      throw InternalError("recursion exceeded " + std::to_string(stats_.step_limit) + " steps");
    if (static_cast<int>(w.terminals().size()) <= cfg_.base_threshold) {
      if (first_critical) {
        HeuristicTable table(w, *tree_, eps_nr_);
        if (auto c = find_critical(table, q0_)) *first_critical = std::make_pair(c->height, c->center);
      }
      return oracle(w);
    }
    HeuristicTable table(w, *tree_, eps_nr_);
    auto crit = find_critical(table, q0_);
    if (first_critical && crit) *first_critical = std::make_pair(crit->height, crit->center);
    if (!crit) return dp_or_gw(w);

    ++stats_.critical_instances;
    ++stats_.splits;
    const int i = crit->height;
    const PointId u = crit->center;
    SplitRecord rec;
    rec.depth = depth;
    rec.height = i;
    rec.center = u;
    rec.critical_value = crit->value;
    LambdaChoice lc = choose_lambda(table, i, u);
    if (lc.fallback) ++stats_.lambda_fallbacks;
    rec.lambda = lc.lambda;
    rec.lambda_fallback = lc.fallback;
    rec.t_table = lc.table;
    rec.h = std::uniform_real_distribution<double>(0.0, 0.5)(rng_);
    rec.radius = (4.0 + 2.0 * lc.lambda + rec.h) * tree_->nets().scale(i);

    std::vector<PointId> in_ball;
    for (PointId t : w.terminals())
      if (w.space().dist(u, t) <= rec.radius + kTolerance) in_ball.push_back(t);
    PcxInstance w1 = first_subinstance(w, in_ball, u);
    rec.w1_terminals = w1.terminals();
    Solution f1 = solve_first(w1, rec.f1_solver);
    if (!f1.covers(u)) throw InternalError("first sub-instance solution misses its centre");
    rec.c1 = cost(w1, f1);

    double pi_ball = 0;
    for (PointId t : in_ball) pi_ball += w.penalty(t);
    rec.pi2_u = pi_ball - rec.c1;
    PcxInstance w2 = second_subinstance(w, in_ball, u, rec.pi2_u);
    rec.w2_terminals = w2.terminals();

    Solution f2 = run(w2, depth + 1, &rec.next_critical);
    rec.c2 = cost(w2, f2);
    rec.f2_covers_u = f2.covers(u);
    Solution f = extend(f2, f1, u);
    rec.extended_cost = cost(w, f);
    trace_.push_back(rec);
    return f;
  }

  const SolveStats& stats() const { return stats_; }
  std::vector<SplitRecord>& trace() { return trace_; }

 private:
  Solution oracle(const PcxInstance& w) {
    ++stats_.oracle_calls;
    OracleLimits lim;
    lim.max_tree_points = std::max(lim.max_tree_points, w.num_points());
    return exact_solve(w, lim).solution;
  }

  Solution gw(const PcxInstance& w) {
    ++stats_.gw_calls;
    return gw_solve(w);
  }

  Solution dp_or_gw(const PcxInstance& w, bool* used_dp = nullptr) {
    ++stats_.dp_calls;
    DecompOptions dopt;
    dopt.chi_base = cfg_.chi_base;
    dopt.theta_p = theta_;
    std::optional<DpResult> best;
    for (int rep = 0; rep < std::max(cfg_.repetitions, 1); ++rep) {
      HierarchicalDecomposition d(tree_, dopt, rng_());
      try {
        DpResult r = dp_solve(w, d, cfg_.dp);
        stats_.dp_entries += r.stats.entries;
        if (!best || r.value < best->value) best = std::move(r);
      } catch (const BudgetExceeded&) {
        ++stats_.budget_events;
      }
    }
    if (used_dp) *used_dp = best.has_value();
    if (!best) return gw(w);
    return best->solution;
  }

  Solution solve_first(const PcxInstance& w1, std::string& solver) {
    if (static_cast<int>(w1.terminals().size()) <= cfg_.base_threshold) {
      solver = "oracle";
      return oracle(w1);
    }
    HeuristicTable table(w1, *tree_, eps_nr_);
    if (!find_critical(table, q0_)) {
      bool used_dp = false;
      Solution f = dp_or_gw(w1, &used_dp);
      solver = used_dp ? "dp" : "gw";
      return f;
    }
    solver = "gw";
    return gw(w1);
  }

  SolveConfig cfg_;
  std::mt19937_64 rng_;
  TreePtr tree_;
  double q0_ = 0, theta_ = 0, eps_nr_ = 0;
  SolveStats stats_;
  std::vector<SplitRecord> trace_;
};

}  // namespace

SolveResult solve(const PcxInstance& w, const SolveConfig& config) {
  if (!(config.eps > 0 && config.eps < 1)) throw InvalidInput("eps must lie in (0,1)");
  // Work on a copy whose smallest distance is 1 so heights start at the
  // finest scale; point ids are unchanged.
  const double dmin = w.space().min_positive_distance();
  const double factor = dmin > 0 ? 1.0 / dmin : 1.0;
  auto space = std::make_shared<const MetricSpace>(w.space().scaled(factor));
  std::vector<double> pen;
  for (PointId t : w.terminals()) pen.push_back(w.penalty(t) * factor);
  PcxInstance norm(w.variant(), space, w.terminals(), pen, true);
  for (PointId p = 0; p < w.num_points(); ++p)
    if (!w.usable(p)) norm.forbid(p);

  Driver driver(norm, config);
  SolveResult res;
  res.solution = driver.run(norm, 0, nullptr);
  res.solution.normalize();
  res.cost = cost(w, res.solution);
  res.trace = std::move(driver.trace());
  std::reverse(res.trace.begin(), res.trace.end());  // outermost split first
  res.stats = driver.stats();
  auto report = validate(w, res.solution);
  if (!report.ok) throw InternalError("pipeline produced an invalid solution: " + report.message);
  return res;
}

namespace {

void add_stats(SolveStats& into, const SolveStats& s) {
  into.steps += s.steps;
  into.step_limit = std::max(into.step_limit, s.step_limit);
  into.splits += s.splits;
  into.oracle_calls += s.oracle_calls;
  into.dp_calls += s.dp_calls;
  into.gw_calls += s.gw_calls;
  into.budget_events += s.budget_events;
  into.critical_instances += s.critical_instances;
  into.lambda_fallbacks += s.lambda_fallbacks;
  into.dp_entries += s.dp_entries;
}

// Carries a solution on the rescaled points back to the original points and
// reattaches terminals that were snapped onto a visited point when their
// penalty outweighs the detour.
Solution lift(const PcxInstance& inst, const RescaledSpace& rs, const Solution& f) {
  Solution out;
  for (const Edge& e : f.edges) out.edges.emplace_back(rs.representative[e.a], rs.representative[e.b]);
  for (PointId p : f.self_loops) out.self_loops.push_back(rs.representative[p]);
  const bool tour = inst.variant() == Variant::kPctsp;
  const auto visited = f.vertices();
  for (PointId t : inst.terminals()) {
    PointId p = rs.snapped_to[t];
    if (p < 0 || rs.representative[p] == t) continue;
    if (!std::binary_search(visited.begin(), visited.end(), p)) continue;
    const PointId r = rs.representative[p];
    const double d = inst.space().dist(r, t);
    if (d <= 0 || inst.penalty(t) <= (tour ? 2 * d : d)) continue;
    out.edges.emplace_back(r, t);
    if (tour) out.edges.emplace_back(r, t);
  }
  out.normalize();
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PcxInstance& inst, const PipelineConfig& config) {
  PipelineResult res;
  res.gw_solution = gw_solve(inst);
  res.gw_cost = cost(inst, res.gw_solution);

  // Trivial candidates: nothing, or one visited terminal.
  res.solution = Solution{};
  res.cost = cost(inst, res.solution);
  for (PointId t : inst.terminals()) {
    if (!inst.usable(t)) continue;
    double c = cost(inst, Solution::self_loop(t));
    if (c < res.cost) {
      res.cost = c;
      res.solution = Solution::self_loop(t);
    }
  }

  const auto& T = inst.terminals();
  std::vector<std::pair<PointId, PointId>> guesses;
  for (std::size_t a = 0; a < T.size(); ++a)
    for (std::size_t b = a + 1; b < T.size(); ++b)
      if (inst.space().dist(T[a], T[b]) > 0) guesses.push_back({T[a], T[b]});
  const std::size_t cap = config.max_guesses > 0 ? static_cast<std::size_t>(config.max_guesses)
                                                 : (T.size() <= 12 ? guesses.size() : 32);
  if (guesses.size() > cap) {
    std::mt19937_64 rng(config.solve.seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(guesses.begin(), guesses.end(), rng);
    guesses.resize(cap);
    std::sort(guesses.begin(), guesses.end());
  }

  const int n = static_cast<int>(T.size());
  std::map<std::vector<PointId>, double> seen;  // identical rescaled instances
  for (auto [u, v] : guesses) {
    RescaledSpace rs = rescale(inst.space(), u, v, config.solve.eps, n);
    GuessOutcome g{u, v, 0, false};
    // Terminals outside the kept region pay their penalties.
    std::map<PointId, double> merged;
    bool feasible = true;
    for (PointId t : T) {
      PointId p = rs.snapped_to[t];
      if (p < 0) {
        if (std::isinf(inst.penalty(t))) feasible = false;
        continue;
      }
      merged[p] += inst.penalty(t) * rs.scale;
    }
    if (!feasible) continue;
    std::vector<PointId> key = rs.representative;
    key.push_back(-1);
    key.insert(key.end(), rs.snapped_to.begin(), rs.snapped_to.end());
    if (auto it = seen.find(key); it != seen.end()) {
      g.cost = it->second;
      g.cached = true;
      res.guesses.push_back(g);
      continue;
    }
    std::vector<PointId> nt;
    std::vector<double> np;
    for (auto [p, pen] : merged) {
      nt.push_back(p);
      np.push_back(pen);
    }
    auto space = std::make_shared<const MetricSpace>(rs.space);
    PcxInstance sub(inst.variant(), space, nt, np, true);
    for (PointId p = 0; p < space->size(); ++p)
      if (!inst.usable(rs.representative[p])) sub.forbid(p);
    SolveResult sr = solve(sub, config.solve);
    Solution lifted = lift(inst, rs, sr.solution);
    g.cost = cost(inst, lifted);
    g.steps = sr.stats.steps;
    g.step_limit = sr.stats.step_limit;
    seen.emplace(key, g.cost);
    res.guesses.push_back(g);
    add_stats(res.stats, sr.stats);
    for (auto& rec : sr.trace) {
      // Report split centres in original point ids.
      rec.center = rs.representative[rec.center];
      for (auto& t : rec.w1_terminals) t = rs.representative[t];
      for (auto& t : rec.w2_terminals) t = rs.representative[t];
      if (rec.next_critical) rec.next_critical->second = rs.representative[rec.next_critical->second];
      res.trace.push_back(std::move(rec));
    }
    if (g.cost < res.cost - kTolerance) {
      res.cost = g.cost;
      res.solution = std::move(lifted);
    }
  }
  auto report = validate(inst, res.solution);
  if (!report.ok) throw InternalError("pipeline produced an invalid solution: " + report.message);
  return res;
}

}  // namespace pcx
