#include "pcx/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RootedResult {
  Solution tree;
  std::vector<Moat> moats;
};

// Growth and pruning for one root over the points in `nodes`.
RootedResult grow_and_prune(const MetricSpace& sp, const std::vector<PointId>& nodes, const std::vector<double>& pen,
                            PointId root) {
  const int n = static_cast<int>(nodes.size());
  struct Comp {
    std::vector<int> members;  // indices into nodes
    double potential = 0;
    bool active = false;
    bool has_root = false;
    int moat = -1;
  };
  std::vector<Comp> comps;
  std::vector<int> comp_of(static_cast<std::size_t>(n));
  std::vector<double> load(static_cast<std::size_t>(n), 0.0);
  std::vector<Moat> moats;
  std::vector<std::pair<int, int>> forest;

  for (int i = 0; i < n; ++i) {
    Comp c;
    c.members = {i};
    c.potential = pen[nodes[i]];
    c.has_root = nodes[i] == root;
    c.active = !c.has_root && c.potential > 0;
    c.moat = static_cast<int>(moats.size());
    moats.push_back({{nodes[i]}, 0.0, false});
    if (!c.active && !c.has_root) moats.back().deactivated = true;
    comp_of[i] = static_cast<int>(comps.size());
    comps.push_back(std::move(c));
  }
  std::vector<char> alive(comps.size(), 1);

  for (;;) {
    double best_t = kInf;
    int ev_a = -1, ev_b = -1, ev_comp = -1;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!alive[c] || !comps[c].active) continue;
      if (comps[c].potential < best_t) {
        best_t = comps[c].potential;
        ev_comp = static_cast<int>(c);
        ev_a = ev_b = -1;
      }
    }
    for (int a = 0; a < n; ++a) {
      const Comp& ca = comps[comp_of[a]];
      for (int b = a + 1; b < n; ++b) {
        if (comp_of[a] == comp_of[b]) continue;
        const Comp& cb = comps[comp_of[b]];
        int rate = (ca.active ? 1 : 0) + (cb.active ? 1 : 0);
        if (rate == 0) continue;
        double slack = std::max(0.0, sp.dist(nodes[a], nodes[b]) - load[a] - load[b]);
        double t = slack / rate;
        if (t < best_t) {
          best_t = t;
          ev_a = a;
          ev_b = b;
          ev_comp = -1;
        }
      }
    }
    if (best_t == kInf) break;

    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!alive[c] || !comps[c].active) continue;
      comps[c].potential -= best_t;
      moats[comps[c].moat].y += best_t;
      for (int m : comps[c].members) load[m] += best_t;
    }

    if (ev_comp >= 0) {
      comps[ev_comp].active = false;
      comps[ev_comp].potential = 0;
      moats[comps[ev_comp].moat].deactivated = true;
      continue;
    }
    int x = comp_of[ev_a], y = comp_of[ev_b];
    forest.push_back({ev_a, ev_b});
    Comp merged;
    merged.members = comps[x].members;
    merged.members.insert(merged.members.end(), comps[y].members.begin(), comps[y].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    merged.potential = std::max(0.0, comps[x].potential) + std::max(0.0, comps[y].potential);
    merged.has_root = comps[x].has_root || comps[y].has_root;
    merged.active = !merged.has_root && merged.potential > 0;
    merged.moat = static_cast<int>(moats.size());
    Moat mo;
    for (int m : merged.members) mo.members.push_back(nodes[m]);
    mo.deactivated = !merged.active && !merged.has_root;
    moats.push_back(std::move(mo));
    alive[x] = alive[y] = 0;
    int id = static_cast<int>(comps.size());
    for (int m : merged.members) comp_of[m] = id;
    comps.push_back(std::move(merged));
    alive.push_back(1);
  }

  // Keep the root's tree, then strip deactivated moats that hang on by one
  // edge until none is left.
  std::vector<char> keep(static_cast<std::size_t>(n), 0);
  int root_idx = static_cast<int>(std::find(nodes.begin(), nodes.end(), root) - nodes.begin());
  {
    std::vector<int> stack{root_idx};
    keep[root_idx] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [a, b] : forest) {
        int w = a == v ? b : (b == v ? a : -1);
        if (w >= 0 && !keep[w]) {
          keep[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<char> in_node(static_cast<std::size_t>(sp.size()), 0);
  std::vector<int> idx_of(static_cast<std::size_t>(sp.size()), -1);
  for (int i = 0; i < n; ++i) idx_of[nodes[i]] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Moat& mo : moats) {
      if (!mo.deactivated) continue;
      for (PointId p : mo.members) in_node[p] = 1;
      int crossing = 0;
      bool any_kept = false;
      for (PointId p : mo.members) any_kept = any_kept || keep[idx_of[p]];
      if (any_kept) {
        for (auto [a, b] : forest)
          if (keep[a] && keep[b] && (in_node[nodes[a]] != in_node[nodes[b]])) ++crossing;
        if (crossing == 1) {
          for (PointId p : mo.members) keep[idx_of[p]] = 0;
          changed = true;
        }
      }
      for (PointId p : mo.members) in_node[p] = 0;
    }
  }

  RootedResult out;
  for (auto [a, b] : forest)
    if (keep[a] && keep[b]) out.tree.edges.emplace_back(nodes[a], nodes[b]);
  if (out.tree.edges.empty()) out.tree.self_loops.push_back(root);
  out.tree.normalize();
  out.moats = std::move(moats);
  return out;
}

Solution tour_from_tree(const PcxInstance& inst, const Solution& tree, PointId root) {
  if (tree.edges.empty()) return tree;
  Solution doubled;
  for (const Edge& e : tree.edges) {
    doubled.edges.push_back(e);
    doubled.edges.push_back(e);
  }
  std::vector<PointId> walk;
  for (PointId p : euler_circuit(doubled))
    if (p == root || (inst.is_terminal(p) && inst.penalty(p) > 0)) walk.push_back(p);
  return shortcut_to_cycle(walk);
}

}  // namespace

Solution gw_solve(const PcxInstance& inst, GwTrace* trace) {
  const auto& sp = inst.space();
  Solution best;
  double best_cost = cost(inst, best);
  if (inst.terminals().empty()) return best;

  double big = 1;
  for (PointId a = 0; a < sp.size(); ++a)
    for (PointId b = a + 1; b < sp.size(); ++b) big += 2 * sp.dist(a, b);
  const bool tour = inst.variant() == Variant::kPctsp;
  std::vector<double> pen(static_cast<std::size_t>(sp.size()), 0.0);
  for (PointId t : inst.terminals()) {
    double p = inst.penalty(t);
    if (p == kMustVisit) p = big;
    p = std::max(p, 0.0);
    pen[t] = tour ? p / 2 : p;
  }
  std::vector<PointId> nodes;
  for (PointId p = 0; p < sp.size(); ++p)
    if (inst.usable(p)) nodes.push_back(p);

  if (trace) {
    trace->root = -1;
    trace->growth_penalty = pen;
    trace->moats.clear();
  }
  for (PointId root : inst.terminals()) {
    if (!inst.usable(root)) continue;
    RootedResult r = grow_and_prune(sp, nodes, pen, root);
    Solution cand = tour ? tour_from_tree(inst, r.tree, root) : r.tree;
    double c = cost(inst, cand);
    const bool better = c < best_cost - kTolerance;
    if (better) {
      best_cost = c;
      best = std::move(cand);
    }
    if (trace && (better || trace->root < 0)) {
      {
        trace->root = root;
        trace->moats = std::move(r.moats);
      }
    }
  }
  return best;
}

PcxInstance ball_instance(const PcxInstance& inst, PointId u, double radius) {
  std::vector<PointId> keep;
  for (PointId t : inst.terminals())
    if (inst.space().dist(u, t) <= radius + kTolerance) keep.push_back(t);
  return inst.with_terminals(keep);
}

Solution approx_subsolver(const PcxInstance& inst, const NetTree& tree, int i, PointId u, double t, double eps_nr) {
  PcxInstance sub = ball_instance(inst, u, t * tree.nets().scale(i));
  return make_net_respecting(gw_solve(sub), tree, eps_nr);
}

}  // namespace pcx
