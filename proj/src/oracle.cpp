#include "pcx/oracle.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <limits>

namespace pcx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double complement_penalty(const PcxInstance& inst, unsigned mask) {
  const auto& T = inst.terminals();
  double p = 0;
  for (std::size_t i = 0; i < T.size(); ++i)
    if (!(mask >> i & 1u)) p += inst.penalty(T[i]);
  return p;
}

}  // namespace

ExactResult exact_pctsp(const PcxInstance& inst, const OracleLimits& limits) {
  const auto& T = inst.terminals();
  const int t = static_cast<int>(T.size());
  if (t > limits.max_tour_terminals)
    throw SizeGuard("exact tour oracle limited to " + std::to_string(limits.max_tour_terminals) + " terminals");
  const auto& sp = inst.space();
  const unsigned full = 1u << t;

  // path[mask][j]: shortest path from the lowest terminal of mask to j
  // through all of mask.
  std::vector<double> path(static_cast<std::size_t>(full) * std::max(t, 1), kInf);
  std::vector<signed char> prev(path.size(), -1);
  auto at = [t](unsigned mask, int j) { return static_cast<std::size_t>(mask) * t + j; };
  for (int j = 0; j < t; ++j) path[at(1u << j, j)] = 0;
  for (unsigned mask = 1; mask < full; ++mask) {
    const int start = std::countr_zero(mask);
    for (int j = 0; j < t; ++j) {
      double cur = path[at(mask, j)];
      if (!(mask >> j & 1u) || cur == kInf) continue;
      for (int k = start + 1; k < t; ++k) {
        if (mask >> k & 1u) continue;
        double cand = cur + sp.dist(T[j], T[k]);
        std::size_t idx = at(mask | 1u << k, k);
        if (cand < path[idx]) {
          path[idx] = cand;
          prev[idx] = static_cast<signed char>(j);
        }
      }
    }
  }

  ExactResult best{kInf, {}};
  unsigned best_mask = 0;
  int best_end = -1;
  for (unsigned mask = 0; mask < full; ++mask) {
    double pen = complement_penalty(inst, mask);
    if (pen == kInf) continue;
    double tour = 0;
    int end = -1;
    if (std::popcount(mask) >= 2) {
      const int start = std::countr_zero(mask);
      tour = kInf;
      for (int j = 0; j < t; ++j) {
        if (!(mask >> j & 1u) || j == start) continue;
        double c = path[at(mask, j)] + sp.dist(T[j], T[start]);
        if (c < tour) {
          tour = c;
          end = j;
        }
      }
    }
    if (tour + pen < best.cost) {
      best.cost = tour + pen;
      best_mask = mask;
      best_end = end;
    }
  }
  if (best.cost == kInf) throw InvalidInput("instance has no finite-cost solution");

  if (std::popcount(best_mask) == 1) {
    best.solution = Solution::self_loop(T[std::countr_zero(best_mask)]);
  } else if (best_mask != 0) {
    std::vector<PointId> order;
    unsigned mask = best_mask;
    int j = best_end;
    while (j >= 0) {
      order.push_back(T[j]);
      int p = prev[at(mask, j)];
      mask &= ~(1u << j);
      j = p;
    }
    best.solution = shortcut_to_cycle(order);
  }
  best.cost = cost(inst, best.solution);
  return best;
}

namespace {

// Dreyfus–Wagner over the terminals listed in `terms`, Steiner candidates
// restricted to `allowed`. tree[S] is the minimum Steiner tree weight for S.
struct SteinerTable {
  int t = 0;
  int n = 0;
  std::vector<double> dp;     // dp[S * n + v]
  std::vector<int> choice;    // >= 0: split submask; < 0: -(u+1) edge from u
  double& at(unsigned S, int v) { return dp[static_cast<std::size_t>(S) * n + v]; }
};

SteinerTable dreyfus_wagner(const MetricSpace& sp, const std::vector<PointId>& terms, const std::vector<char>& allowed) {
  SteinerTable tab;
  tab.t = static_cast<int>(terms.size());
  tab.n = sp.size();
  const unsigned full = 1u << tab.t;
  tab.dp.assign(static_cast<std::size_t>(full) * tab.n, kInf);
  tab.choice.assign(tab.dp.size(), 0);
  for (int i = 0; i < tab.t; ++i)
    for (int v = 0; v < tab.n; ++v) {
      if (!allowed[v]) continue;
      tab.at(1u << i, v) = sp.dist(terms[i], v);
      tab.choice[static_cast<std::size_t>(1u << i) * tab.n + v] = v == terms[i] ? 0 : -(terms[i] + 1);
    }
  for (unsigned S = 1; S < full; ++S) {
    if (std::popcount(S) < 2) continue;
    std::vector<double> merged(static_cast<std::size_t>(tab.n), kInf);
    std::vector<int> split(static_cast<std::size_t>(tab.n), 0);
    const unsigned low = S & (~S + 1);
    for (int v = 0; v < tab.n; ++v) {
      if (!allowed[v]) continue;
      for (unsigned A = (S - 1) & S; A > 0; A = (A - 1) & S) {
        if (!(A & low)) continue;  // each unordered split once
        double c = tab.at(A, v) + tab.at(S ^ A, v);
        if (c < merged[v]) {
          merged[v] = c;
          split[v] = static_cast<int>(A);
        }
      }
    }
    for (int v = 0; v < tab.n; ++v) {
      if (!allowed[v]) continue;
      double best = merged[v];
      int ch = split[v];
      for (int u = 0; u < tab.n; ++u) {
        if (!allowed[u] || u == v) continue;
        double c = merged[u] + sp.dist(u, v);
        if (c < best) {
          best = c;
          ch = -(u + 1);
        }
      }
      tab.at(S, v) = best;
      tab.choice[static_cast<std::size_t>(S) * tab.n + v] = ch;
    }
  }
  return tab;
}

void rebuild(SteinerTable& tab, const std::vector<PointId>& terms, unsigned S, int v, Solution& out) {
  int ch = tab.choice[static_cast<std::size_t>(S) * tab.n + v];
  if (std::popcount(S) == 1) {
    PointId t = terms[std::countr_zero(S)];
    if (t != v) out.edges.emplace_back(t, v);
    else out.self_loops.push_back(v);
    return;
  }
  if (ch < 0) {
    int u = -ch - 1;
    out.edges.emplace_back(u, v);
    // u holds the merged value, so split there.
    int sub = 0;
    double best = kInf;
    const unsigned low = S & (~S + 1);
    for (unsigned A = (S - 1) & S; A > 0; A = (A - 1) & S) {
      if (!(A & low)) continue;
      double c = tab.at(A, u) + tab.at(S ^ A, u);
      if (c < best) {
        best = c;
        sub = static_cast<int>(A);
      }
    }
    rebuild(tab, terms, static_cast<unsigned>(sub), u, out);
    rebuild(tab, terms, S ^ static_cast<unsigned>(sub), u, out);
    return;
  }
  rebuild(tab, terms, static_cast<unsigned>(ch), v, out);
  rebuild(tab, terms, S ^ static_cast<unsigned>(ch), v, out);
}

}  // namespace

ExactResult exact_pcstp(const PcxInstance& inst, const OracleLimits& limits) {
  const auto& T = inst.terminals();
  const int t = static_cast<int>(T.size());
  if (t > limits.max_tree_terminals)
    throw SizeGuard("exact tree oracle limited to " + std::to_string(limits.max_tree_terminals) + " terminals");
  if (inst.num_points() > limits.max_tree_points)
    throw SizeGuard("exact tree oracle limited to " + std::to_string(limits.max_tree_points) + " points");
  const auto& sp = inst.space();

  // A Steiner point that is a negative-penalty terminal outside S would make
  // the tree cost more than its DP value, so such terminals are only allowed
  // when they are part of S.
  std::vector<int> negative;
  for (int i = 0; i < t; ++i)
    if (inst.penalty(T[i]) < 0) negative.push_back(i);
  if (negative.size() > 4) throw SizeGuard("too many negative penalties for the exact tree oracle");

  ExactResult best{kInf, {}};
  const unsigned full = 1u << t;
  for (unsigned q = 0; q < (1u << negative.size()); ++q) {
    unsigned required = 0, excluded = 0;
    std::vector<char> allowed(static_cast<std::size_t>(sp.size()), 0);
    for (PointId p = 0; p < sp.size(); ++p) allowed[p] = inst.usable(p);
    for (std::size_t b = 0; b < negative.size(); ++b) {
      if (q >> b & 1u) {
        required |= 1u << negative[b];
      } else {
        excluded |= 1u << negative[b];
        allowed[T[negative[b]]] = 0;
      }
    }
    for (int i = 0; i < t; ++i)
      if (!allowed[T[i]] && !(excluded >> i & 1u)) excluded |= 1u << i;  // unusable terminal
    SteinerTable tab = dreyfus_wagner(sp, T, allowed);
    for (unsigned S = 0; S < full; ++S) {
      if ((S & required) != required || (S & excluded)) continue;
      double pen = complement_penalty(inst, S);
      if (pen == kInf) continue;
      double tree = 0;
      int root = -1;
      if (S != 0) {
        root = T[std::countr_zero(S)];
        tree = tab.at(S, root);
      }
      if (tree + pen < best.cost) {
        Solution sol;
        if (S != 0) rebuild(tab, T, S, root, sol);
        sol.normalize();
        best.cost = tree + pen;
        best.solution = std::move(sol);
      }
    }
  }
  if (best.cost == kInf) throw InvalidInput("instance has no finite-cost solution");
  best.cost = cost(inst, best.solution);
  return best;
}

ExactResult exact_solve(const PcxInstance& inst, const OracleLimits& limits) {
  return inst.variant() == Variant::kPctsp ? exact_pctsp(inst, limits) : exact_pcstp(inst, limits);
}

}  // namespace pcx
