#include "pcx/dp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace pcx {

std::vector<PointId> interface_portals(const Interface& iface) {
  std::vector<PointId> r;
  for (const auto& g : iface) r.insert(r.end(), g.begin(), g.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// ---------------------------------------------------------------------------
// Consistency checking

namespace {

struct LocalGraph {
  std::vector<PointId> nodes;  // sorted
  int index(PointId p) const {
    return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), p) - nodes.begin());
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

using Mask = std::vector<std::uint64_t>;

class TrailSearch {
 public:
  TrailSearch(const LocalGraph& lg, const InterfaceGraph& g, const std::vector<std::pair<int, int>>& pairs)
      : g_(g), pairs_(pairs), incident_(lg.nodes.size()) {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      int a = lg.index(g.edges[e].first), b = lg.index(g.edges[e].second);
      ends_.push_back({a, b});
      incident_[a].push_back(static_cast<int>(e));
      if (b != a) incident_[b].push_back(static_cast<int>(e));
    }
  }

  bool run() {
    Mask used((g_.edges.size() + 63) / 64, 0);
    return solve(0, used);
  }

 private:
  bool all_used(const Mask& m) const {
    for (std::size_t e = 0; e < g_.edges.size(); ++e)
      if (!(m[e / 64] >> (e % 64) & 1)) return false;
    return true;
  }

  bool solve(std::size_t k, Mask& used) {
    if (k == pairs_.size()) return all_used(used);
    auto key = std::make_pair(static_cast<int>(k), used);
    if (failed_solve_.count(key)) return false;
    bool ok = walk(k, pairs_[k].first, used);
    if (!ok) failed_solve_.insert(std::move(key));
    return ok;
  }

  bool walk(std::size_t k, int cur, Mask& used) {
    if (cur == pairs_[k].second && solve(k + 1, used)) return true;
    auto key = std::make_tuple(static_cast<int>(k), cur, used);
    if (failed_walk_.count(key)) return false;
    for (int e : incident_[cur]) {
      if (used[e / 64] >> (e % 64) & 1) continue;
      auto [a, b] = ends_[e];
      int next;
      if (g_.directed) {
        if (a != cur) continue;
        next = b;
      } else {
        next = a == cur ? b : a;
      }
      used[e / 64] |= std::uint64_t{1} << (e % 64);
      bool ok = walk(k, next, used);
      used[e / 64] &= ~(std::uint64_t{1} << (e % 64));
      if (ok) return true;
    }
    failed_walk_.insert(std::move(key));
    return false;
  }

  const InterfaceGraph& g_;
  const std::vector<std::pair<int, int>>& pairs_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::pair<int, int>> ends_;
  std::set<std::pair<int, Mask>> failed_solve_;
  std::set<std::tuple<int, int, Mask>> failed_walk_;
};

bool same_set(std::vector<PointId> a, std::vector<PointId> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

}  // namespace

bool check_consistency(const InterfaceGraph& g, const std::vector<PointId>& R, const Interface& P, Variant variant) {
  LocalGraph lg;
  lg.nodes = g.child_portals;
  lg.nodes.insert(lg.nodes.end(), R.begin(), R.end());
  for (const auto& [a, b] : g.edges) {
    lg.nodes.push_back(a);
    lg.nodes.push_back(b);
  }
  for (const auto& grp : P) lg.nodes.insert(lg.nodes.end(), grp.begin(), grp.end());
  std::sort(lg.nodes.begin(), lg.nodes.end());
  lg.nodes.erase(std::unique(lg.nodes.begin(), lg.nodes.end()), lg.nodes.end());
  const std::size_t n = lg.nodes.size();

  // P must live on R and cover it.
  if (!same_set(interface_portals(P), R)) return false;
  for (const auto& grp : P)
    if (grp.empty()) return false;

  std::vector<char> touched(n, 0);
  for (const auto& [a, b] : g.edges) touched[lg.index(a)] = touched[lg.index(b)] = 1;

  if (variant == Variant::kPcstp) {
    UnionFind uf(n);
    for (const auto& [a, b] : g.edges)
      if (!uf.unite(lg.index(a), lg.index(b))) return false;  // cycle
    if (R.empty()) {
      for (std::size_t i = 1; i < n; ++i)
        if (uf.find(static_cast<int>(i)) != uf.find(0)) return false;
      return true;
    }
    // Parts are disjoint, each inside one component, distinct parts apart.
    std::vector<int> part_of(n, -1);
    for (std::size_t k = 0; k < P.size(); ++k)
      for (PointId p : P[k]) {
        int i = lg.index(p);
        if (part_of[i] != -1) return false;
        part_of[i] = static_cast<int>(k);
      }
    std::map<int, int> comp_part;
    for (std::size_t i = 0; i < n; ++i) {
      if (part_of[i] < 0) continue;
      int c = uf.find(static_cast<int>(i));
      auto [it, fresh] = comp_part.emplace(c, part_of[i]);
      if (!fresh && it->second != part_of[i]) return false;
    }
    std::map<int, int> part_comp;
    for (auto [c, k] : comp_part) {
      auto [it, fresh] = part_comp.emplace(k, c);
      if (!fresh && it->second != c) return false;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!comp_part.count(uf.find(static_cast<int>(i)))) return false;  // component without an R portal
    return true;
  }

  // Tours.
  for (const auto& grp : P)
    if (grp.size() != 2) return false;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (P[i] == P[j]) return false;

  if (R.empty()) {
    if (!P.empty()) return false;
    if (g.edges.empty()) return n <= 1;
    std::vector<int> in(n, 0), out(n, 0);
    for (const auto& [a, b] : g.edges) {
      ++out[lg.index(a)];
      ++in[lg.index(b)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (g.directed ? in[i] != out[i] : (in[i] + out[i]) % 2 != 0) return false;
      if (!touched[i]) return false;
    }
    UnionFind uf(n);
    for (const auto& [a, b] : g.edges) uf.unite(lg.index(a), lg.index(b));
    for (std::size_t i = 1; i < n; ++i)
      if (uf.find(static_cast<int>(i)) != uf.find(0)) return false;
    return true;
  }

  std::vector<char> in_r(n, 0);
  for (PointId p : R) in_r[lg.index(p)] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (!touched[i] && !in_r[i]) return false;

  // Degree balance against the pair endpoints before searching.
  std::vector<int> balance(n, 0), parity(n, 0);
  for (const auto& [a, b] : g.edges) {
    ++balance[lg.index(a)];
    --balance[lg.index(b)];
    ++parity[lg.index(a)];
    ++parity[lg.index(b)];
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& grp : P) {
    int p = lg.index(grp[0]), q = lg.index(grp[1]);
    pairs.push_back({p, q});
    --balance[p];
    ++balance[q];
    ++parity[p];
    ++parity[q];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.directed && balance[i] != 0) return false;
    if (!g.directed && parity[i] % 2 != 0) return false;
  }
  TrailSearch search(lg, g, pairs);
  return search.run();
}

double candidate_value(double g_weight, const std::vector<ChildChoice>& children, bool r_empty) {
  double v = g_weight;
  for (const auto& c : children) v += c.active ? c.value : c.penalty;
  if (r_empty) {
    for (std::size_t i = 0; i < children.size(); ++i) {
      double alt = children[i].closed_value;
      for (std::size_t j = 0; j < children.size(); ++j)
        if (j != i) alt += children[j].penalty;
      v = std::min(v, alt);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Dynamic program

std::vector<PointId> dp_portals(const HierarchicalDecomposition& d, int cluster, int m) {
  std::vector<PointId> p = d.inner_portals(cluster);
  if (static_cast<int>(p.size()) > m) {
    const PointId c = d.cluster(cluster).center;
    std::stable_sort(p.begin(), p.end(), [&](PointId a, PointId b) {
      double da = d.space().dist(a, c), db = d.space().dist(b, c);
      return da != db ? da < db : a < b;
    });
    p.resize(static_cast<std::size_t>(std::max(m, 0)));
    std::sort(p.begin(), p.end());
  }
  return p;
}

namespace {

using Key = std::vector<PointId>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (PointId x : k) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Open chains (tours) or components (trees) accumulated over the children
// merged so far.
struct Work {
  std::vector<std::vector<PointId>> groups;
  bool closed = false;
};

Key encode(const Work& w, bool tour) {
  std::vector<std::vector<PointId>> g = w.groups;
  for (auto& x : g) std::sort(x.begin(), x.end());
  std::sort(g.begin(), g.end());
  Key k{w.closed ? 1 : 0};
  for (const auto& x : g) {
    if (!tour) k.push_back(static_cast<PointId>(x.size()));
    k.insert(k.end(), x.begin(), x.end());
  }
  return k;
}

Work decode(const Key& k, bool tour) {
  Work w;
  w.closed = k[0] != 0;
  std::size_t i = 1;
  while (i < k.size()) {
    std::size_t len = tour ? 2 : static_cast<std::size_t>(k[i++]);
    w.groups.emplace_back(k.begin() + static_cast<std::ptrdiff_t>(i), k.begin() + static_cast<std::ptrdiff_t>(i + len));
    i += len;
  }
  return w;
}

enum class Origin { kLeafPortal, kLeafLoop, kEmpty, kMerge, kSingle };

struct Entry {
  Interface iface;
  double value = 0;
  Origin origin = Origin::kEmpty;
  int node = -1;         // kMerge
  int child = -1;        // kSingle: position among the children
};

struct Node {
  int parent = -1;
  int step = -1;   // child position merged by this node
  int entry = -1;  // child entry used; -1 when the child is inactive
  double value = 0;
  std::uint32_t edge_off = 0;
  std::uint32_t edge_cnt = 0;
};

struct Table {
  std::vector<PointId> portals;
  double penalty = 0;
  std::vector<Entry> entries;
  int closed = -1;  // entry index of ({}, {})
  std::vector<Node> nodes;
  std::vector<std::pair<PointId, PointId>> edges;
};

using EdgeList = std::vector<std::pair<PointId, PointId>>;

class Solver {
 public:
  Solver(const PcxInstance& inst, const HierarchicalDecomposition& d, const DpOptions& opt)
      : inst_(inst), d_(d), opt_(opt), tour_(inst.variant() == Variant::kPctsp), tables_(d.clusters().size()) {}

  DpResult run() {
    DpResult res;
    res.stats.entries_per_height.assign(static_cast<std::size_t>(d_.top() + 1), 0);
    for (int h = 0; h <= d_.top(); ++h) {
      for (int c : d_.at_height(h)) {
        if (h == 0)
          build_leaf(c);
        else
          build_merge(c);
        res.stats.entries_per_height[h] += tables_[c].entries.size();
        res.stats.entries += tables_[c].entries.size();
      }
    }
    res.stats.states = states_;
    const Table& root = tables_[d_.root()];
    if (root.closed < 0) throw InternalError("dynamic program produced no root entry");
    res.value = root.entries[root.closed].value;
    emit(d_.root(), root.closed, res.solution);
    // A closed solution without edges is a single visited point.
    if (res.solution.edges.empty() && res.solution.self_loops.empty() && !active_leaves_.empty())
      res.solution.self_loops.push_back(active_leaves_.front());
    res.solution.normalize();
    double c = cost(inst_, res.solution);
    if (std::abs(c - res.value) > kTolerance * std::max(1.0, std::abs(c)))
      throw InternalError("dynamic program value " + std::to_string(res.value) + " differs from reconstructed cost " +
                          std::to_string(c));
    return res;
  }

 private:
  double dist(PointId a, PointId b) const { return d_.space().dist(a, b); }

  void build_leaf(int c) {
    Table& t = tables_[c];
    const PointId x = d_.cluster(c).center;
    t.portals = {x};
    t.penalty = inst_.penalty(x);
    if (inst_.usable(x)) {
      Entry e;
      e.iface = tour_ ? Interface{{x, x}} : Interface{{x}};
      e.value = 0;
      e.origin = Origin::kLeafPortal;
      t.entries.push_back(e);
    }
    Entry closed;
    if (inst_.usable(x) && t.penalty > 0) {
      closed.origin = Origin::kLeafLoop;
      closed.value = 0;
    } else {
      closed.origin = Origin::kEmpty;
      closed.value = t.penalty;
    }
    t.closed = static_cast<int>(t.entries.size());
    t.entries.push_back(closed);
  }

  // Relaxes a successor state during a merge step.
  struct StepMap {
    std::unordered_map<Key, int, KeyHash> index;
  };

  void relax(StepMap& next, std::vector<Node>& nodes, EdgeList& arena, const Key& key, double value, int parent,
             int step, int entry, const EdgeList& added) {
    auto it = next.index.find(key);
    int ni;
    if (it == next.index.end()) {
      ni = static_cast<int>(nodes.size());
      nodes.emplace_back();
      next.index.emplace(key, ni);
    } else {
      ni = it->second;
      if (!(value < nodes[ni].value - 1e-12)) return;
    }
    Node& nd = nodes[ni];
    nd.parent = parent;
    nd.step = step;
    nd.entry = entry;
    nd.value = value;
    nd.edge_off = static_cast<std::uint32_t>(arena.size());
    nd.edge_cnt = static_cast<std::uint32_t>(added.size());
    arena.insert(arena.end(), added.begin(), added.end());
  }

  template <class Emit>
  void expand_tour(Work& w, const Interface& iface, std::size_t gi, double add, EdgeList& edges,
                   const std::vector<char>& in_child_mark, Emit&& emit_fn) {
    if (gi == iface.size()) {
      emit_fn(w, add, edges);
      return;
    }
    auto in_child = [&](PointId p) { return in_child_mark[p] != 0; };
    const PointId p = iface[gi][0], q = iface[gi][1];
    const bool last = gi + 1 == iface.size();
    // Orientations of the segment: (enter, leave).
    std::vector<std::pair<PointId, PointId>> orient{{p, q}};
    if (p != q) orient.push_back({q, p});

    // New chain.
    if (static_cast<int>(w.groups.size()) < opt_.max_open) {
      w.groups.push_back({p, q});
      expand_tour(w, iface, gi + 1, add, edges, in_child_mark, emit_fn);
      w.groups.pop_back();
    }
    const std::size_t nf = w.groups.size();
    // Attach to one end of a chain.
    for (std::size_t x = 0; x < nf; ++x) {
      for (int side = 0; side < 2; ++side) {
        if (side == 1 && w.groups[x][0] == w.groups[x][1]) break;
        const PointId end = w.groups[x][side], other = w.groups[x][1 - side];
        if (in_child(end)) continue;
        for (auto [enter, leave] : orient) {
          auto saved = w.groups[x];
          w.groups[x] = {other, leave};
          edges.push_back({end, enter});
          expand_tour(w, iface, gi + 1, add + dist(end, enter), edges, in_child_mark, emit_fn);
          edges.pop_back();
          w.groups[x] = saved;
        }
      }
    }
    // Join two chains through the segment.
    for (std::size_t x = 0; x < nf; ++x) {
      for (std::size_t y = x + 1; y < nf; ++y) {
        for (int sx = 0; sx < 2; ++sx) {
          if (sx == 1 && w.groups[x][0] == w.groups[x][1]) break;
          for (int sy = 0; sy < 2; ++sy) {
            if (sy == 1 && w.groups[y][0] == w.groups[y][1]) break;
            const PointId ex = w.groups[x][sx], ey = w.groups[y][sy];
            if (in_child(ex) || in_child(ey)) continue;
            for (auto [enter, leave] : orient) {
              auto saved = w.groups;
              std::vector<PointId> merged{w.groups[x][1 - sx], w.groups[y][1 - sy]};
              w.groups.erase(w.groups.begin() + static_cast<std::ptrdiff_t>(y));
              w.groups[x] = merged;
              edges.push_back({ex, enter});
              edges.push_back({leave, ey});
              expand_tour(w, iface, gi + 1, add + dist(ex, enter) + dist(leave, ey), edges, in_child_mark,
                          emit_fn);
              edges.pop_back();
              edges.pop_back();
              w.groups = saved;
            }
          }
        }
      }
    }
    // Close the only chain into a cycle; nothing may follow.
    if (last && nf == 1) {
      const PointId a = w.groups[0][0], b = w.groups[0][1];
      if (!in_child(a) && !in_child(b)) {
        for (auto [enter, leave] : orient) {
          auto saved = w.groups;
          w.groups.clear();
          w.closed = true;
          edges.push_back({b, enter});
          edges.push_back({leave, a});
          expand_tour(w, iface, gi + 1, add + dist(b, enter) + dist(leave, a), edges, in_child_mark, emit_fn);
          edges.pop_back();
          edges.pop_back();
          w.closed = false;
          w.groups = saved;
        }
      }
    }
  }

  template <class Emit>
  void expand_tree(Work& w, const Interface& iface, std::size_t gi, double add, EdgeList& edges,
                   const std::vector<char>& in_child_mark, Emit&& emit_fn) {
    if (gi == iface.size()) {
      emit_fn(w, add, edges);
      return;
    }
    const auto& part = iface[gi];
    // Components reachable through a portal outside the current child, with
    // the cheapest connecting edge.
    struct Option {
      std::size_t comp;
      PointId a, b;
      double w;
    };
    std::vector<Option> opts;
    for (std::size_t x = 0; x < w.groups.size(); ++x) {
      Option best{x, -1, -1, 0};
      for (PointId b : w.groups[x]) {
        if (in_child_mark[b]) continue;
        for (PointId a : part) {
          double dd = dist(a, b);
          if (best.a < 0 || dd < best.w) best = {x, a, b, dd};
        }
      }
      if (best.a >= 0) opts.push_back(best);
    }
    const std::size_t no = opts.size();
    for (std::uint32_t mask = 0; mask < (1u << no); ++mask) {
      const int joined = std::popcount(mask);
      if (static_cast<int>(w.groups.size()) - joined + 1 > opt_.max_open) continue;
      auto saved = w.groups;
      std::vector<PointId> comp = part;
      double extra = 0;
      std::size_t pushed = 0;
      std::vector<char> drop(w.groups.size(), 0);
      for (std::size_t i = 0; i < no; ++i) {
        if (!(mask >> i & 1)) continue;
        const auto& o = opts[i];
        comp.insert(comp.end(), w.groups[o.comp].begin(), w.groups[o.comp].end());
        drop[o.comp] = 1;
        extra += o.w;
        edges.push_back({o.a, o.b});
        ++pushed;
      }
      std::vector<std::vector<PointId>> rest;
      for (std::size_t x = 0; x < w.groups.size(); ++x)
        if (!drop[x]) rest.push_back(w.groups[x]);
      std::sort(comp.begin(), comp.end());
      rest.push_back(std::move(comp));
      w.groups = std::move(rest);
      expand_tree(w, iface, gi + 1, add + extra, edges, in_child_mark, emit_fn);
      w.groups = saved;
      edges.resize(edges.size() - pushed);
    }
  }

  void build_merge(int c) {
    const Cluster& cl = d_.cluster(c);
    Table& t = tables_[c];
    t.portals = dp_portals(d_, c, opt_.m);
    std::vector<char> is_portal(static_cast<std::size_t>(d_.space().size()), 0);
    for (PointId p : t.portals) is_portal[p] = 1;
    for (int ch : cl.children) t.penalty += tables_[ch].penalty;

    std::vector<Node> nodes;
    EdgeList arena;
    StepMap cur;
    nodes.emplace_back();
    cur.index.emplace(encode(Work{}, tour_), 0);

    std::vector<char> in_child(static_cast<std::size_t>(d_.space().size()), 0);
    for (std::size_t step = 0; step < cl.children.size(); ++step) {
      const int ch = cl.children[step];
      const Table& ct = tables_[ch];
      std::fill(in_child.begin(), in_child.end(), 0);
      for (PointId p : d_.cluster(ch).points) in_child[p] = 1;
      StepMap next;
      EdgeList edges;
      for (const auto& [key, ni] : cur.index) {
        const double base = nodes[ni].value;
        relax(next, nodes, arena, key, base + ct.penalty, ni, static_cast<int>(step), -1, {});
        Work w = decode(key, tour_);
        if (w.closed) continue;
        for (std::size_t e = 0; e < ct.entries.size(); ++e) {
          const Entry& ce = ct.entries[e];
          if (ce.iface.empty()) continue;
          auto emit_fn = [&](const Work& out, double add, const EdgeList& added) {
            relax(next, nodes, arena, encode(out, tour_), base + ce.value + add, ni, static_cast<int>(step),
                  static_cast<int>(e), added);
          };
          if (tour_)
            expand_tour(w, ce.iface, 0, 0.0, edges, in_child, emit_fn);
          else
            expand_tree(w, ce.iface, 0, 0.0, edges, in_child, emit_fn);
        }
        if (next.index.size() > opt_.max_states)
          throw BudgetExceeded("merge at cluster " + std::to_string(c) + " exceeded " +
                               std::to_string(opt_.max_states) + " states");
      }
      states_ += next.index.size();
      cur = std::move(next);
    }

    // Read entries off the final states.
    std::map<Interface, Entry> best;
    auto offer = [&](Interface iface, double value, Origin origin, int node, int child) {
      auto it = best.find(iface);
      if (it != best.end() && !(value < it->second.value - 1e-12)) return;
      Entry e;
      e.iface = iface;
      e.value = value;
      e.origin = origin;
      e.node = node;
      e.child = child;
      best[iface] = e;
    };
    std::vector<std::pair<Key, int>> finals(cur.index.begin(), cur.index.end());
    std::sort(finals.begin(), finals.end());
    for (const auto& [key, ni] : finals) {
      const Work w = decode(key, tour_);
      const double v = nodes[ni].value;
      if (w.closed || w.groups.empty()) {
        offer({}, v, Origin::kMerge, ni, -1);
        continue;
      }
      if (tour_) {
        if (w.groups.size() == 1 && w.groups[0][0] == w.groups[0][1]) offer({}, v, Origin::kMerge, ni, -1);
        bool ok = static_cast<int>(w.groups.size()) <= opt_.max_pairs;
        Interface iface;
        for (const auto& g : w.groups) {
          if (!is_portal[g[0]] || !is_portal[g[1]]) ok = false;
          iface.push_back({std::min(g[0], g[1]), std::max(g[0], g[1])});
        }
        if (!ok) continue;
        std::sort(iface.begin(), iface.end());
        if (std::adjacent_find(iface.begin(), iface.end()) != iface.end()) continue;
        if (static_cast<int>(interface_portals(iface).size()) > opt_.r) continue;
        offer(iface, v, Origin::kMerge, ni, -1);
      } else {
        if (w.groups.size() == 1) offer({}, v, Origin::kMerge, ni, -1);
        if (static_cast<int>(w.groups.size()) > opt_.r) continue;
        // Every component exposes a non-empty subset of its portals.
        std::vector<std::vector<PointId>> avail;
        for (const auto& g : w.groups) {
          std::vector<PointId> a;
          for (PointId p : g)
            if (is_portal[p]) a.push_back(p);
          if (a.empty()) break;
          avail.push_back(a);
        }
        if (avail.size() != w.groups.size()) continue;
        Interface iface(avail.size());
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
          if (i == avail.size()) {
            Interface sorted = iface;
            std::sort(sorted.begin(), sorted.end());
            offer(sorted, v, Origin::kMerge, ni, -1);
            return;
          }
          const std::size_t na = avail[i].size();
          for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
            if (used + std::popcount(mask) > opt_.r) continue;
            iface[i].clear();
            for (std::size_t j = 0; j < na; ++j)
              if (mask >> j & 1) iface[i].push_back(avail[i][j]);
            rec(i + 1, used + std::popcount(mask));
          }
        };
        rec(0, 0);
      }
    }
    // One child closes on its own, the rest pay their penalties.
    for (std::size_t i = 0; i < cl.children.size(); ++i) {
      const Table& ct = tables_[cl.children[i]];
      if (ct.closed < 0) continue;
      double v = ct.entries[ct.closed].value;
      for (std::size_t j = 0; j < cl.children.size(); ++j)
        if (j != i) v += tables_[cl.children[j]].penalty;
      offer({}, v, Origin::kSingle, -1, static_cast<int>(i));
    }

    // Keep only the nodes the entries refer to.
    std::vector<int> remap(nodes.size(), -1);
    for (auto& [iface, e] : best) {
      std::vector<int> chain;
      for (int ni = e.node; ni >= 0 && remap[ni] < 0; ni = nodes[ni].parent) chain.push_back(ni);
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const Node& old = nodes[*it];
        Node nd = old;
        nd.parent = old.parent >= 0 ? remap[old.parent] : -1;
        nd.edge_off = static_cast<std::uint32_t>(t.edges.size());
        t.edges.insert(t.edges.end(), arena.begin() + old.edge_off, arena.begin() + old.edge_off + old.edge_cnt);
        remap[*it] = static_cast<int>(t.nodes.size());
        t.nodes.push_back(nd);
      }
      if (e.node >= 0) e.node = remap[e.node];
    }
    for (auto& [iface, e] : best) {
      if (iface.empty()) t.closed = static_cast<int>(t.entries.size());
      t.entries.push_back(std::move(e));
    }
  }

  // Local configuration behind a merged entry.
  struct Config {
    std::vector<std::pair<int, int>> choices;  // (child position, entry) for active children
    EdgeList edges;
  };

  Config config_of(int c, const Entry& e) const {
    const Table& t = tables_[c];
    Config cfg;
    for (int ni = e.node; ni >= 0; ni = t.nodes[ni].parent) {
      const Node& nd = t.nodes[ni];
      if (nd.step < 0) break;
      if (nd.entry >= 0) cfg.choices.push_back({nd.step, nd.entry});
      cfg.edges.insert(cfg.edges.end(), t.edges.begin() + nd.edge_off, t.edges.begin() + nd.edge_off + nd.edge_cnt);
    }
    return cfg;
  }

  void verify(int c, const Entry& e, const Config& cfg) const {
    const Cluster& cl = d_.cluster(c);
    InterfaceGraph g;
    g.edges = cfg.edges;
    std::vector<ChildChoice> kids(cl.children.size());
    double gw = 0;
    for (const auto& [a, b] : cfg.edges) gw += dist(a, b);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const Table& ct = tables_[cl.children[i]];
      kids[i].penalty = ct.penalty;
      kids[i].closed_value = ct.closed >= 0 ? ct.entries[ct.closed].value : ct.penalty;
    }
    for (auto [pos, ei] : cfg.choices) {
      const Entry& ce = tables_[cl.children[pos]].entries[ei];
      kids[pos].active = true;
      kids[pos].value = ce.value;
      for (const auto& grp : ce.iface) {
        g.child_portals.insert(g.child_portals.end(), grp.begin(), grp.end());
        for (std::size_t j = 1; j < grp.size(); ++j)
          if (grp[j] != grp[0]) g.edges.push_back({grp[0], grp[j]});
      }
    }
    std::sort(g.child_portals.begin(), g.child_portals.end());
    g.child_portals.erase(std::unique(g.child_portals.begin(), g.child_portals.end()), g.child_portals.end());
    if (!check_consistency(g, interface_portals(e.iface), e.iface, inst_.variant()))
      throw InternalError("winning configuration at cluster " + std::to_string(c) + " is inconsistent");
    double cv = candidate_value(gw, kids, e.iface.empty());
    if (cv > e.value + kTolerance * std::max(1.0, std::abs(e.value)))
      throw InternalError("candidate value above the stored entry value at cluster " + std::to_string(c));
  }

  void emit(int c, int entry, Solution& out) const {
    const Table& t = tables_[c];
    const Entry& e = t.entries[entry];
    const Cluster& cl = d_.cluster(c);
    switch (e.origin) {
      case Origin::kLeafPortal:
        active_leaves_.push_back(cl.center);
        return;
      case Origin::kEmpty:
        return;
      case Origin::kLeafLoop:
        out.self_loops.push_back(cl.center);
        return;
      case Origin::kSingle: {
        const int ch = cl.children[e.child];
        emit(ch, tables_[ch].closed, out);
        return;
      }
      case Origin::kMerge: {
        Config cfg = config_of(c, e);
        if (opt_.self_check) verify(c, e, cfg);
        for (auto [pos, ei] : cfg.choices) emit(cl.children[pos], ei, out);
        for (const auto& [a, b] : cfg.edges) out.edges.emplace_back(a, b);
        return;
      }
    }
  }

  const PcxInstance& inst_;
  const HierarchicalDecomposition& d_;
  DpOptions opt_;
  bool tour_;
  std::vector<Table> tables_;
  std::size_t states_ = 0;
  mutable std::vector<PointId> active_leaves_;
};

}  // namespace

DpResult dp_solve(const PcxInstance& inst, const HierarchicalDecomposition& d, const DpOptions& options) {
  if (inst.num_points() != d.space().size()) throw InvalidInput("decomposition and instance spaces differ");
  Solver solver(inst, d, options);
  return solver.run();
}

}  // namespace pcx
