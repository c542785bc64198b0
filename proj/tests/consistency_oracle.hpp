#pragma once

// Brute-force references for interface consistency: trail decompositions by
// trying every ordering (and orientation) of the edges, forests by BFS.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "pcx/dp.hpp"

namespace testing {

using namespace pcx;

// Every multiset of (start, end) pairs obtainable by ordering the edges and
// cutting the sequence into at most max_blocks consecutive non-empty trails.
// Also reports whether one closed trail uses every edge.
struct TrailOracle {
  std::set<std::vector<std::pair<PointId, PointId>>> block_sets;
  bool single_circuit = false;
  std::set<PointId> touched;

  TrailOracle(const InterfaceGraph& g, int max_blocks) {
    const std::size_t m = g.edges.size();
    for (const auto& [a, b] : g.edges) {
      touched.insert(a);
      touched.insert(b);
    }
    if (m == 0) {
      block_sets.insert(std::vector<std::pair<PointId, PointId>>{});
      return;
    }
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    const unsigned orient_count = g.directed ? 1u : (1u << m);
    do {
      for (unsigned orient = 0; orient < orient_count; ++orient) {
        std::vector<std::pair<PointId, PointId>> seq;
        for (std::size_t i = 0; i < m; ++i) {
          auto e = g.edges[perm[i]];
          if (orient >> perm[i] & 1u) std::swap(e.first, e.second);
          seq.push_back(e);
        }
        // Cuts between positions; a cut is forced where consecutive edges do
        // not chain, optional elsewhere.
        for (unsigned cuts = 0; cuts < (1u << (m - 1)); ++cuts) {
          if (std::popcount(cuts) + 1 > max_blocks) continue;
          bool ok = true;
          std::vector<std::pair<PointId, PointId>> blocks;
          PointId start = seq[0].first;
          for (std::size_t i = 0; i + 1 < m && ok; ++i) {
            if (cuts >> i & 1u) {
              blocks.push_back({start, seq[i].second});
              start = seq[i + 1].first;
            } else if (seq[i].second != seq[i + 1].first) {
              ok = false;
            }
          }
          if (!ok) continue;
          blocks.push_back({start, seq[m - 1].second});
          if (blocks.size() == 1 && blocks[0].first == blocks[0].second) single_circuit = true;
          if (!g.directed)
            for (auto& b : blocks)
              if (b.first > b.second) std::swap(b.first, b.second);
          std::sort(blocks.begin(), blocks.end());
          block_sets.insert(blocks);
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  bool consistent(const std::vector<PointId>& child_portals, const std::vector<PointId>& R, const Interface& P,
                  bool directed) const {
    if (R.empty()) {
      if (!P.empty()) return false;
      if (touched.empty()) {
        std::set<PointId> u(child_portals.begin(), child_portals.end());
        return u.size() <= 1;
      }
      for (PointId p : child_portals)
        if (!touched.count(p)) return false;
      return single_circuit;
    }
    std::set<PointId> rs(R.begin(), R.end());
    std::set<PointId> covered;
    std::set<std::pair<PointId, PointId>> pairs;
    for (const auto& grp : P) {
      if (grp.size() != 2) return false;
      std::pair<PointId, PointId> pr{grp[0], grp[1]};
      if (!directed && pr.first > pr.second) std::swap(pr.first, pr.second);
      if (!pairs.insert(pr).second) return false;
      covered.insert(grp[0]);
      covered.insert(grp[1]);
    }
    if (covered != rs) return false;
    for (PointId p : child_portals)
      if (!rs.count(p) && !touched.count(p)) return false;
    for (const auto& blocks : block_sets) {
      // Each block is a distinct pair of P; unmatched pairs must be {p,p}.
      std::set<std::pair<PointId, PointId>> used;
      bool ok = true;
      for (const auto& b : blocks)
        if (!pairs.count(b) || !used.insert(b).second) ok = false;
      if (!ok) continue;
      for (const auto& pr : pairs)
        if (!used.count(pr) && pr.first != pr.second) ok = false;
      if (ok) return true;
    }
    return false;
  }
};

// Components by breadth-first search; a forest has |E| = |V| - #components.
inline bool forest_oracle(const InterfaceGraph& g, const std::vector<PointId>& R, const Interface& P) {
  std::set<PointId> nodes(g.child_portals.begin(), g.child_portals.end());
  nodes.insert(R.begin(), R.end());
  for (const auto& [a, b] : g.edges) {
    nodes.insert(a);
    nodes.insert(b);
  }
  std::map<PointId, std::vector<PointId>> adj;
  for (const auto& [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<PointId, int> comp;
  int ncomp = 0;
  for (PointId s : nodes) {
    if (comp.count(s)) continue;
    std::vector<PointId> queue{s};
    comp[s] = ncomp;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (PointId y : adj[queue[i]])
        if (!comp.count(y)) {
          comp[y] = ncomp;
          queue.push_back(y);
        }
    ++ncomp;
  }
  if (g.edges.size() + static_cast<std::size_t>(ncomp) != nodes.size()) return false;
  std::set<PointId> rs(R.begin(), R.end());
  std::set<PointId> in_p;
  for (const auto& grp : P)
    for (PointId p : grp)
      if (!in_p.insert(p).second) return false;
  if (in_p != rs) return false;
  if (R.empty()) return ncomp <= 1;
  // Same part iff same component, and every component holds a portal of R.
  for (const auto& a : P)
    for (const auto& b : P)
      for (PointId x : a)
        for (PointId y : b)
          if ((comp[x] == comp[y]) != (&a == &b)) return false;
  std::set<int> hit;
  for (PointId p : R) hit.insert(comp[p]);
  return static_cast<int>(hit.size()) == ncomp;
}

// All sets of distinct pairs over R (ordered when directed) with at most
// max_pairs members that cover R.
inline std::vector<Interface> pair_interfaces(const std::vector<PointId>& R, int max_pairs, bool directed) {
  std::vector<std::vector<PointId>> all;
  for (PointId a : R)
    for (PointId b : R)
      if (directed || a <= b) all.push_back({a, b});
  std::vector<Interface> out;
  Interface cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (!cur.empty()) {
      if (interface_portals(cur) == R) out.push_back(cur);
    }
    if (static_cast<int>(cur.size()) == max_pairs) return;
    for (std::size_t j = i; j < all.size(); ++j) {
      cur.push_back(all[j]);
      rec(j + 1);
      cur.pop_back();
    }
  };
  if (R.empty()) return {Interface{}};
  rec(0);
  return out;
}

inline std::vector<Interface> partitions(const std::vector<PointId>& R) {
  std::vector<Interface> out;
  Interface cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == R.size()) {
      out.push_back(cur);
      return;
    }
    for (auto& part : cur) {
      part.push_back(R[i]);
      rec(i + 1);
      part.pop_back();
    }
    cur.push_back({R[i]});
    rec(i + 1);
    cur.pop_back();
  };
  rec(0);
  return out;
}

struct EquivalenceReport {
  long cases = 0;
  long disagreements = 0;
};

// Every digraph on nodes 0..3 with at most 5 edges (no loops), every R and
// every pair set of at most 3 pairs; child portals are the touched nodes, or
// all four nodes.
inline EquivalenceReport tour_equivalence(bool directed) {
  EquivalenceReport rep;
  std::vector<std::pair<PointId, PointId>> kinds;
  for (PointId a = 0; a < 4; ++a)
    for (PointId b = 0; b < 4; ++b)
      if (a != b && (directed || a < b)) kinds.push_back({a, b});
  std::vector<std::vector<PointId>> subsets;
  for (unsigned m = 0; m < 16; ++m) {
    std::vector<PointId> s;
    for (PointId i = 0; i < 4; ++i)
      if (m >> i & 1u) s.push_back(i);
    subsets.push_back(s);
  }
  std::vector<std::vector<Interface>> ifaces;
  for (const auto& r : subsets) ifaces.push_back(pair_interfaces(r, 3, directed));

  std::vector<std::pair<PointId, PointId>> edges;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    InterfaceGraph g;
    g.edges = edges;
    g.directed = directed;
    TrailOracle oracle(g, 3);
    std::vector<PointId> touched(oracle.touched.begin(), oracle.touched.end());
    for (int variant_u = 0; variant_u < 2; ++variant_u) {
      g.child_portals = variant_u == 0 ? touched : std::vector<PointId>{0, 1, 2, 3};
      for (std::size_t ri = 0; ri < subsets.size(); ++ri)
        for (const auto& P : ifaces[ri]) {
          bool a = check_consistency(g, subsets[ri], P, Variant::kPctsp);
          bool b = oracle.consistent(g.child_portals, subsets[ri], P, directed);
          ++rep.cases;
          if (a != b) ++rep.disagreements;
        }
    }
    if (edges.size() == 5) return;
    for (std::size_t k = from; k < kinds.size(); ++k) {
      edges.push_back(kinds[k]);
      rec(k);
      edges.pop_back();
    }
  };
  rec(0);
  return rep;
}

// Every edge subset of K5 (forests and graphs with cycles), every R and every
// partition of R; child portals are the touched nodes, or all five.
inline EquivalenceReport tree_equivalence() {
  EquivalenceReport rep;
  std::vector<std::pair<PointId, PointId>> kinds;
  for (PointId a = 0; a < 5; ++a)
    for (PointId b = a + 1; b < 5; ++b) kinds.push_back({a, b});
  for (unsigned em = 0; em < (1u << kinds.size()); ++em) {
    InterfaceGraph g;
    std::set<PointId> touched;
    for (std::size_t k = 0; k < kinds.size(); ++k)
      if (em >> k & 1u) {
        g.edges.push_back(kinds[k]);
        touched.insert(kinds[k].first);
        touched.insert(kinds[k].second);
      }
    for (int variant_u = 0; variant_u < 2; ++variant_u) {
      g.child_portals = variant_u == 0 ? std::vector<PointId>(touched.begin(), touched.end())
                                       : std::vector<PointId>{0, 1, 2, 3, 4};
      for (unsigned rm = 0; rm < 32; ++rm) {
        std::vector<PointId> R;
        for (PointId i = 0; i < 5; ++i)
          if (rm >> i & 1u) R.push_back(i);
        for (const auto& P : partitions(R)) {
          bool a = check_consistency(g, R, P, Variant::kPcstp);
          bool b = forest_oracle(g, R, P);
          ++rep.cases;
          if (a != b) ++rep.disagreements;
        }
      }
    }
  }
  return rep;
}

}  // namespace testing
