#include "pcx/hierdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pcx {

double sample_truncated_exponential(std::mt19937_64& rng, double scale, double chi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  if (chi <= 1.0) return u * scale;
  // Inverse CDF of (1 - e^{-a t}) / (1 - 1/chi) with a = ln(chi) / scale.
  const double a = std::log(chi) / scale;
  double t = -std::log(1.0 - u * (1.0 - 1.0 / chi)) / a;
  return std::clamp(t, 0.0, scale);
}

HierarchicalDecomposition::HierarchicalDecomposition(TreePtr tree, DecompOptions options, std::uint64_t seed)
    : tree_(std::move(tree)), options_(options), seed_(seed) {
  if (!(options_.theta_p > 0 && options_.theta_p <= 1)) throw InvalidInput("theta_p must lie in (0,1]");
  const MetricSpace& sp = tree_->space();
  const auto& nets = tree_->nets();
  const int n = sp.size();
  const int L = tree_->top();
  const double chi = std::pow(options_.chi_base, sp.doubling_dimension());
  std::mt19937_64 rng(seed);

  radius_.assign(static_cast<std::size_t>(L) + 1, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  ordering_.assign(static_cast<std::size_t>(L) + 1, {});
  cluster_of_.assign(static_cast<std::size_t>(L) + 1, std::vector<int>(static_cast<std::size_t>(n), -1));
  by_height_.assign(static_cast<std::size_t>(L) + 1, {});

  Cluster root;
  root.height = L;
  root.center = tree_->root().point;
  root.points.resize(static_cast<std::size_t>(n));
  std::iota(root.points.begin(), root.points.end(), 0);
  clusters_.push_back(root);
  by_height_[L].push_back(0);
  for (PointId p = 0; p < n; ++p) cluster_of_[L][p] = 0;

  for (int i = L - 1; i >= 0; --i) {
    std::vector<PointId> assign(static_cast<std::size_t>(n), -1);
    if (i == 0) {
      // Height 0 is discrete: every point is its own cluster.
      for (PointId p = 0; p < n; ++p) assign[p] = p;
    } else {
      const double si = nets.scale(i);
      ordering_[i] = nets.level(i);
      std::shuffle(ordering_[i].begin(), ordering_[i].end(), rng);
      for (PointId u : ordering_[i]) radius_[i][u] = si + sample_truncated_exponential(rng, si, chi);
      for (PointId x = 0; x < n; ++x) {
        for (PointId u : ordering_[i])
          if (sp.dist(x, u) <= radius_[i][u]) {
            assign[x] = u;
            break;
          }
        if (assign[x] < 0) {
          ++uncovered_;
          double best = std::numeric_limits<double>::infinity();
          for (PointId u : nets.level(i))
            if (sp.dist(x, u) < best) {
              best = sp.dist(x, u);
              assign[x] = u;
            }
        }
      }
    }
    for (int parent : std::vector<int>(by_height_[i + 1])) {
      std::map<PointId, std::vector<PointId>> groups;
      for (PointId x : clusters_[parent].points) groups[assign[x]].push_back(x);
      for (auto& [center, pts] : groups) {
        Cluster c;
        c.id = static_cast<int>(clusters_.size());
        c.height = i;
        c.center = center;
        c.points = std::move(pts);
        c.parent = parent;
        for (PointId x : c.points) cluster_of_[i][x] = c.id;
        clusters_[parent].children.push_back(c.id);
        by_height_[i].push_back(c.id);
        clusters_.push_back(std::move(c));
      }
    }
  }
  root_ = 0;

  portals_.resize(clusters_.size());
  inner_portals_.resize(clusters_.size());
  for (const Cluster& c : clusters_) {
    const int j = portal_height(c.height);
    auto& ps = portals_[c.id];
    for (PointId u : c.points) ps.push_back(tree_->anc(u, j));
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    auto& in = inner_portals_[c.id];
    for (const NetNode& p : ps)
      if (cluster_of_[c.height][p.point] == c.id) in.push_back(p.point);
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());
  }
}

int HierarchicalDecomposition::portal_height(int cluster_height) const {
  const double shift = std::floor(std::log(options_.theta_p) / std::log(tree_->s()) + 1e-12);
  int j = cluster_height + static_cast<int>(shift);
  return std::clamp(j, 0, cluster_height);
}

bool HierarchicalDecomposition::contains(int ancestor, int descendant) const {
  const Cluster& a = clusters_[ancestor];
  const Cluster& d = clusters_[descendant];
  if (d.height > a.height) return false;
  return cluster_of_[a.height][d.points.front()] == ancestor;
}

bool HierarchicalDecomposition::siblings(int a, int b) const {
  return a != b && clusters_[a].parent >= 0 && clusters_[a].parent == clusters_[b].parent;
}

int HierarchicalDecomposition::cut_height(PointId a, PointId b) const {
  for (int i = top(); i >= 0; --i)
    if (cluster_of_[i][a] != cluster_of_[i][b]) return i;
  return -1;
}

// ---------------------------------------------------------------------------
// Portal graphs

double PortalGraph::weight(const MetricSpace& space) const {
  double w = 0;
  for (const auto& e : edges) w += space.dist(e.a.node.point, e.b.node.point);
  return w;
}

std::vector<Portal> PortalGraph::vertices() const {
  std::vector<Portal> v = isolated;
  for (const auto& e : edges) {
    v.push_back(e.a);
    v.push_back(e.b);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<PointId> PortalGraph::visited(const HierarchicalDecomposition& d) const {
  std::vector<PointId> out;
  for (const Portal& p : vertices())
    if (p.node.height == 0 && d.leaf(p.node.point) == p.cluster) out.push_back(p.node.point);
  return out;
}

namespace {

struct Indexed {
  std::vector<Portal> verts;
  std::vector<std::pair<int, int>> edges;
};

Indexed index_graph(const PortalGraph& g) {
  Indexed ix;
  ix.verts = g.vertices();
  auto id = [&](const Portal& p) {
    return static_cast<int>(std::lower_bound(ix.verts.begin(), ix.verts.end(), p) - ix.verts.begin());
  };
  for (const auto& e : g.edges) ix.edges.push_back({id(e.a), id(e.b)});
  return ix;
}

}  // namespace

bool PortalGraph::eulerian() const {
  Indexed ix = index_graph(*this);
  std::vector<int> deg(ix.verts.size(), 0);
  for (auto [a, b] : ix.edges) {
    ++deg[a];
    ++deg[b];
  }
  return std::all_of(deg.begin(), deg.end(), [](int x) { return x % 2 == 0; });
}

bool PortalGraph::connected() const {
  Indexed ix = index_graph(*this);
  if (ix.verts.size() <= 1) return true;
  std::vector<int> parent(ix.verts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : ix.edges) parent[find(a)] = find(b);
  for (std::size_t i = 1; i < ix.verts.size(); ++i)
    if (find(static_cast<int>(i)) != find(0)) return false;
  return true;
}

Solution PortalGraph::induced() const {
  Solution s;
  for (const auto& e : edges)
    if (e.a.node.point != e.b.node.point) s.edges.emplace_back(e.a.node.point, e.b.node.point);
  for (const Portal& p : vertices()) s.self_loops.push_back(p.node.point);
  s.normalize();
  return s;
}

PortalRespecting make_portal_respecting(const Solution& f, const HierarchicalDecomposition& d) {
  PortalRespecting out;
  const NetTree& tree = d.tree();
  auto chain = [&](PointId u, int top) {
    std::vector<Portal> c;
    for (int h = 0; h <= top; ++h) c.push_back({tree.anc(u, d.portal_height(h)), d.cluster_of(h, u)});
    return c;
  };
  for (std::size_t k = 0; k < f.edges.size(); ++k) {
    const Edge& e = f.edges[k];
    const int i = d.cut_height(e.a, e.b);
    if (i < 0) continue;
    auto up = chain(e.a, i);
    auto down = chain(e.b, i);
    for (int h = 0; h < i; ++h) out.graph.edges.push_back({up[h], up[h + 1]});
    out.graph.edges.push_back({up[i], down[i]});
    for (int h = i; h > 0; --h) out.graph.edges.push_back({down[h], down[h - 1]});
    for (int h = 1; h <= i; ++h) {
      out.witness.emplace(up[h], static_cast<int>(k));
      out.witness.emplace(down[h], static_cast<int>(k));
    }
  }
  for (PointId x : f.self_loops) {
    Portal leaf{{x, 0}, d.leaf(x)};
    bool present = std::any_of(out.graph.edges.begin(), out.graph.edges.end(),
                               [&](const PortalEdge& pe) { return pe.a == leaf || pe.b == leaf; });
    if (!present) out.graph.isolated.push_back(leaf);
  }
  return out;
}

namespace {

bool related(const HierarchicalDecomposition& d, int a, int b) {
  if (a == b || d.siblings(a, b)) return true;
  return d.cluster(a).parent == b || d.cluster(b).parent == a;
}

bool is_portal_of(const HierarchicalDecomposition& d, const Portal& p) {
  const auto& ps = d.portals(p.cluster);
  return std::binary_search(ps.begin(), ps.end(), p.node);
}

bool outside_neighbor(const HierarchicalDecomposition& d, int cluster, int other) {
  return d.siblings(cluster, other) || d.cluster(cluster).parent == other;
}

}  // namespace

bool is_portal_respecting(const PortalGraph& g, const HierarchicalDecomposition& d) {
  for (const auto& e : g.edges)
    if (!related(d, e.a.cluster, e.b.cluster) || !is_portal_of(d, e.a) || !is_portal_of(d, e.b)) return false;
  for (const Portal& p : g.isolated)
    if (!is_portal_of(d, p)) return false;
  return true;
}

std::vector<Portal> active_portals(const PortalGraph& g, const HierarchicalDecomposition& d, int cluster) {
  std::vector<Portal> out;
  for (const auto& e : g.edges) {
    if (e.a.cluster == cluster && outside_neighbor(d, cluster, e.b.cluster)) out.push_back(e.a);
    if (e.b.cluster == cluster && outside_neighbor(d, cluster, e.a.cluster)) out.push_back(e.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Portal> portal_circuit(const PortalGraph& g) {
  if (g.edges.empty()) return g.isolated.empty() ? std::vector<Portal>{} : std::vector<Portal>{g.isolated.front()};
  // Edge lists produced by make_economical are already in walk order.
  {
    for (const Portal& start : {g.edges.front().a, g.edges.front().b}) {
      std::vector<Portal> walk{start};
      bool ok = true;
      for (const auto& e : g.edges) {
        const Portal& cur = walk.back();
        if (e.a == cur) walk.push_back(e.b);
        else if (e.b == cur) walk.push_back(e.a);
        else {
          ok = false;
          break;
        }
      }
      if (ok && walk.back() == walk.front()) {
        walk.pop_back();
        return walk;
      }
    }
  }
  Indexed ix = index_graph(g);
  std::vector<std::vector<std::pair<int, int>>> adj(ix.verts.size());
  for (std::size_t k = 0; k < ix.edges.size(); ++k) {
    adj[ix.edges[k].first].push_back({ix.edges[k].second, static_cast<int>(k)});
    adj[ix.edges[k].second].push_back({ix.edges[k].first, static_cast<int>(k)});
  }
  std::vector<char> used(ix.edges.size(), 0);
  std::vector<std::size_t> next(ix.verts.size(), 0);
  std::vector<int> stack{ix.edges.front().first};
  std::vector<int> circuit;
  while (!stack.empty()) {
    int v = stack.back();
    auto& pos = next[v];
    while (pos < adj[v].size() && used[adj[v][pos].second]) ++pos;
    if (pos == adj[v].size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      used[adj[v][pos].second] = 1;
      stack.push_back(adj[v][pos].first);
    }
  }
  circuit.pop_back();
  std::reverse(circuit.begin(), circuit.end());
  std::vector<Portal> out;
  for (int v : circuit) out.push_back(ix.verts[v]);
  return out;
}

std::vector<Crossing> crossings(const std::vector<Portal>& circuit, const HierarchicalDecomposition& d, int cluster) {
  const std::size_t n = circuit.size();
  std::vector<char> inside(n);
  for (std::size_t k = 0; k < n; ++k) inside[k] = d.contains(cluster, circuit[k].cluster);
  std::size_t start = n;
  for (std::size_t k = 0; k < n; ++k)
    if (!inside[k]) {
      start = k;
      break;
    }
  std::vector<Crossing> out;
  if (start == n) return out;
  for (std::size_t step = 1; step <= n; ++step) {
    std::size_t k = (start + step) % n;
    if (!inside[k]) continue;
    std::size_t prev = (k + n - 1) % n;
    if (inside[prev]) continue;
    std::size_t last = k;
    while (inside[(last + 1) % n]) last = (last + 1) % n;
    out.push_back({circuit[k], circuit[last], k, last});
  }
  return out;
}

namespace {

PortalGraph graph_from_circuit(const std::vector<Portal>& c) {
  PortalGraph g;
  if (c.size() == 1) {
    g.isolated.push_back(c.front());
    return g;
  }
  for (std::size_t k = 0; k < c.size(); ++k) g.edges.push_back({c[k], c[(k + 1) % c.size()]});
  return g;
}

void drop_adjacent_repeats(std::vector<Portal>& c) {
  bool changed = true;
  while (changed && c.size() > 1) {
    changed = false;
    for (std::size_t k = 0; k < c.size() && c.size() > 1; ++k)
      if (c[k] == c[(k + 1) % c.size()]) {
        c.erase(c.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
  }
}

// One economical rewrite on the first repeated (enter, leave) pair of the
// cluster; false when every pair is used once.
bool rewrite_once(std::vector<Portal>& circ, const HierarchicalDecomposition& d, int cluster) {
  auto cr = crossings(circ, d, cluster);
  std::size_t i1 = cr.size(), i2 = cr.size();
  for (std::size_t a = 0; a < cr.size() && i1 == cr.size(); ++a)
    for (std::size_t b = a + 1; b < cr.size(); ++b)
      if (cr[a].enter == cr[b].enter && cr[a].leave == cr[b].leave) {
        i1 = a;
        i2 = b;
        break;
      }
  if (i1 == cr.size()) return false;

  // Rotate so the walk starts outside the cluster, just after crossing i2,
  // which makes both crossings contiguous ranges with i1 before i2.
  const std::size_t n = circ.size();
  const std::size_t rot = (cr[i2].last + 1) % n;
  std::rotate(circ.begin(), circ.begin() + static_cast<std::ptrdiff_t>(rot), circ.end());
  auto shift = [&](std::size_t k) { return (k + n - rot) % n; };
  std::size_t a1 = shift(cr[i1].first), b1 = shift(cr[i1].last);
  std::size_t a2 = shift(cr[i2].first), b2 = shift(cr[i2].last);
  // E3 (after b2) is empty after the rotation and E1 holds the rest.
  std::vector<Portal> E1(circ.begin(), circ.begin() + static_cast<std::ptrdiff_t>(a1));
  std::vector<Portal> X1(circ.begin() + static_cast<std::ptrdiff_t>(a1), circ.begin() + static_cast<std::ptrdiff_t>(b1) + 1);
  std::vector<Portal> E2(circ.begin() + static_cast<std::ptrdiff_t>(b1) + 1, circ.begin() + static_cast<std::ptrdiff_t>(a2));
  std::vector<Portal> X2(circ.begin() + static_cast<std::ptrdiff_t>(a2), circ.begin() + static_cast<std::ptrdiff_t>(b2) + 1);
  std::vector<Portal> E3(circ.begin() + static_cast<std::ptrdiff_t>(b2) + 1, circ.end());

  // E1 p P1 q E2 p P2 q E3  ->  E1 p P1 q rev(P2) p rev(E2) [q] E3, and the
  // bracketed q is a scratch whose two outside neighbours are joined.
  std::vector<Portal> next = E1;
  next.insert(next.end(), X1.begin(), X1.end());
  next.insert(next.end(), X2.rbegin() + 1, X2.rend());
  next.insert(next.end(), E2.rbegin(), E2.rend());
  next.insert(next.end(), E3.begin(), E3.end());
  drop_adjacent_repeats(next);
  circ = std::move(next);
  return true;
}

}  // namespace

PortalGraph make_economical(const PortalGraph& g, const HierarchicalDecomposition& d) {
  if (!g.eulerian() || !g.connected()) throw InvalidInput("economical rewrite needs a connected Eulerian graph");
  auto circ = portal_circuit(g);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Cluster& c : d.clusters()) {
      if (c.id == d.root()) continue;
      while (rewrite_once(circ, d, c.id)) changed = true;
    }
  }
  return graph_from_circuit(circ);
}

bool is_economical(const PortalGraph& g, const HierarchicalDecomposition& d) {
  auto circ = portal_circuit(g);
  for (const Cluster& c : d.clusters()) {
    auto cr = crossings(circ, d, c.id);
    std::vector<std::pair<Portal, Portal>> pairs;
    for (const auto& x : cr) pairs.push_back({x.enter, x.leave});
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) return false;
  }
  return true;
}

PortalGraph patch_cluster(const PortalGraph& g, const HierarchicalDecomposition& d, int cluster, int r, bool tour) {
  auto R = active_portals(g, d, cluster);
  if (static_cast<int>(R.size()) <= r) return g;
  const Portal keep = R.front();
  const MetricSpace& sp = d.space();
  auto dropped = [&](const Portal& p) { return p.cluster == cluster && p != keep && std::binary_search(R.begin(), R.end(), p); };

  PortalGraph out;
  out.isolated = g.isolated;
  std::vector<Portal> outside{keep};
  for (const auto& e : g.edges) {
    if (dropped(e.a) && outside_neighbor(d, cluster, e.b.cluster)) {
      outside.push_back(e.b);
      continue;
    }
    if (dropped(e.b) && outside_neighbor(d, cluster, e.a.cluster)) {
      outside.push_back(e.a);
      continue;
    }
    out.edges.push_back(e);
  }
  for (const Portal& a : R)
    if (a != keep) out.edges.push_back({a, keep});

  // Spanning tree (Prim) over the cut-off outside endpoints and the kept portal.
  std::sort(outside.begin() + 1, outside.end());
  outside.erase(std::unique(outside.begin() + 1, outside.end()), outside.end());
  const std::size_t k = outside.size();
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  std::vector<int> link(k, -1);
  std::vector<char> in(k, 0);
  best[0] = 0;
  for (std::size_t step = 0; step < k; ++step) {
    int v = -1;
    for (std::size_t x = 0; x < k; ++x)
      if (!in[x] && (v < 0 || best[x] < best[v])) v = static_cast<int>(x);
    in[v] = 1;
    if (link[v] >= 0) out.edges.push_back({outside[link[v]], outside[v]});
    for (std::size_t x = 0; x < k; ++x) {
      double dd = sp.dist(outside[v].node.point, outside[x].node.point);
      if (!in[x] && dd < best[x]) {
        best[x] = dd;
        link[x] = v;
      }
    }
  }

  if (tour) {
    std::map<Portal, int> deg;
    for (const auto& e : out.edges) {
      ++deg[e.a];
      ++deg[e.b];
    }
    for (const auto& [p, dg] : deg)
      if (dg % 2 != 0 && p != keep) out.edges.push_back({p, keep});
  }
  return out;
}

PortalGraph make_light(const PortalGraph& g, const HierarchicalDecomposition& d, int /*m*/, int r, bool tour) {
  PortalGraph cur = g;
  for (int h = d.top() - 1; h >= 0; --h)
    for (int c : d.at_height(h)) cur = patch_cluster(cur, d, c, r, tour);
  return cur;
}

bool is_light(const PortalGraph& g, const HierarchicalDecomposition& d, int m, int r) {
  if (!is_portal_respecting(g, d)) return false;
  for (const Cluster& c : d.clusters()) {
    if (static_cast<int>(d.portals(c.id).size()) > m) return false;
    if (static_cast<int>(active_portals(g, d, c.id).size()) > r) return false;
  }
  return true;
}

}  // namespace pcx
