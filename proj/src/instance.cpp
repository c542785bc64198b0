#include "pcx/instance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace pcx {

const char* variant_name(Variant v) { return v == Variant::kPctsp ? "pctsp" : "pcstp"; }

Variant parse_variant(const std::string& name) {
  if (name == "pctsp" || name == "PCTSP") return Variant::kPctsp;
  if (name == "pcstp" || name == "PCSTP") return Variant::kPcstp;
  throw InvalidInput("unknown variant '" + name + "'");
}

PcxInstance::PcxInstance(Variant variant, SpacePtr space, std::vector<PointId> terminals, std::vector<double> penalties,
                         bool internal)
    : variant_(variant), space_(std::move(space)), internal_(internal) {
  if (!space_) throw InvalidInput("instance needs a metric space");
  if (terminals.size() != penalties.size()) throw InvalidInput("terminal and penalty counts differ");
  const int n = space_->size();
  terminal_.assign(static_cast<std::size_t>(n), 0);
  penalty_.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    PointId t = terminals[i];
    double p = penalties[i];
    if (t < 0 || t >= n) throw InvalidInput("terminal index out of range");
    if (terminal_[t]) throw InvalidInput("duplicate terminal");
    if (std::isnan(p) || p == -std::numeric_limits<double>::infinity()) throw InvalidInput("invalid penalty");
    if (p < 0 && !internal_) throw InvalidInput("negative penalty on a user instance");
    terminal_[t] = 1;
    penalty_[t] = p;
  }
  terminals_ = std::move(terminals);
  std::sort(terminals_.begin(), terminals_.end());
}

void PcxInstance::forbid(PointId p) {
  if (forbidden_.empty()) forbidden_.assign(static_cast<std::size_t>(num_points()), 0);
  forbidden_[p] = 1;
}

PcxInstance PcxInstance::with_terminals(const std::vector<PointId>& keep) const {
  std::vector<double> pen;
  pen.reserve(keep.size());
  for (PointId t : keep) {
    if (!is_terminal(t)) throw InvalidInput("point " + std::to_string(t) + " is not a terminal");
    pen.push_back(penalty_[t]);
  }
  PcxInstance out(variant_, space_, keep, std::move(pen), internal_);
  out.forbidden_ = forbidden_;
  return out;
}

double PcxInstance::total_penalty() const { return penalty_sum(terminals_); }

double PcxInstance::penalty_sum(const std::vector<PointId>& points) const {
  double s = 0;
  for (PointId p : points) s += penalty_[p];
  return s;
}

std::vector<PointId> Solution::vertices() const {
  std::vector<PointId> v = self_loops;
  for (const Edge& e : edges) {
    v.push_back(e.a);
    v.push_back(e.b);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool Solution::covers(PointId p) const {
  if (std::find(self_loops.begin(), self_loops.end(), p) != self_loops.end()) return true;
  return std::any_of(edges.begin(), edges.end(), [p](const Edge& e) { return e.a == p || e.b == p; });
}

double Solution::weight(const MetricSpace& space) const {
  double w = 0;
  for (const Edge& e : edges) w += space.dist(e.a, e.b);
  return w;
}

void Solution::normalize() {
  std::sort(edges.begin(), edges.end());
  std::sort(self_loops.begin(), self_loops.end());
  self_loops.erase(std::unique(self_loops.begin(), self_loops.end()), self_loops.end());
  if (!edges.empty()) {
    std::erase_if(self_loops, [this](PointId p) {
      return std::any_of(edges.begin(), edges.end(), [p](const Edge& e) { return e.a == p || e.b == p; });
    });
  }
}

double cost(const PcxInstance& inst, const Solution& f) {
  const auto visited = f.vertices();
  double total = f.weight(inst.space());
  for (PointId t : inst.terminals())
    if (!std::binary_search(visited.begin(), visited.end(), t)) total += inst.penalty(t);
  return total;
}

namespace {

std::vector<int> component_labels(const Solution& f, const std::vector<PointId>& verts) {
  std::vector<int> parent(verts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto idx = [&](PointId p) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), p) - verts.begin());
  };
  for (const Edge& e : f.edges) parent[find(idx(e.a))] = find(idx(e.b));
  std::vector<int> label(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) label[i] = find(static_cast<int>(i));
  return label;
}

}  // namespace

bool is_connected(const Solution& f) {
  const auto verts = f.vertices();
  if (verts.size() <= 1) return true;
  const auto label = component_labels(f, verts);
  return std::all_of(label.begin(), label.end(), [&](int l) { return l == label[0]; });
}

bool all_degrees_even(const Solution& f) {
  std::vector<std::pair<PointId, int>> deg;
  std::vector<PointId> ends;
  for (const Edge& e : f.edges) {
    ends.push_back(e.a);
    ends.push_back(e.b);
  }
  std::sort(ends.begin(), ends.end());
  for (std::size_t i = 0; i < ends.size();) {
    std::size_t j = i;
    while (j < ends.size() && ends[j] == ends[i]) ++j;
    if ((j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

ValidationReport validate(const PcxInstance& inst, const Solution& f) {
  const int n = inst.num_points();
  auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
  for (const Edge& e : f.edges) {
    if (e.a < 0 || e.b >= n) return fail("edge endpoint out of range");
    if (e.a == e.b) return fail("edge {" + std::to_string(e.a) + "," + std::to_string(e.b) + "} is a loop; use self_loops");
  }
  for (PointId p : f.self_loops)
    if (p < 0 || p >= n) return fail("self-loop vertex out of range");
  for (PointId p : f.vertices())
    if (!inst.usable(p)) return fail("solution visits unusable point " + std::to_string(p));
  if (f.edges.empty() && f.self_loops.size() > 1) return fail("several isolated self-loops are not connected");
  if (!is_connected(f)) return fail("solution is disconnected");
  if (inst.variant() == Variant::kPctsp) {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const Edge& e : f.edges) {
      ++deg[e.a];
      ++deg[e.b];
    }
    for (PointId p = 0; p < n; ++p)
      if (deg[p] % 2 != 0) return fail("odd degree " + std::to_string(deg[p]) + " at vertex " + std::to_string(p));
  }
  return {};
}

std::vector<PointId> euler_circuit(const Solution& f) {
  if (f.edges.empty()) {
    if (f.self_loops.empty()) return {};
    return {f.self_loops.front()};
  }
  const auto verts = f.vertices();
  auto idx = [&](PointId p) {
    return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), p) - verts.begin());
  };
  std::vector<std::vector<std::pair<PointId, std::size_t>>> adj(verts.size());
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    adj[idx(f.edges[i].a)].push_back({f.edges[i].b, i});
    adj[idx(f.edges[i].b)].push_back({f.edges[i].a, i});
  }
  std::vector<char> used(f.edges.size(), 0);
  std::vector<std::size_t> next(verts.size(), 0);
  std::vector<PointId> stack{f.edges.front().a};
  std::vector<PointId> circuit;
  while (!stack.empty()) {
    PointId v = stack.back();
    auto& list = adj[idx(v)];
    auto& pos = next[idx(v)];
    while (pos < list.size() && used[list[pos].second]) ++pos;
    if (pos == list.size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      used[list[pos].second] = 1;
      stack.push_back(list[pos].first);
    }
  }
  circuit.pop_back();  // closing repeat of the start vertex
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

Solution shortcut_to_cycle(const std::vector<PointId>& walk) {
  std::vector<PointId> order;
  for (PointId p : walk)
    if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);
  Solution out;
  if (order.size() == 1) {
    out.self_loops.push_back(order.front());
  } else if (order.size() == 2) {
    out.edges = {Edge(order[0], order[1]), Edge(order[0], order[1])};
  } else {
    for (std::size_t i = 0; i < order.size(); ++i) out.edges.emplace_back(order[i], order[(i + 1) % order.size()]);
  }
  out.normalize();
  return out;
}

namespace {

// Height i with s^i <= eps d < s^{i+1}; heights <= 0 impose no constraint.
int required_height(double d, double s, double eps_nr) {
  double x = eps_nr * d;
  if (x < s) return 0;
  int i = static_cast<int>(std::floor(std::log(x) / std::log(s)));
  // Guard against rounding at exact powers.
  while (std::pow(s, i + 1) <= x) ++i;
  while (i > 0 && std::pow(s, i) > x) --i;
  return i;
}

PointId nearest_in_level(const NetTree& tree, int i, PointId x) {
  const auto& lvl = tree.nets().level(i);
  PointId best = lvl.front();
  double bd = tree.space().dist(x, best);
  for (PointId c : lvl) {
    double d = tree.space().dist(x, c);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

bool edge_respects(const Edge& e, const NetTree& tree, double eps_nr) {
  int i = required_height(tree.space().dist(e.a, e.b), tree.s(), eps_nr);
  if (i <= 0) return true;
  const auto& nets = tree.nets();
  return nets.contains(i, e.a) && nets.contains(i, e.b);
}

}  // namespace

bool is_net_respecting(const Solution& f, const NetTree& tree, double eps_nr) {
  return std::all_of(f.edges.begin(), f.edges.end(), [&](const Edge& e) { return edge_respects(e, tree, eps_nr); });
}

Solution make_net_respecting(const Solution& f, const NetTree& tree, double eps_nr) {
  Solution out;
  out.self_loops = f.self_loops;
  struct Pending {
    PointId x, y;
    int depth;
  };
  std::deque<Pending> work;
  for (const Edge& e : f.edges) work.push_back({e.a, e.b, 0});
  const int max_depth = 4 * (tree.top() + 1);
  while (!work.empty()) {
    auto [x, y, depth] = work.front();
    work.pop_front();
    if (x == y) continue;
    Edge e(x, y);
    if (edge_respects(e, tree, eps_nr) || depth >= max_depth) {
      out.edges.push_back(e);
      continue;
    }
    int i = required_height(tree.space().dist(x, y), tree.s(), eps_nr);
    PointId xp = nearest_in_level(tree, i, x);
    PointId yp = nearest_in_level(tree, i, y);
    // x, x', y', y: interior vertices gain degree 2, so parity is unchanged.
    if (xp != x) work.push_back({x, xp, depth + 1});
    if (xp != yp) work.push_back({xp, yp, depth + 1});
    if (yp != y) work.push_back({yp, y, depth + 1});
    if (xp == x && yp == y) out.edges.push_back(e);
  }
  out.normalize();
  return out;
}

}  // namespace pcx
