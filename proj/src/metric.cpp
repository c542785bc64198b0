#include "pcx/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pcx {

MetricSpace MetricSpace::from_coordinates(std::vector<std::vector<double>> coords, int k) {
  if (k < 1) throw InvalidInput("doubling dimension must be positive");
  MetricSpace m;
  m.n_ = static_cast<int>(coords.size());
  m.k_ = k;
  std::size_t dim = coords.empty() ? 0 : coords.front().size();
  for (const auto& c : coords) {
    if (c.size() != dim) throw InvalidInput("points have mixed dimensions");
    for (double x : c)
      if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate");
  }
  m.d_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
  for (int a = 0; a < m.n_; ++a) {
    for (int b = a + 1; b < m.n_; ++b) {
      double sq = 0;
      for (std::size_t t = 0; t < dim; ++t) {
        double diff = coords[a][t] - coords[b][t];
        sq += diff * diff;
      }
      double d = std::sqrt(sq);
      m.d_[static_cast<std::size_t>(a) * m.n_ + b] = d;
      m.d_[static_cast<std::size_t>(b) * m.n_ + a] = d;
    }
  }
  m.coords_ = std::move(coords);
  return m;
}

MetricSpace MetricSpace::from_matrix(const std::vector<std::vector<double>>& matrix, int k) {
  if (k < 1) throw InvalidInput("doubling dimension must be positive");
  MetricSpace m;
  m.n_ = static_cast<int>(matrix.size());
  m.k_ = k;
  m.d_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
  for (int a = 0; a < m.n_; ++a) {
    if (static_cast<int>(matrix[a].size()) != m.n_) throw InvalidInput("distance matrix is not square");
    for (int b = 0; b < m.n_; ++b) {
      double d = matrix[a][b];
      if (!std::isfinite(d) || d < 0) throw InvalidInput("distances must be finite and non-negative");
      m.d_[static_cast<std::size_t>(a) * m.n_ + b] = d;
    }
  }
  for (int a = 0; a < m.n_; ++a) {
    if (m.dist(a, a) != 0) throw InvalidInput("distance matrix has a non-zero diagonal");
    for (int b = a + 1; b < m.n_; ++b)
      if (std::abs(m.dist(a, b) - m.dist(b, a)) > kTolerance) throw InvalidInput("distance matrix is not symmetric");
  }
  if (!m.satisfies_triangle_inequality()) throw InvalidInput("distance matrix violates the triangle inequality");
  return m;
}

double MetricSpace::diameter() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }

double MetricSpace::min_positive_distance() const {
  double best = 0;
  for (double d : d_)
    if (d > 0 && (best == 0 || d < best)) best = d;
  return best;
}

MetricSpace MetricSpace::scaled(double factor) const {
  MetricSpace m = *this;
  for (double& d : m.d_) d *= factor;
  for (auto& c : m.coords_)
    for (double& x : c) x *= factor;
  return m;
}

MetricSpace MetricSpace::restricted(std::span<const PointId> ids) const {
  MetricSpace m;
  m.n_ = static_cast<int>(ids.size());
  m.k_ = k_;
  m.d_.resize(static_cast<std::size_t>(m.n_) * m.n_);
  for (int a = 0; a < m.n_; ++a)
    for (int b = 0; b < m.n_; ++b) m.d_[static_cast<std::size_t>(a) * m.n_ + b] = dist(ids[a], ids[b]);
  if (!coords_.empty())
    for (PointId id : ids) m.coords_.push_back(coords_[id]);
  return m;
}

bool MetricSpace::satisfies_triangle_inequality(double tol) const {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (dist(a, c) > dist(a, b) + dist(b, c) + tol) return false;
  return true;
}

RescaledSpace rescale(const MetricSpace& space, PointId u, PointId v, double eps, int n) {
  if (u == v || space.dist(u, v) <= 0) throw DegenerateGuess("rescaling guess needs two points at positive distance");
  if (!(eps > 0 && eps < 1)) throw InvalidInput("eps must lie in (0,1)");
  if (n < 1) throw InvalidInput("terminal count must be positive");
  const double R = space.dist(u, v);
  const double nn = static_cast<double>(n) * n;
  const double factor = 32.0 * nn / (eps * R);

  // Greedy net of radius eps R / 32 n^2 (radius 1 after scaling) over the
  // points kept, anchored at u.
  std::vector<PointId> kept;
  for (PointId p = 0; p < space.size(); ++p)
    if (space.dist(u, p) <= n * R) kept.push_back(p);
  std::stable_partition(kept.begin(), kept.end(), [u](PointId p) { return p == u; });
  const double radius = 1.0 / factor;
  std::vector<PointId> net;
  for (PointId p : kept) {
    bool covered = false;
    for (PointId c : net)
      if (space.dist(p, c) <= radius) {
        covered = true;
        break;
      }
    if (!covered) net.push_back(p);
  }
  std::sort(net.begin(), net.end());

  RescaledSpace out{space.restricted(net).scaled(factor), factor, net, std::vector<PointId>(space.size(), -1)};
  for (PointId p : kept) {
    PointId best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(net.size()); ++i) {
      double d = space.dist(p, net[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    out.snapped_to[p] = best;
  }
  return out;
}

double HierarchicalNets::scale(int i) const { return std::pow(s, i); }

HierarchicalNets build_nets(const MetricSpace& space, const NetOptions& options) {
  if (options.s < 4 && !(options.allow_small_s && options.s > 1)) throw InvalidInput("scale base s must be at least 4");
  HierarchicalNets nets;
  nets.s = options.s;
  int top = options.top;
  if (top <= 0) {
    double diam = space.diameter();
    top = diam > 1 ? static_cast<int>(std::ceil(std::log(diam) / std::log(options.s))) + 1 : 1;
  }
  top = std::max(top, 1);

  std::vector<PointId> all(static_cast<std::size_t>(space.size()));
  for (PointId p = 0; p < space.size(); ++p) all[p] = p;
  nets.levels.push_back(all);
  for (int i = 1;; ++i) {
    const double r = std::pow(options.s, i);
    std::vector<PointId> next;
    for (PointId p : nets.levels.back()) {
      bool covered = false;
      for (PointId c : next)
        if (space.dist(p, c) <= r) {
          covered = true;
          break;
        }
      if (!covered) next.push_back(p);
    }
    nets.levels.push_back(std::move(next));
    if (i >= top && nets.levels.back().size() <= 1) {
      top = i;
      break;
    }
  }
  nets.top = top;
  nets.member.assign(nets.levels.size(), std::vector<char>(static_cast<std::size_t>(space.size()), 0));
  for (std::size_t i = 0; i < nets.levels.size(); ++i)
    for (PointId p : nets.levels[i]) nets.member[i][p] = 1;
  return nets;
}

double log_scale_base(int n, int k, double c) {
  double base = std::pow(std::log(std::max(n, 2)), c / std::max(k, 1));
  return std::max(4.0, base);
}

bool check_packing_bound(std::span<const PointId> netpoints, double rho, double R, int k) {
  if (netpoints.size() <= 1) return true;
  return static_cast<double>(netpoints.size()) <= std::pow(2.0 * R / rho, k) + kTolerance;
}

std::optional<std::string> check_net_invariants(const MetricSpace& space, const HierarchicalNets& nets) {
  std::ostringstream why;
  if (nets.levels.empty() || static_cast<int>(nets.levels[0].size()) != space.size()) return "N_0 is not the whole space";
  if (nets.levels.back().size() != 1 && space.size() > 0) return "top net is not a single point";
  for (int i = 1; i <= nets.top; ++i) {
    const double r = nets.scale(i);
    for (PointId p : nets.levels[i])
      if (!nets.contains(i - 1, p)) {
        why << "point " << p << " in N_" << i << " but not in N_" << i - 1;
        return why.str();
      }
    const auto& lvl = nets.levels[i];
    for (std::size_t a = 0; a < lvl.size(); ++a)
      for (std::size_t b = a + 1; b < lvl.size(); ++b)
        if (space.dist(lvl[a], lvl[b]) <= r) {
          why << "N_" << i << " is not an s^i-packing at " << lvl[a] << "," << lvl[b];
          return why.str();
        }
    for (PointId p : nets.levels[i - 1]) {
      bool covered = false;
      for (PointId c : lvl)
        if (space.dist(p, c) <= r + kTolerance) {
          covered = true;
          break;
        }
      if (!covered) {
        why << "N_" << i << " does not cover point " << p;
        return why.str();
      }
    }
  }
  return std::nullopt;
}

NetTree::NetTree(SpacePtr space, HierarchicalNets nets) : space_(std::move(space)), nets_(std::move(nets)) {
  const int n = space_->size();
  const int L = nets_.top;
  parent_.assign(static_cast<std::size_t>(L), std::vector<PointId>(static_cast<std::size_t>(n), -1));
  for (int i = 0; i < L; ++i) {
    for (PointId u : nets_.levels[i]) {
      PointId best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (PointId v : nets_.levels[i + 1]) {
        double d = space_->dist(u, v);
        if (d < bd) {
          bd = d;
          best = v;
        }
      }
      parent_[i][u] = best;
    }
  }
  anc_.assign(static_cast<std::size_t>(L) + 1, std::vector<PointId>(static_cast<std::size_t>(n), -1));
  for (PointId u = 0; u < n; ++u) {
    anc_[0][u] = u;
    for (int j = 1; j <= L; ++j) anc_[j][u] = parent_[j - 1][anc_[j - 1][u]];
  }
}

NetNode NetTree::parent(NetNode node) const {
  if (node.height >= nets_.top) return node;
  int h = std::max(node.height, 0);
  return {parent_[h][node.point], h + 1};
}

NetNode NetTree::anc(PointId u, int j) const {
  if (j <= 0) return {u, 0};
  if (j > nets_.top) j = nets_.top;
  return {anc_[j][u], j};
}

}  // namespace pcx
