#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pcx/error.hpp"

namespace pcx {

using PointId = std::int32_t;

/// Absolute tolerance used by every cost and distance comparison.
inline constexpr double kTolerance = 1e-9;

/// A finite metric space over points 0..n-1.
///
/// Distances are held as a dense matrix regardless of the source. Points built
/// from coordinates use the Euclidean norm and remember the coordinates so the
/// instance can be serialized again.
class MetricSpace {
 public:
  static MetricSpace from_coordinates(std::vector<std::vector<double>> coords, int k);
  /// Throws InvalidInput unless the matrix is square, symmetric, has zero
  /// diagonal, non-negative entries and satisfies the triangle inequality.
  static MetricSpace from_matrix(const std::vector<std::vector<double>>& matrix, int k);

  int size() const { return n_; }
  int doubling_dimension() const { return k_; }
  double dist(PointId a, PointId b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }

  bool has_coordinates() const { return !coords_.empty(); }
  const std::vector<std::vector<double>>& coordinates() const { return coords_; }

  double diameter() const;
  /// Smallest strictly positive distance, or 0 for spaces without one.
  double min_positive_distance() const;

  /// Every distance multiplied by factor (coordinates too).
  MetricSpace scaled(double factor) const;
  /// Sub-space on the listed points, renumbered 0..ids.size()-1 in order.
  MetricSpace restricted(std::span<const PointId> ids) const;

  /// Exhaustive triangle-inequality check (O(n^3)).
  bool satisfies_triangle_inequality(double tol = kTolerance) const;

 private:
  MetricSpace() = default;
  int n_ = 0;
  int k_ = 1;
  std::vector<double> d_;
  std::vector<std::vector<double>> coords_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

/// Outcome of rescaling: the new space plus the maps needed to carry
/// solutions back into the original space.
struct RescaledSpace {
  MetricSpace space;
  double scale = 1.0;
  /// For each new point, the original point it represents.
  std::vector<PointId> representative;
  /// For each original point, the new point it was snapped to, or -1 if it
  /// was dropped for lying too far from the anchor.
  std::vector<PointId> snapped_to;
};

/// Multiplies distances by 32 n^2 / (eps d(u,v)), drops points farther than
/// n d(u,v) from u and snaps the survivors to a greedy (eps R / 32 n^2)-net.
/// n is the number of terminals the guess is made for.
RescaledSpace rescale(const MetricSpace& space, PointId u, PointId v, double eps, int n);

/// Nested nets N_L ⊆ ... ⊆ N_0 = X with N_i an s^i-net of N_{i-1}.
struct HierarchicalNets {
  double s = 4.0;
  int top = 1;  // L
  std::vector<std::vector<PointId>> levels;  // levels[i] sorted ascending
  std::vector<std::vector<char>> member;     // member[i][p]

  const std::vector<PointId>& level(int i) const { return levels[static_cast<std::size_t>(clamp(i))]; }
  bool contains(int i, PointId p) const { return member[static_cast<std::size_t>(clamp(i))][p] != 0; }
  double scale(int i) const;  // s^i
  int clamp(int i) const { return i < 0 ? 0 : (i > top ? top : i); }
};

struct NetOptions {
  double s = 4.0;
  /// Requested top height; 0 means ceil(log_s(diameter)) + 1. The height is
  /// raised until the top net is a single point.
  int top = 0;
  /// Allows s < 4 (tests use s = 2).
  bool allow_small_s = false;
};

/// Greedy construction scanning points in ascending id order.
HierarchicalNets build_nets(const MetricSpace& space, const NetOptions& options);

/// The scale base (log n)^(c/k), floored at 4.
double log_scale_base(int n, int k, double c);

/// A rho-packing of diameter at most R in dimension k has at most
/// (2R/rho)^k points.
bool check_packing_bound(std::span<const PointId> netpoints, double rho, double R, int k);

/// Packing, cover and nesting invariants; returns a description of the first
/// violation.
std::optional<std::string> check_net_invariants(const MetricSpace& space, const HierarchicalNets& nets);

struct NetNode {
  PointId point = 0;
  int height = 0;
  friend bool operator==(const NetNode&, const NetNode&) = default;
  friend auto operator<=>(const NetNode&, const NetNode&) = default;
};

/// Parent pointers over (u, i) nodes: the parent of (u, i) is the nearest point
/// of N_{i+1} (smallest id on ties).
class NetTree {
 public:
  NetTree(SpacePtr space, HierarchicalNets nets);

  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const HierarchicalNets& nets() const { return nets_; }
  int top() const { return nets_.top; }
  double s() const { return nets_.s; }

  NetNode parent(NetNode node) const;
  /// Height-j ancestor of (u, 0); heights below 0 map to (u, 0).
  NetNode anc(PointId u, int j) const;
  NetNode root() const { return {nets_.levels.back().front(), nets_.top}; }

 private:
  SpacePtr space_;
  HierarchicalNets nets_;
  std::vector<std::vector<PointId>> parent_;  // parent_[i][u] for u in N_i, i < L
  std::vector<std::vector<PointId>> anc_;     // anc_[j][u] = point of anc(u, j)
};

using TreePtr = std::shared_ptr<const NetTree>;

}  // namespace pcx
