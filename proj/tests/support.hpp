#pragma once

// Independent brute-force references and small builders shared by the tests.

#include <algorithm>
#include <bit>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "pcx/instance.hpp"

namespace testing {

using namespace pcx;

inline SpacePtr line_space(const std::vector<double>& xs) {
  std::vector<std::vector<double>> c;
  for (double x : xs) c.push_back({x});
  return std::make_shared<const MetricSpace>(MetricSpace::from_coordinates(c, 1));
}

inline SpacePtr plane_space(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::vector<double>> c;
  for (auto [x, y] : pts) c.push_back({x, y});
  return std::make_shared<const MetricSpace>(MetricSpace::from_coordinates(c, 2));
}

inline SpacePtr random_plane(std::mt19937_64& rng, int n, double side = 10.0) {
  std::uniform_real_distribution<double> u(0, side);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    double x = u(rng);
    double y = u(rng);
    pts.push_back({x, y});
  }
  return plane_space(pts);
}

inline PcxInstance all_terminals(Variant v, SpacePtr sp, std::vector<double> pen) {
  std::vector<PointId> t(pen.size());
  std::iota(t.begin(), t.end(), 0);
  return PcxInstance(v, std::move(sp), t, std::move(pen));
}

inline PcxInstance random_instance(std::mt19937_64& rng, Variant v, int n, double side = 10.0) {
  auto sp = random_plane(rng, n, side);
  std::uniform_real_distribution<double> u(0, sp->diameter());
  std::vector<double> pen(static_cast<std::size_t>(n));
  for (double& p : pen) p = u(rng);
  return all_terminals(v, sp, pen);
}

// Every ordering of every terminal subset; n <= 8.
inline double brute_pctsp(const PcxInstance& inst) {
  const auto& T = inst.terminals();
  const int t = static_cast<int>(T.size());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << t); ++mask) {
    std::vector<PointId> s;
    double pen = 0;
    for (int i = 0; i < t; ++i) {
      if (mask >> i & 1u) s.push_back(T[i]);
      else pen += inst.penalty(T[i]);
    }
    double tour = std::numeric_limits<double>::infinity();
    if (s.size() <= 1) {
      tour = 0;
    } else {
      std::sort(s.begin(), s.end());
      do {
        double w = 0;
        for (std::size_t i = 0; i < s.size(); ++i) w += inst.space().dist(s[i], s[(i + 1) % s.size()]);
        tour = std::min(tour, w);
      } while (std::next_permutation(s.begin(), s.end()));
    }
    best = std::min(best, tour + pen);
  }
  return best;
}

// Every edge subset of the complete graph that is connected; n <= 6.
inline double brute_pcstp(const PcxInstance& inst) {
  const int n = inst.num_points();
  std::vector<Edge> all;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (inst.usable(a) && inst.usable(b)) all.emplace_back(a, b);
  double best = cost(inst, Solution{});
  for (PointId p = 0; p < n; ++p)
    if (inst.usable(p)) best = std::min(best, cost(inst, Solution::self_loop(p)));
  for (unsigned long mask = 1; mask < (1ul << all.size()); ++mask) {
    Solution f;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1ul) f.edges.push_back(all[i]);
    if (!is_connected(f)) continue;
    best = std::min(best, cost(inst, f));
  }
  return best;
}

inline TreePtr make_tree(const SpacePtr& sp, double s = 4.0, int top = 0) {
  NetOptions o;
  o.s = s;
  o.top = top;
  o.allow_small_s = s < 4;
  return std::make_shared<const NetTree>(sp, build_nets(*sp, o));
}

// A random cycle (or doubled edge, or self-loop) on a prefix of a shuffle.
inline Solution random_tour(std::mt19937_64& rng, int n) {
  std::vector<PointId> pts(static_cast<std::size_t>(n));
  std::iota(pts.begin(), pts.end(), 0);
  std::shuffle(pts.begin(), pts.end(), rng);
  int len = 1 + static_cast<int>(rng() % n);
  if (len == 1) return Solution::self_loop(pts[0]);
  Solution f;
  for (int i = 0; i < len; ++i) f.edges.emplace_back(pts[i], pts[(i + 1) % len]);
  if (len == 2) f.edges.resize(2);
  return f;
}

// A random tree grown by attaching each new point to an earlier one.
inline Solution random_tree(std::mt19937_64& rng, int n) {
  std::vector<PointId> pts(static_cast<std::size_t>(n));
  std::iota(pts.begin(), pts.end(), 0);
  std::shuffle(pts.begin(), pts.end(), rng);
  int len = 1 + static_cast<int>(rng() % n);
  if (len == 1) return Solution::self_loop(pts[0]);
  Solution f;
  for (int i = 1; i < len; ++i) f.edges.emplace_back(pts[i], pts[rng() % i]);
  return f;
}

}  // namespace testing
