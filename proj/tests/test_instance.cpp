#include <random>

#include "doctest.h"
#include "pcx/generate.hpp"
#include "support.hpp"

using namespace pcx;
using namespace testing;

TEST_CASE("cost of simple solutions") {
  auto sp = line_space({0, 3});
  PcxInstance inst(Variant::kPctsp, sp, {0, 1}, {5, 7});
  CHECK(cost(inst, Solution::self_loop(0)) == 7);
  CHECK(cost(inst, Solution{}) == 12);
  CHECK(cost(inst, Solution{{Edge(0, 1), Edge(0, 1)}, {}}) == 6);

  PcxInstance must(Variant::kPctsp, sp, {0, 1}, {kMustVisit, 7});
  CHECK(std::isinf(cost(must, Solution::self_loop(1))));

  PcxInstance signed_pen(Variant::kPcstp, sp, {0, 1}, {-2, 7}, true);
  CHECK(cost(signed_pen, Solution::self_loop(1)) == -2);
  CHECK(cost(signed_pen, Solution::self_loop(0)) == 7);
}

TEST_CASE("user instances reject negative penalties") {
  auto sp = line_space({0, 3});
  CHECK_THROWS_AS(PcxInstance(Variant::kPctsp, sp, {0, 1}, {-1, 1}), InvalidInput);
  CHECK_THROWS_AS(PcxInstance(Variant::kPctsp, sp, {0, 0}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(PcxInstance(Variant::kPctsp, sp, {0, 2}, {1, 1}), InvalidInput);
}

TEST_CASE("validate per variant") {
  auto sp = line_space({0, 3, 5});
  PcxInstance tour(Variant::kPctsp, sp, {0, 1}, {1, 1});
  PcxInstance tree(Variant::kPcstp, sp, {0, 1}, {1, 1});
  Solution single{{Edge(0, 1)}, {}};
  CHECK_FALSE(validate(tour, single).ok);
  CHECK(validate(tree, single).ok);
  Solution doubled{{Edge(0, 1), Edge(0, 1)}, {}};
  CHECK(validate(tour, doubled).ok);
  Solution split{{Edge(0, 1)}, {2}};
  CHECK_FALSE(validate(tree, split).ok);
  CHECK(validate(tour, Solution::self_loop(2)).ok);
  Solution loops{{}, {0, 2}};
  CHECK_FALSE(validate(tree, loops).ok);
}

TEST_CASE("Euler circuit and shortcut") {
  Solution f{{Edge(0, 1), Edge(1, 2), Edge(2, 0), Edge(0, 3), Edge(3, 0)}, {}};
  auto walk = euler_circuit(f);
  CHECK(walk.size() == 5);
  auto cyc = shortcut_to_cycle(walk);
  CHECK(cyc.vertices() == std::vector<PointId>{0, 1, 2, 3});
  CHECK(cyc.edges.size() == 4);
  CHECK(all_degrees_even(cyc));
}

TEST_CASE("net-respecting conversion") {
  auto sp = line_space({0, 100});
  auto tree = NetTree(sp, build_nets(*sp, {}));
  Solution e{{Edge(0, 1)}, {}};
  auto out = make_net_respecting(e, tree, 0.5);
  CHECK(out == e);
  CHECK(out.weight(*sp) - e.weight(*sp) <= 4 * 16);
  CHECK(make_net_respecting(Solution::self_loop(1), tree, 0.5) == Solution::self_loop(1));

  std::mt19937_64 rng(2);
  int flagged = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + trial % 10;
    Variant v = trial % 2 ? Variant::kPctsp : Variant::kPcstp;
    auto inst = random_instance(rng, v, n, 200);
    NetTree nt(inst.space_ptr(), build_nets(inst.space(), {}));
    // Random closed walk (tour) or random tree.
    std::vector<PointId> pts(static_cast<std::size_t>(n));
    std::iota(pts.begin(), pts.end(), 0);
    std::shuffle(pts.begin(), pts.end(), rng);
    int len = 2 + static_cast<int>(rng() % (n - 1));
    Solution f;
    for (int i = 0; i < len; ++i) {
      if (v == Variant::kPctsp) f.edges.emplace_back(pts[i], pts[(i + 1) % len]);
      else if (i > 0) f.edges.emplace_back(pts[i], pts[rng() % i]);
    }
    const double eps_nr = 0.1 + 0.8 * (trial % 7) / 7.0;
    auto g = make_net_respecting(f, nt, eps_nr);
    CHECK(is_net_respecting(g, nt, eps_nr));
    CHECK(validate(inst, g).ok == validate(inst, f).ok);
    for (PointId p : f.vertices()) CHECK(g.covers(p));
    if (g.weight(inst.space()) > (1 + 8 * eps_nr) * f.weight(inst.space()) + 1e-9) ++flagged;
  }
  CHECK(flagged == 0);
}

TEST_CASE("generator families") {
  GenerateParams p;
  auto fig = generate("line_two_cluster", p);
  CHECK(fig.terminals().size() == 9);
  CHECK(fig.space().coordinates()[5][0] == 5);
  CHECK(fig.space().coordinates()[6][0] == 10005);
  CHECK(fig.space().coordinates()[8][0] == 10007);
  p.n = 1;
  CHECK(generate("uniform2d", p).num_points() == 1);
  p.n = 6;
  p.seed = 7;
  auto m = generate("matrix_random_metric", p);
  CHECK(m.space().satisfies_triangle_inequality());
  CHECK_THROWS_AS(generate("nope", p), InvalidInput);
}
