#include "doctest.h"
#include "pcx/generate.hpp"
#include "pcx/oracle.hpp"
#include "pcx/primal_dual.hpp"
#include "support.hpp"

using namespace pcx;
using namespace testing;

TEST_CASE("hand instances") {
  for (Variant v : {Variant::kPctsp, Variant::kPcstp}) {
    auto far = all_terminals(v, line_space({0, 4}), {1, 1});
    CHECK(cost(far, gw_solve(far)) <= 2.0 + 1e-9);

    auto near = all_terminals(v, line_space({0, 1}), {10, 10});
    auto f = gw_solve(near);
    CHECK(f.covers(0));
    CHECK(f.covers(1));
    CHECK(cost(near, f) <= 2 * exact_solve(near).cost + 1e-9);

    auto one = all_terminals(v, line_space({7}), {3});
    CHECK(gw_solve(one) == Solution::self_loop(0));

    auto none = PcxInstance(v, line_space({0, 1}), {}, {});
    CHECK(gw_solve(none).empty());
  }
}

TEST_CASE("right cluster of the two-cluster line") {
  auto sp = line_space({0, 1, 2});
  auto inst = all_terminals(Variant::kPcstp, sp, {100, 100, 100});
  CHECK(exact_pcstp(inst).cost == doctest::Approx(2));
  CHECK(cost(inst, gw_solve(inst)) <= 4 + 1e-9);
}

TEST_CASE("factor two against the oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    Variant v = trial % 2 ? Variant::kPctsp : Variant::kPcstp;
    auto inst = random_instance(rng, v, 2 + trial % 8);
    GwTrace trace;
    auto f = gw_solve(inst, &trace);
    REQUIRE(validate(inst, f).ok);
    const double opt = exact_solve(inst).cost;
    CHECK(cost(inst, f) <= 2 * opt + 1e-9);
    CHECK(gw_solve(inst) == f);

    // Dual feasibility of the recorded run.
    const auto& sp = inst.space();
    for (PointId a = 0; a < sp.size(); ++a)
      for (PointId b = a + 1; b < sp.size(); ++b) {
        double load = 0;
        for (const Moat& m : trace.moats) {
          bool ina = std::count(m.members.begin(), m.members.end(), a) > 0;
          bool inb = std::count(m.members.begin(), m.members.end(), b) > 0;
          if (ina != inb) load += m.y;
        }
        CHECK(load <= sp.dist(a, b) + 1e-9);
      }
    for (const Moat& s : trace.moats) {
      double inside = 0;
      for (const Moat& m : trace.moats)
        if (std::includes(s.members.begin(), s.members.end(), m.members.begin(), m.members.end())) inside += m.y;
      double pen = 0;
      for (PointId p : s.members) pen += trace.growth_penalty[p];
      CHECK(inside <= pen + 1e-9);
    }
  }
}

TEST_CASE("must-visit and signed penalties") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    Variant v = trial % 2 ? Variant::kPctsp : Variant::kPcstp;
    auto base = random_instance(rng, v, 3 + trial % 5);
    std::vector<double> pen;
    for (PointId t : base.terminals()) pen.push_back(base.penalty(t));
    pen[0] = kMustVisit;
    PcxInstance must(v, base.space_ptr(), base.terminals(), pen);
    auto f = gw_solve(must);
    CHECK(f.covers(0));
    CHECK(validate(must, f).ok);
    CHECK(cost(must, f) <= 2 * exact_solve(must).cost + 1e-9);

    pen[0] = -3;
    PcxInstance sgn(v, base.space_ptr(), base.terminals(), pen, true);
    CHECK(validate(sgn, gw_solve(sgn)).ok);
  }
}

TEST_CASE("subsolver on balls") {
  GenerateParams p;
  auto fig = generate("line_two_cluster", p);
  NetTree tree(fig.space_ptr(), build_nets(fig.space(), {}));
  CHECK(approx_subsolver(fig, tree, 0, 0, 0.1, 0.5) == Solution::self_loop(0));
  auto sub = ball_instance(fig, 6, 4.0);
  CHECK(sub.terminals() == std::vector<PointId>{6, 7, 8});
  auto f = approx_subsolver(fig, tree, 1, 6, 1.0, 0.5);
  CHECK(validate(fig, f).ok);
  CHECK(cost(sub, f) <= 2 * 4 * 1.5);
  auto empty = PcxInstance(Variant::kPctsp, fig.space_ptr(), {}, {});
  CHECK(approx_subsolver(empty, tree, 1, 0, 4, 0.5).empty());
}
