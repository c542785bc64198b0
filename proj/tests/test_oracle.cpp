#include <cmath>

#include "doctest.h"
#include "pcx/generate.hpp"
#include "pcx/oracle.hpp"
#include "support.hpp"

using namespace pcx;
using namespace testing;

TEST_CASE("tour oracle on hand instances") {
  auto three = all_terminals(Variant::kPctsp, line_space({0, 1, 2}), {10, 10, 10});
  CHECK(exact_pctsp(three).cost == doctest::Approx(4));

  auto two = all_terminals(Variant::kPctsp, line_space({0, 4}), {1, 1});
  auto r = exact_pctsp(two);
  CHECK(r.cost == doctest::Approx(1));
  CHECK(r.solution.self_loops.size() == 1);

  auto must = PcxInstance(Variant::kPctsp, line_space({0, 4}), {0, 1}, {kMustVisit, 1});
  CHECK(exact_pctsp(must).cost == doctest::Approx(1));
  auto both = PcxInstance(Variant::kPctsp, line_space({0, 4}), {0, 1}, {kMustVisit, kMustVisit});
  CHECK(exact_pctsp(both).cost == doctest::Approx(8));
}

TEST_CASE("tree oracle on hand instances") {
  auto one = all_terminals(Variant::kPcstp, line_space({3}), {5});
  CHECK(exact_pcstp(one).cost == 0);

  const double h = std::sqrt(3.0) / 2;
  auto tri = PcxInstance(Variant::kPcstp, plane_space({{0, 0}, {1, 0}, {0.5, h}, {0.5, h / 3}}), {0, 1, 2},
                         {100, 100, 100});
  auto r = exact_pcstp(tri);
  CHECK(r.cost == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.solution.covers(3));
}

TEST_CASE("two-cluster line family") {
  GenerateParams p;
  p.m = 3;
  p.t = 100;
  p.l = 10000;
  p.variant = Variant::kPctsp;
  CHECK(exact_pctsp(generate("line_two_cluster", p)).cost == doctest::Approx(310));
  p.variant = Variant::kPcstp;
  CHECK(exact_pcstp(generate("line_two_cluster", p)).cost == doctest::Approx(305));
}

TEST_CASE("oracles match brute force and witness their costs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 6;
    auto tour = random_instance(rng, Variant::kPctsp, n);
    auto tr = exact_pctsp(tour);
    CHECK(tr.cost == doctest::Approx(brute_pctsp(tour)).epsilon(1e-12));
    CHECK(validate(tour, tr.solution).ok);
    CHECK(cost(tour, tr.solution) == tr.cost);

    auto tree = PcxInstance(Variant::kPcstp, tour.space_ptr(), tour.terminals(),
                            [&] {
                              std::vector<double> p;
                              for (PointId t : tour.terminals()) p.push_back(tour.penalty(t));
                              return p;
                            }());
    auto sr = exact_pcstp(tree);
    CHECK(sr.cost == doctest::Approx(brute_pcstp(tree)).epsilon(1e-12));
    CHECK(validate(tree, sr.solution).ok);
    CHECK(cost(tree, sr.solution) == sr.cost);

    CHECK(sr.cost <= tr.cost + 1e-9);
    CHECK(tr.cost <= 2 * sr.cost + 1e-9);
  }
}

TEST_CASE("tree oracle with Steiner points and signed penalties") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto sp = random_plane(rng, 6);
    std::uniform_real_distribution<double> u(-5, 10);
    std::vector<PointId> terms{0, 1, 2, 3};
    std::vector<double> pen;
    for (int i = 0; i < 4; ++i) pen.push_back(u(rng));
    PcxInstance inst(Variant::kPcstp, sp, terms, pen, true);
    if (trial % 2) inst.forbid(5);
    auto r = exact_pcstp(inst);
    CHECK(r.cost == doctest::Approx(brute_pcstp(inst)).epsilon(1e-12));
    CHECK(validate(inst, r.solution).ok);
  }
}

TEST_CASE("size guards") {
  std::mt19937_64 rng(1);
  auto big = random_instance(rng, Variant::kPcstp, 11);
  CHECK_THROWS_AS(exact_pcstp(big), SizeGuard);
  auto big_tour = random_instance(rng, Variant::kPctsp, 16);
  CHECK_THROWS_AS(exact_pctsp(big_tour), SizeGuard);
}
