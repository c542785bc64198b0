// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Optional argument: a directory for the split-record and fallback
// logs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "consistency_oracle.hpp"
#include "pcx/decompose.hpp"
#include "pcx/dp.hpp"
#include "pcx/generate.hpp"
#include "pcx/hierdecomp.hpp"
#include "pcx/io.hpp"
#include "pcx/oracle.hpp"
#include "pcx/primal_dual.hpp"
#include "support.hpp"

using namespace pcx;
using namespace testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Everything the corpus-wide criteria (3, 4, 5, 6, 11) need from the runs.
struct Ledger {
  long records = 0;
  long eq1_violations = 0;
  double eq1_worst_slack = -1e300;
  long progress_violations = 0;
  long step_violations = 0;
  long guesses = 0;
  long critical = 0;
  long fallbacks = 0;
  long gw_checked = 0;
  long gw_violations = 0;
  std::vector<PcxInstance> instances;
  std::ofstream trace;
  std::ofstream fallback_log;

  void add(const PipelineResult& r) {
    for (const auto& rec : r.trace) {
      ++records;
      const double slack = rec.extended_cost - (rec.c1 + rec.c2);
      eq1_worst_slack = std::max(eq1_worst_slack, slack);
      if (!(rec.extended_cost <= rec.c1 + rec.c2 + 1e-9)) ++eq1_violations;
      if (rec.next_critical &&
          (rec.next_critical->first < rec.height || *rec.next_critical == std::make_pair(rec.height, rec.center)))
        ++progress_violations;
      if (trace) trace << format_split_record(rec) << '\n';
      if (rec.lambda_fallback) {
        std::string t;
        for (double x : rec.t_table) t += fmt(" %.6g", x);
        std::printf("  fallback: height %d centre %d lambda %d T-table%s\n", rec.height, rec.center, rec.lambda,
                    t.c_str());
        if (fallback_log) fallback_log << format_split_record(rec) << '\n';
      }
    }
    for (const auto& g : r.guesses) {
      if (g.cached) continue;
      ++guesses;
      if (g.steps > g.step_limit) ++step_violations;
    }
    critical += r.stats.critical_instances;
    fallbacks += r.stats.lambda_fallbacks;
  }

  void check_gw(double gw_cost, double opt) {
    ++gw_checked;
    if (!(gw_cost <= 2 * opt + 1e-9)) ++gw_violations;
  }
};

PcxInstance make(const std::string& family, Variant v, int n, std::uint64_t seed) {
  GenerateParams p;
  p.variant = v;
  p.n = n;
  p.seed = seed;
  return generate(family, p);
}

// 1: best-of-five pipeline ratios on uniform instances.
void approximation(Ledger& led) {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::kPctsp, Variant::kPcstp}) {
    int good = 0;
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      PcxInstance inst = make("uniform2d", v, 4 + i % 7, 10000 + static_cast<std::uint64_t>(i));
      const double opt = exact_solve(inst).cost;
      double best = std::numeric_limits<double>::infinity();
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PipelineConfig c;
        c.solve.eps = 0.5;
        c.solve.seed = seed;
        PipelineResult r = run_pipeline(inst, c);
        led.add(r);
        if (seed == 1) led.check_gw(r.gw_cost, opt);
        best = std::min(best, r.cost);
      }
      const double ratio = opt > 0 ? best / opt : (best <= 1e-12 ? 1.0 : std::numeric_limits<double>::infinity());
      worst = std::max(worst, ratio);
      if (ratio <= 1.5 + 1e-9) ++good;
      led.instances.push_back(std::move(inst));
    }
    ok = ok && good >= 95 && worst <= 2.2 + 1e-9;
    detail += fmt("%s ratio <= 1.5 on %d/100, worst %.4f; ", variant_name(v), good, worst);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs <= 600;
  report(1, ok, detail + fmt("%.1f s (need <= 600)", secs));
}

// 2: the two-cluster line.
void two_cluster(Ledger& led) {
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::kPctsp, Variant::kPcstp}) {
    GenerateParams p;
    p.variant = v;
    p.m = 3;
    p.t = 100;
    p.l = 10000;
    PcxInstance inst = generate("line_two_cluster", p);
    const double opt = exact_solve(inst).cost;
    const double expected = v == Variant::kPctsp ? 310 : 305;
    int good = 0, declining = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      PipelineConfig c;
      c.solve.eps = 0.5;
      c.solve.seed = seed;
      // Critical threshold low enough for both clusters and a brute-force
      // base of two terminals, so the right cluster is split off inside W2.
      c.solve.q0 = 0.5;
      c.solve.base_threshold = 2;
      PipelineResult r = run_pipeline(inst, c);
      led.add(r);
      if (seed == 1) led.check_gw(r.gw_cost, opt);
      if (r.cost <= 1.5 * opt + 1e-9) ++good;
      bool declined = false;
      for (const auto& rec : r.trace)
        if (rec.center >= 6 && !rec.f2_covers_u) declined = true;
      declining += declined;
    }
    const bool vok = std::abs(opt - expected) <= 1e-9 && good >= 9 && declining >= 1;
    ok = ok && vok;
    detail += fmt("%s oracle %.1f (expected %.0f), within 1.5 on %d/10 seeds, right-cluster decline on %d seeds; ",
                  variant_name(v), opt, expected, good, declining);
    led.instances.push_back(std::move(inst));
  }
  report(2, ok, detail);
}

// Extra corpus runs with small critical thresholds, so that splits happen.
void threshold_sweep(Ledger& led) {
  for (Variant v : {Variant::kPctsp, Variant::kPcstp}) {
    std::vector<PcxInstance> set;
    for (int i = 0; i < 30; ++i) set.push_back(make("uniform2d", v, 4 + i % 7, 10000 + static_cast<std::uint64_t>(i)));
    for (int i = 0; i < 10; ++i) set.push_back(make("clustered2d", v, 5 + i % 6, 20000 + static_cast<std::uint64_t>(i)));
    for (int i = 0; i < 10; ++i)
      set.push_back(make("matrix_random_metric", v, 4 + i % 6, 30000 + static_cast<std::uint64_t>(i)));
    for (std::size_t j = 0; j < set.size(); ++j) {
      const PcxInstance& inst = set[j];
      for (double q0 : {4.0, 1.0, 0.2}) {
        PipelineConfig c;
        c.solve.q0 = q0;
        c.solve.seed = 7;
        led.add(run_pipeline(inst, c));
      }
      if (j >= 30) {
        led.check_gw(cost(inst, gw_solve(inst)), exact_solve(inst).cost);
        led.instances.push_back(inst);
      }
    }
  }
}

// 6: nets of every corpus space, before and after the solver's scaling and
// after each rescaling guess.
void nets(const Ledger& led) {
  long nets_checked = 0, bad_nets = 0, balls = 0, bad_balls = 0;
  std::string first;
  auto check = [&](const MetricSpace& raw) {
    const double dmin = raw.min_positive_distance();
    MetricSpace sp = raw.scaled(dmin > 0 ? 1.0 / dmin : 1.0);
    NetOptions o;
    HierarchicalNets nets = build_nets(sp, o);
    ++nets_checked;
    if (auto bad = check_net_invariants(sp, nets)) {
      ++bad_nets;
      if (first.empty()) first = *bad;
    }
    for (int i = 0; i <= nets.top; ++i) {
      const double si = nets.scale(i);
      for (PointId u : nets.level(i)) {
        std::vector<PointId> ball;
        for (PointId v : nets.level(i))
          if (sp.dist(u, v) <= 3 * si) ball.push_back(v);
        ++balls;
        if (!check_packing_bound(ball, si, 6 * si, sp.doubling_dimension())) ++bad_balls;
      }
    }
  };
  for (const auto& inst : led.instances) {
    check(inst.space());
    const auto& T = inst.terminals();
    for (std::size_t a = 0; a < T.size(); ++a)
      for (std::size_t b = a + 1; b < T.size(); ++b)
        if (inst.space().dist(T[a], T[b]) > 0)
          check(rescale(inst.space(), T[a], T[b], 0.5, static_cast<int>(T.size())).space);
  }
  report(6, bad_nets == 0 && bad_balls == 0,
         fmt("%ld nets, %ld invariant failures%s%s; packing bound on %ld (level, ball) pairs, %ld failures",
             nets_checked, bad_nets, first.empty() ? "" : ": ", first.c_str(), balls, bad_balls));
}

// 7: a pair at distance s^i / 10 among spread-out context points.
void cut_probability() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (int i : {1, 2}) {
    const double s = 4, dist = std::pow(s, i) / 10;
    auto sp = line_space({0, dist, 40, 90, 200});
    auto tree = make_tree(sp);
    const int k = sp->doubling_dimension();
    int cut = 0;
    const int trials = 10000;
    for (int seed = 0; seed < trials; ++seed) {
      HierarchicalDecomposition d(tree, {}, static_cast<std::uint64_t>(seed));
      if (d.cluster_of(i, 0) != d.cluster_of(i, 1)) ++cut;
    }
    const double bound = 6.0 * k * dist / std::pow(s, i);
    const double p = std::min(bound, 1.0);
    const double limit = bound + 3 * std::sqrt(p * (1 - p) / trials);
    const double freq = static_cast<double>(cut) / trials;
    ok = ok && freq <= limit;
    detail += fmt("height %d frequency %.4f (limit %.4f); ", i, freq, limit);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs <= 120;
  report(7, ok, detail + fmt("%.1f s (need <= 120)", secs));
}

// 8: portal-respecting, economical and light rewrites of random solutions.
void transform_chain() {
  std::mt19937_64 rng(808);
  long runs = 0, visit_bad = 0, parity_bad = 0, light_bad = 0, econ_longer = 0;
  const int m = 64, r = 3;
  for (int sol = 0; sol < 50; ++sol) {
    const int n = 3 + sol % 8;
    auto sp = random_plane(rng, n, 80);
    auto tree = make_tree(sp);
    const bool tour = sol % 2 == 0;
    Solution f = tour ? random_tour(rng, n) : random_tree(rng, n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      ++runs;
      HierarchicalDecomposition d(tree, {}, seed * 131 + static_cast<std::uint64_t>(sol));
      PortalGraph g = make_portal_respecting(f, d).graph;
      if (tour) {
        PortalGraph e = make_economical(g, d);
        if (e.weight(*sp) > g.weight(*sp) + 1e-9) ++econ_longer;
        g = e;
      }
      PortalGraph light = make_light(g, d, m, r, tour);
      if (light.visited(d) != f.vertices()) ++visit_bad;
      if (tour && !light.eulerian()) ++parity_bad;
      if (!is_light(light, d, m, r)) ++light_bad;
    }
  }
  report(8, visit_bad + parity_bad + light_bad + econ_longer == 0,
         fmt("%ld runs: visit-set changes %ld, parity breaks %ld, not light %ld, economical rewrite longer %ld", runs,
             visit_bad, parity_bad, light_bad, econ_longer));
}

// 9: exhaustive agreement with the brute-force oracles.
void consistency() {
  auto t0 = Clock::now();
  auto directed = tour_equivalence(true);
  auto undirected = tour_equivalence(false);
  auto trees = tree_equivalence();
  const long bad = directed.disagreements + undirected.disagreements + trees.disagreements;
  report(9, bad == 0,
         fmt("tours: %ld directed + %ld undirected cases, trees: %ld cases, %ld disagreements, %.1f s",
             directed.cases, undirected.cases, trees.cases, bad, seconds_since(t0)));
}

// 10: the dynamic program against the oracle on small instances.
void dp_quality() {
  const double eps_dp = 0.1;
  std::mt19937_64 rng(1010);
  int good = 0;
  long mismatches = 0;
  double worst_diff = 0;
  for (int seed = 0; seed < 50; ++seed) {
    Variant v = seed % 2 ? Variant::kPcstp : Variant::kPctsp;
    PcxInstance inst = random_instance(rng, v, 4 + seed % 3);
    auto tree = make_tree(inst.space_ptr());
    DecompOptions o;
    o.theta_p = eps_dp / (inst.space().doubling_dimension() * std::max(tree->top(), 1));
    HierarchicalDecomposition d(tree, o, static_cast<std::uint64_t>(seed));
    DpOptions g;
    g.r = 4;
    g.max_pairs = 2;
    g.max_open = 3;
    g.max_states = 2000000;
    DpResult r = dp_solve(inst, d, g);
    const double c = cost(inst, r.solution);
    const double diff = std::abs(c - r.value);
    worst_diff = std::max(worst_diff, diff);
    if (diff > 1e-9 * std::max(1.0, std::abs(c))) ++mismatches;
    if (r.value <= (1 + eps_dp) * exact_solve(inst).cost + 1e-9) ++good;
  }
  report(10, mismatches == 0 && good >= 45,
         fmt("value vs reconstructed cost: %ld mismatches (largest |diff| %.3g); within (1 + %.2f) OPT on %d/50",
             mismatches, worst_diff, eps_dp, good));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string logdir = argc > 1 ? argv[1] : "";
  auto t0 = Clock::now();
  Ledger led;
  if (!logdir.empty()) {
    led.trace.open(logdir + "/acceptance_splits.jsonl");
    led.fallback_log.open(logdir + "/acceptance_fallbacks.jsonl");
  }

  approximation(led);
  two_cluster(led);
  threshold_sweep(led);

  report(3, led.gw_violations == 0,
         fmt("gw <= 2 OPT + 1e-9 on %ld/%ld instances", led.gw_checked - led.gw_violations, led.gw_checked));
  report(4, led.eq1_violations == 0 && led.records > 0,
         fmt("%ld split records, %ld violations, largest cost(extend) - (c1 + c2) = %.3g", led.records,
             led.eq1_violations, led.records ? led.eq1_worst_slack : 0.0));
  report(5, led.progress_violations == 0 && led.step_violations == 0,
         fmt("%ld progress violations over %ld records; %ld of %ld solves over the |X| L step limit",
             led.progress_violations, led.records, led.step_violations, led.guesses));
  nets(led);
  cut_probability();
  transform_chain();
  consistency();
  dp_quality();
  const double rate = led.critical ? static_cast<double>(led.fallbacks) / led.critical : 0.0;
  report(11, rate <= 0.05,
         fmt("fallback on %ld of %ld critical instances (%.2f%%, need <= 5%%); each firing listed above", led.fallbacks,
             led.critical, 100 * rate));

  std::printf("%s: %d failing criteria, %.1f s\n", failures ? "FAIL" : "PASS", failures, seconds_since(t0));
  return failures ? 1 : 0;
}
