// Command-line front end over the C API: generate instances, run the pipeline
// on one instance, or sweep a batch into CSV.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcx/pcx.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;

const char* const kCsvHeader =
    "instance_id,variant,n,seed,epsilon,alg_cost,gw_cost,opt_cost,ratio,time_ms,splits,dp_entries,budget_events";

struct CliError {
  pcx_status status;
  std::string message;
};

void check(pcx_status s) {
  if (s != PCX_OK) throw CliError{s, pcx_last_error()};
}

struct InstanceDeleter {
  void operator()(pcx_instance* p) const { pcx_instance_free(p); }
};
struct ResultDeleter {
  void operator()(pcx_result* p) const { pcx_result_free(p); }
};
using InstancePtr = std::unique_ptr<pcx_instance, InstanceDeleter>;
using ResultPtr = std::unique_ptr<pcx_result, ResultDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  pcx_string_free(s);
  return out;
}

pcx_variant variant_from(const std::string& name) {
  if (name == "pctsp") return PCX_PCTSP;
  if (name == "pcstp") return PCX_PCSTP;
  if (name.empty()) return PCX_KEEP_VARIANT;
  throw CliError{PCX_INVALID_INPUT, "unknown variant " + name};
}

const char* variant_label(pcx_variant v) { return v == PCX_PCSTP ? "pcstp" : "pctsp"; }

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct Record {
  std::string id;
  std::string variant;
  int n = 0;
  std::uint64_t seed = 0;
  double epsilon = 0;
  double alg = 0;
  double gw = 0;
  double opt = NAN;
  double ratio = NAN;
  double time_ms = 0;
  int splits = 0;
  std::size_t dp_entries = 0;
  int budget_events = 0;
  std::string solution;
  std::vector<std::string> trace;
};

std::string csv_row(const Record& r) {
  std::ostringstream os;
  os << r.id << ',' << r.variant << ',' << r.n << ',' << r.seed << ',' << num(r.epsilon) << ',' << num(r.alg) << ','
     << num(r.gw) << ',' << num(r.opt) << ',' << num(r.ratio) << ',' << num(r.time_ms) << ',' << r.splits << ','
     << r.dp_entries << ',' << r.budget_events;
  return os.str();
}

std::string json_record(const Record& r) {
  nlohmann::json j;
  j["instance_id"] = r.id;
  j["variant"] = r.variant;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["epsilon"] = r.epsilon;
  j["alg_cost"] = r.alg;
  j["gw_cost"] = r.gw;
  j["opt_cost"] = std::isnan(r.opt) ? nlohmann::json(nullptr) : nlohmann::json(r.opt);
  j["ratio"] = std::isnan(r.ratio) ? nlohmann::json(nullptr) : nlohmann::json(r.ratio);
  j["time_ms"] = r.time_ms;
  j["splits"] = r.splits;
  j["dp_entries"] = r.dp_entries;
  j["budget_events"] = r.budget_events;
  j["solution"] = nlohmann::json::parse(r.solution);
  return j.dump();
}

Record run_one(const pcx_instance* inst, const std::string& id, const pcx_config& cfg, bool oracle, bool timing) {
  Record r;
  r.id = id;
  r.variant = variant_label(cfg.variant == PCX_KEEP_VARIANT ? pcx_instance_variant(inst) : cfg.variant);
  r.n = pcx_instance_num_points(inst);
  r.seed = cfg.seed;
  r.epsilon = cfg.epsilon;
  auto t0 = std::chrono::steady_clock::now();
  pcx_result* raw = nullptr;
  check(pcx_run(inst, &cfg, &raw));
  ResultPtr res(raw);
  if (timing)
    r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.alg = pcx_result_cost(res.get());
  r.gw = pcx_result_gw_cost(res.get());
  r.splits = pcx_result_splits(res.get());
  r.dp_entries = pcx_result_dp_entries(res.get());
  r.budget_events = pcx_result_budget_events(res.get());
  char* sol = nullptr;
  check(pcx_result_solution_json(res.get(), &sol));
  r.solution = take(sol);
  for (std::size_t i = 0; i < pcx_result_trace_size(res.get()); ++i) {
    char* line = nullptr;
    check(pcx_result_trace_json(res.get(), i, &line));
    r.trace.push_back(take(line));
  }
  if (oracle) {
    double opt = 0;
    pcx_status s = pcx_exact_cost(inst, cfg.variant, &opt);
    if (s == PCX_OK) {
      r.opt = opt;
      r.ratio = opt > 0 ? r.alg / opt : (r.alg <= 0 ? 1.0 : INFINITY);
    } else if (s != PCX_SIZE_GUARD) {
      check(s);
    }
  }
  return r;
}

struct SolverFlags {
  std::string variant;
  double epsilon = 0.5;
  std::uint64_t seed = 1;
  int repetitions = 1;
  double s = 0;
  int top = 0;
  double q0 = 0;
  int m = 0;
  int r = 0;
  double theta_portal = 0;
  int max_guesses = 0;
  long max_states = 0;

  pcx_config config() const {
    pcx_config c;
    pcx_config_default(&c);
    c.variant = variant_from(variant);
    c.epsilon = epsilon;
    c.seed = seed;
    c.repetitions = repetitions;
    if (s > 0) c.s = s;
    c.top = top;
    c.q0 = q0;
    if (m > 0) c.m = m;
    if (r > 0) c.r = r;
    c.theta_portal = theta_portal;
    c.max_guesses = max_guesses;
    if (max_states > 0) c.max_states = max_states;
    return c;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--variant", f.variant, "pctsp or pcstp (default: the instance's)")
      ->check(CLI::IsMember({"pctsp", "pcstp"}));
  cmd->add_option("--epsilon", f.epsilon, "Accuracy parameter in (0,1)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--repetitions", f.repetitions, "Decompositions tried per dynamic-program call")
      ->capture_default_str();
  cmd->add_option("--s", f.s, "Net scale base (>= 4)");
  cmd->add_option("--L", f.top, "Top height of the net tree (0: from the diameter)");
  cmd->add_option("--q0", f.q0, "Critical threshold (0: 10 s k / epsilon)");
  cmd->add_option("--m", f.m, "Portals per cluster");
  cmd->add_option("--r", f.r, "Active portals per cluster");
  cmd->add_option("--theta-portal", f.theta_portal, "Portal granularity (0: epsilon / (k L))");
  cmd->add_option("--max-guesses", f.max_guesses, "Rescaling guesses (0: automatic)");
  cmd->add_option("--max-states", f.max_states, "Dynamic-program state budget");
}

int exit_code(pcx_status s) {
  return s == PCX_INVALID_INPUT || s == PCX_INFEASIBLE ? kExitInfeasible : kExitFailure;
}

// Sweep configuration:
// {"groups": [{"family": "uniform2d", "variants": ["pctsp"], "n": [4, 10],
//   "instances": 10, "instance_seed": 1, "seeds": [1, 2], "epsilon": 0.5,
//   "q0": 0, "oracle": true, ...generator fields (side, gen_m, t, l, clusters,
//   spread, penalty_scale) and solver fields (s, L, m, r, repetitions,
//   theta_portal, max_guesses, max_states)}]}
struct Task {
  std::string id;
  std::shared_ptr<pcx_instance> inst;
  pcx_config cfg;
  bool oracle = false;
};

std::vector<Task> sweep_tasks(const nlohmann::json& cfg) {
  std::vector<Task> tasks;
  for (const auto& g : cfg.at("groups")) {
    const std::string family = g.value("family", "uniform2d");
    std::vector<std::string> variants = g.value("variants", std::vector<std::string>{"pctsp"});
    std::vector<int> nr = g.value("n", std::vector<int>{8, 8});
    if (nr.size() == 1) nr.push_back(nr[0]);
    const int count = g.value("instances", 1);
    const std::uint64_t base = g.value("instance_seed", std::uint64_t{1});
    std::vector<std::uint64_t> seeds = g.value("seeds", std::vector<std::uint64_t>{1});
    for (const auto& vname : variants) {
      for (int i = 0; i < count; ++i) {
        pcx_generate_params gp;
        pcx_generate_params_default(&gp);
        gp.variant = variant_from(vname);
        gp.n = nr[0] + (nr[1] > nr[0] ? i % (nr[1] - nr[0] + 1) : 0);
        gp.seed = base + static_cast<std::uint64_t>(i);
        gp.side = g.value("side", gp.side);
        gp.clusters = g.value("clusters", gp.clusters);
        gp.spread = g.value("spread", gp.spread);
        gp.m = g.value("gen_m", gp.m);
        gp.t = g.value("t", gp.t);
        gp.l = g.value("l", gp.l);
        gp.penalty_scale = g.value("penalty_scale", gp.penalty_scale);
        pcx_instance* raw = nullptr;
        check(pcx_instance_generate(family.c_str(), &gp, &raw));
        std::shared_ptr<pcx_instance> inst(raw, pcx_instance_free);
        const std::string id = family + "-" + vname + "-" + std::to_string(gp.n) + "-" + std::to_string(gp.seed);
        for (std::uint64_t seed : seeds) {
          Task t{id, inst, {}, g.value("oracle", false)};
          pcx_config_default(&t.cfg);
          t.cfg.seed = seed;
          t.cfg.epsilon = g.value("epsilon", t.cfg.epsilon);
          t.cfg.q0 = g.value("q0", t.cfg.q0);
          t.cfg.s = g.value("s", t.cfg.s);
          t.cfg.top = g.value("L", t.cfg.top);
          t.cfg.m = g.value("m", t.cfg.m);
          t.cfg.r = g.value("r", t.cfg.r);
          t.cfg.repetitions = g.value("repetitions", t.cfg.repetitions);
          t.cfg.theta_portal = g.value("theta_portal", t.cfg.theta_portal);
          t.cfg.max_guesses = g.value("max_guesses", t.cfg.max_guesses);
          t.cfg.max_states = g.value("max_states", t.cfg.max_states);
          tasks.push_back(std::move(t));
        }
      }
    }
  }
  return tasks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prize-collecting tour and tree approximation on doubling metrics"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a generated instance as JSON");
  std::string family = "uniform2d", gen_variant = "pctsp", gen_out;
  pcx_generate_params gp;
  pcx_generate_params_default(&gp);
  gen->add_option("family", family, "uniform2d, clustered2d, line_two_cluster or matrix_random_metric")
      ->capture_default_str();
  gen->add_option("--variant", gen_variant)->check(CLI::IsMember({"pctsp", "pcstp"}))->capture_default_str();
  gen->add_option("--n", gp.n, "Number of points")->capture_default_str();
  gen->add_option("--seed", gp.seed)->capture_default_str();
  gen->add_option("--side", gp.side, "Square side")->capture_default_str();
  gen->add_option("--clusters", gp.clusters)->capture_default_str();
  gen->add_option("--spread", gp.spread, "Cluster radius")->capture_default_str();
  gen->add_option("--m", gp.m, "Two-cluster line: right cluster size")->capture_default_str();
  gen->add_option("--t", gp.t, "Two-cluster line: penalty")->capture_default_str();
  gen->add_option("--l", gp.l, "Two-cluster line: gap")->capture_default_str();
  gen->add_option("--penalty-scale", gp.penalty_scale, "Penalties uniform in [0, scale * diameter]")
      ->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output path (default: stdout)");

  auto* run = app.add_subcommand("run", "Run the pipeline on one instance");
  std::string run_path, trace_path, out_format = "csv";
  SolverFlags run_flags;
  bool run_oracle = false, run_no_time = false;
  run->add_option("instance", run_path, "Instance JSON file")->required();
  add_solver_flags(run, run_flags);
  run->add_flag("--oracle", run_oracle, "Attach the exact optimum when the size permits");
  run->add_option("--trace", trace_path, "Write split records as JSON lines");
  run->add_option("--out", out_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run->add_flag("--no-time", run_no_time, "Report time_ms as 0 for byte-identical replays");

  auto* sweep = app.add_subcommand("sweep", "Batch runs from a JSON config, CSV on stdout");
  std::string sweep_path;
  int jobs = 1;
  bool sweep_no_time = false;
  sweep->add_option("config", sweep_path, "Sweep config JSON")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_flag("--no-time", sweep_no_time, "Report time_ms as 0 for byte-identical replays");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.variant = variant_from(gen_variant);
      pcx_instance* raw = nullptr;
      check(pcx_instance_generate(family.c_str(), &gp, &raw));
      InstancePtr inst(raw);
      char* text = nullptr;
      check(pcx_instance_to_json(inst.get(), &text));
      std::string body = take(text);
      if (gen_out.empty()) {
        std::cout << body;
      } else {
        std::ofstream out(gen_out);
        if (!out) throw CliError{PCX_INVALID_INPUT, "cannot write " + gen_out};
        out << body;
      }
      return 0;
    }

    if (*run) {
      pcx_instance* raw = nullptr;
      check(pcx_instance_load(run_path.c_str(), &raw));
      InstancePtr inst(raw);
      Record r = run_one(inst.get(), run_path, run_flags.config(), run_oracle, !run_no_time);
      if (!trace_path.empty()) {
        std::ofstream tr(trace_path);
        if (!tr) throw CliError{PCX_INVALID_INPUT, "cannot write " + trace_path};
        for (const auto& line : r.trace) tr << line << '\n';
      }
      if (out_format == "csv") std::cout << kCsvHeader << '\n' << csv_row(r) << '\n';
      else std::cout << json_record(r) << '\n';
      return r.budget_events > 0 ? kExitBudget : 0;
    }

    std::ifstream in(sweep_path);
    if (!in) throw CliError{PCX_INVALID_INPUT, "cannot open " + sweep_path};
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CliError{PCX_INVALID_INPUT, std::string("bad sweep config: ") + e.what()};
    }
    std::vector<Task> tasks;
    try {
      tasks = sweep_tasks(cfg);
    } catch (const nlohmann::json::exception& e) {
      throw CliError{PCX_INVALID_INPUT, std::string("bad sweep config: ") + e.what()};
    }
    std::vector<Record> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        try {
          rows[i] = run_one(tasks[i].inst.get(), tasks[i].id, tasks[i].cfg, tasks[i].oracle, !sweep_no_time);
        } catch (const CliError& e) {
          errors[i] = e.message;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::cout << kCsvHeader << '\n';
    bool budget = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!errors[i].empty()) {
        std::cerr << tasks[i].id << " seed " << tasks[i].cfg.seed << ": " << errors[i] << '\n';
        continue;
      }
      std::cout << csv_row(rows[i]) << '\n';
      budget = budget || rows[i].budget_events > 0;
    }
    for (const auto& e : errors)
      if (!e.empty()) return kExitFailure;
    return budget ? kExitBudget : 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return exit_code(e.status);
  }
}
