#include "pcx/pcx.h"

#include <cstdlib>
#include <cstring>
#include <optional>

#include "pcx/decompose.hpp"
#include "pcx/generate.hpp"
#include "pcx/io.hpp"
#include "pcx/oracle.hpp"

struct pcx_instance {
  pcx::PcxInstance inst;
};

struct pcx_result {
  pcx::PipelineResult res;
};

namespace {

thread_local std::string last_error;

pcx_status fail(pcx_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
pcx_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PCX_OK;
  } catch (const pcx::Error& e) {
    return fail(static_cast<pcx_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PCX_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PCX_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<pcx::Variant> to_variant(pcx_variant v) {
  switch (v) {
    case PCX_PCTSP:
      return pcx::Variant::kPctsp;
    case PCX_PCSTP:
      return pcx::Variant::kPcstp;
    default:
      return std::nullopt;
  }
}

pcx::PcxInstance with_variant(const pcx::PcxInstance& inst, pcx_variant v) {
  auto var = to_variant(v);
  if (!var || *var == inst.variant()) return inst;
  std::vector<double> pen;
  for (pcx::PointId t : inst.terminals()) pen.push_back(inst.penalty(t));
  return pcx::PcxInstance(*var, inst.space_ptr(), inst.terminals(), pen);
}

}  // namespace

extern "C" {

const char* pcx_last_error(void) { return last_error.c_str(); }

const char* pcx_status_name(pcx_status status) {
  switch (status) {
    case PCX_OK:
      return "ok";
    case PCX_INVALID_INPUT:
      return "invalid input";
    case PCX_INFEASIBLE:
      return "infeasible";
    case PCX_BUDGET_EXCEEDED:
      return "budget exceeded";
    case PCX_DEGENERATE_GUESS:
      return "degenerate guess";
    case PCX_SIZE_GUARD:
      return "size guard";
    case PCX_INTERNAL:
      return "internal error";
    case PCX_NULL_ARGUMENT:
      return "null argument";
  }
  return "unknown";
}

void pcx_generate_params_default(pcx_generate_params* params) {
  if (!params) return;
  pcx::GenerateParams g;
  params->variant = PCX_PCTSP;
  params->n = g.n;
  params->seed = g.seed;
  params->side = g.side;
  params->clusters = g.clusters;
  params->spread = g.spread;
  params->m = g.m;
  params->t = g.t;
  params->l = g.l;
  params->penalty_scale = g.penalty_scale;
}

void pcx_config_default(pcx_config* config) {
  if (!config) return;
  pcx::SolveConfig c;
  config->variant = PCX_KEEP_VARIANT;
  config->epsilon = c.eps;
  config->seed = c.seed;
  config->repetitions = c.repetitions;
  config->s = c.s;
  config->top = c.top;
  config->q0 = c.q0;
  config->m = c.dp.m;
  config->r = c.dp.r;
  config->theta_portal = c.theta_p;
  config->max_guesses = 0;
  config->max_states = static_cast<long>(c.dp.max_states);
}

pcx_status pcx_instance_generate(const char* family, const pcx_generate_params* params, pcx_instance** out) {
  if (!family || !params || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    pcx::GenerateParams g;
    g.variant = to_variant(params->variant).value_or(pcx::Variant::kPctsp);
    g.n = params->n;
    g.seed = params->seed;
    g.side = params->side;
    g.clusters = params->clusters;
    g.spread = params->spread;
    g.m = params->m;
    g.t = params->t;
    g.l = params->l;
    g.penalty_scale = params->penalty_scale;
    *out = new pcx_instance{pcx::generate(family, g)};
  });
}

pcx_status pcx_instance_parse(const char* json, pcx_instance** out) {
  if (!json || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = new pcx_instance{pcx::parse_instance(json)}; });
}

pcx_status pcx_instance_load(const char* path, pcx_instance** out) {
  if (!path || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = new pcx_instance{pcx::load_instance(path)}; });
}

pcx_status pcx_instance_to_json(const pcx_instance* inst, char** out) {
  if (!inst || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(pcx::format_instance(inst->inst)); });
}

int pcx_instance_num_points(const pcx_instance* inst) { return inst ? inst->inst.num_points() : 0; }

int pcx_instance_num_terminals(const pcx_instance* inst) {
  return inst ? static_cast<int>(inst->inst.terminals().size()) : 0;
}

pcx_variant pcx_instance_variant(const pcx_instance* inst) {
  if (!inst) return PCX_KEEP_VARIANT;
  return inst->inst.variant() == pcx::Variant::kPctsp ? PCX_PCTSP : PCX_PCSTP;
}

void pcx_instance_free(pcx_instance* inst) { delete inst; }

pcx_status pcx_run(const pcx_instance* inst, const pcx_config* config, pcx_result** out) {
  if (!inst || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  pcx_config c;
  pcx_config_default(&c);
  if (config) c = *config;
  return guarded([&] {
    pcx::PipelineConfig pc;
    pc.solve.eps = c.epsilon;
    pc.solve.seed = c.seed;
    pc.solve.repetitions = c.repetitions;
    pc.solve.s = c.s > 0 ? c.s : 4.0;
    pc.solve.top = c.top;
    pc.solve.q0 = c.q0;
    pc.solve.dp.m = c.m;
    pc.solve.dp.r = c.r;
    pc.solve.theta_p = c.theta_portal;
    pc.max_guesses = c.max_guesses;
    if (c.max_states > 0) pc.solve.dp.max_states = static_cast<std::size_t>(c.max_states);
    if (c.m < 1 || c.r < 1) throw pcx::InvalidInput("m and r must be positive");
    if (c.s > 0 && c.s < 4) throw pcx::InvalidInput("s must be at least 4");
    pcx::PcxInstance w = with_variant(inst->inst, c.variant);
    *out = new pcx_result{pcx::run_pipeline(w, pc)};
  });
}

pcx_status pcx_exact_cost(const pcx_instance* inst, pcx_variant variant, double* cost) {
  if (!inst || !cost) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] { *cost = pcx::exact_solve(with_variant(inst->inst, variant)).cost; });
}

double pcx_result_cost(const pcx_result* res) { return res ? res->res.cost : 0; }
double pcx_result_gw_cost(const pcx_result* res) { return res ? res->res.gw_cost : 0; }
int pcx_result_splits(const pcx_result* res) { return res ? res->res.stats.splits : 0; }
int pcx_result_budget_events(const pcx_result* res) { return res ? res->res.stats.budget_events : 0; }
int pcx_result_lambda_fallbacks(const pcx_result* res) { return res ? res->res.stats.lambda_fallbacks : 0; }
size_t pcx_result_dp_entries(const pcx_result* res) { return res ? res->res.stats.dp_entries : 0; }

pcx_status pcx_result_solution_json(const pcx_result* res, char** out) {
  if (!res || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(pcx::format_solution(res->res.solution, res->res.cost)); });
}

size_t pcx_result_trace_size(const pcx_result* res) { return res ? res->res.trace.size() : 0; }

pcx_status pcx_result_trace_json(const pcx_result* res, size_t index, char** out) {
  if (!res || !out) return fail(PCX_NULL_ARGUMENT, "null argument");
  if (index >= res->res.trace.size()) return fail(PCX_INVALID_INPUT, "trace index out of range");
  return guarded([&] { *out = dup(pcx::format_split_record(res->res.trace[index])); });
}

void pcx_result_free(pcx_result* res) { delete res; }

void pcx_string_free(char* s) { std::free(s); }

}  // extern "C"
