#ifndef PCX_PCX_H_
#define PCX_PCX_H_

#ifdef __cplusplus
extern "C" {
#endif

#include <stddef.h>
#include <stdint.h>

typedef struct pcx_instance pcx_instance;
typedef struct pcx_result pcx_result;

typedef enum {
  PCX_OK = 0,
  PCX_INVALID_INPUT = 1,
  PCX_INFEASIBLE = 2,
  PCX_BUDGET_EXCEEDED = 3,
  PCX_DEGENERATE_GUESS = 4,
  PCX_SIZE_GUARD = 5,
  PCX_INTERNAL = 6,
  PCX_NULL_ARGUMENT = 7
} pcx_status;

typedef enum { PCX_PCTSP = 0, PCX_PCSTP = 1, PCX_KEEP_VARIANT = -1 } pcx_variant;

typedef struct {
  pcx_variant variant;
  int n;
  uint64_t seed;
  double side;
  int clusters;
  double spread;
  int m;
  double t;
  double l;
  double penalty_scale;
} pcx_generate_params;

/* Zero values of s, top, q0 and theta_portal select the derived defaults. */
typedef struct {
  pcx_variant variant;
  double epsilon;
  uint64_t seed;
  int repetitions;
  double s;
  int top;
  double q0;
  int m;
  int r;
  double theta_portal;
  int max_guesses;
  /* Dynamic-program state budget; exceeding it falls back to primal-dual. */
  long max_states;
} pcx_config;

/* Message of the last failure on the calling thread; never NULL. */
const char* pcx_last_error(void);
const char* pcx_status_name(pcx_status status);

void pcx_generate_params_default(pcx_generate_params* params);
void pcx_config_default(pcx_config* config);

pcx_status pcx_instance_generate(const char* family, const pcx_generate_params* params, pcx_instance** out);
pcx_status pcx_instance_parse(const char* json, pcx_instance** out);
pcx_status pcx_instance_load(const char* path, pcx_instance** out);
/* *out is malloc()ed; release with pcx_string_free. */
pcx_status pcx_instance_to_json(const pcx_instance* inst, char** out);
int pcx_instance_num_points(const pcx_instance* inst);
int pcx_instance_num_terminals(const pcx_instance* inst);
pcx_variant pcx_instance_variant(const pcx_instance* inst);
void pcx_instance_free(pcx_instance* inst);

/* Runs the pipeline; the primal-dual baseline is part of the result. */
pcx_status pcx_run(const pcx_instance* inst, const pcx_config* config, pcx_result** out);
/* Exact optimum; PCX_SIZE_GUARD when the instance is too large. */
pcx_status pcx_exact_cost(const pcx_instance* inst, pcx_variant variant, double* cost);

double pcx_result_cost(const pcx_result* res);
double pcx_result_gw_cost(const pcx_result* res);
int pcx_result_splits(const pcx_result* res);
int pcx_result_budget_events(const pcx_result* res);
int pcx_result_lambda_fallbacks(const pcx_result* res);
size_t pcx_result_dp_entries(const pcx_result* res);
pcx_status pcx_result_solution_json(const pcx_result* res, char** out);
size_t pcx_result_trace_size(const pcx_result* res);
/* One split record as a single-line JSON object. */
pcx_status pcx_result_trace_json(const pcx_result* res, size_t index, char** out);
void pcx_result_free(pcx_result* res);

void pcx_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
