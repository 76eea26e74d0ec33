/* C interface to the DAG schedulability toolkit.
 *
 * All handles are opaque; every call that can fail returns a dagsched_status
 * and, when given a buffer, a human-readable message in (err, errlen). The
 * buffer is always NUL-terminated, truncating if needed. Strings returned
 * through char** outputs are owned by the caller and released with
 * dagsched_string_free. Times cross the boundary as exact strings: an
 * integer, a reduced fraction "p/q", or a decimal literal.
 */
#ifndef DAGSCHED_H
#define DAGSCHED_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(DAGSCHED_BUILD)
#define DAGSCHED_API __declspec(dllexport)
#else
#define DAGSCHED_API __declspec(dllimport)
#endif
#else
#define DAGSCHED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dagsched_status {
  DAGSCHED_OK = 0,
  DAGSCHED_ERR_ARGUMENT = 1,   /* bad parameter or flag value */
  DAGSCHED_ERR_PARSE = 2,      /* malformed task-set text */
  DAGSCHED_ERR_VALIDATION = 3, /* well-formed text, invalid task structure */
  DAGSCHED_ERR_IO = 4,         /* file system failure */
  DAGSCHED_ERR_INFEASIBLE = 5, /* generator cannot meet the utilization target */
  DAGSCHED_ERR_RANGE = 6,      /* index out of bounds */
  DAGSCHED_ERR_INTERNAL = 7,
} dagsched_status;

typedef enum dagsched_method {
  DAGSCHED_METHOD_BASIC = 0,      /* every interfering task pays carry-in */
  DAGSCHED_METHOD_LIMITED = 1,    /* at most m-1 tasks pay carry-in */
} dagsched_method;

typedef enum dagsched_verdict {
  DAGSCHED_VERDICT_SCHEDULABLE = 0,
  DAGSCHED_VERDICT_UNSCHEDULABLE = 1,
  DAGSCHED_VERDICT_BLOCKED = 2, /* a higher-priority task already failed */
} dagsched_verdict;

typedef enum dagsched_release_pattern {
  DAGSCHED_RELEASE_SYNCHRONOUS = 0,
  DAGSCHED_RELEASE_SPORADIC = 1,
} dagsched_release_pattern;

typedef enum dagsched_execution_pattern {
  DAGSCHED_EXECUTION_CMAX = 0,
  DAGSCHED_EXECUTION_RANDOM = 1,
} dagsched_execution_pattern;

typedef enum dagsched_deadline_mode {
  DAGSCHED_DEADLINE_IMPLICIT = 0,
  DAGSCHED_DEADLINE_UNIFORM = 1, /* D uniform over the integers in [len, T] */
} dagsched_deadline_mode;

typedef struct dagsched_taskset dagsched_taskset;
typedef struct dagsched_report dagsched_report;
typedef struct dagsched_sim dagsched_sim;

DAGSCHED_API const char* dagsched_version(void);
DAGSCHED_API void dagsched_string_free(char* s);

/* ---- task sets ---- */

DAGSCHED_API dagsched_status dagsched_taskset_parse(const char* text, int wrap_virtual,
                                                    dagsched_taskset** out, char* err,
                                                    size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_load(const char* path, int wrap_virtual,
                                                   dagsched_taskset** out, char* err,
                                                   size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_serialize(const dagsched_taskset* ts,
                                                        char** out, char* err,
                                                        size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_save(const dagsched_taskset* ts,
                                                   const char* path, char* err,
                                                   size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_sort_deadline_monotonic(
    const dagsched_taskset* ts, dagsched_taskset** out, char* err, size_t errlen);
DAGSCHED_API void dagsched_taskset_free(dagsched_taskset* ts);

DAGSCHED_API size_t dagsched_taskset_task_count(const dagsched_taskset* ts);
DAGSCHED_API unsigned dagsched_taskset_cores(const dagsched_taskset* ts);
DAGSCHED_API dagsched_status dagsched_taskset_task_id(const dagsched_taskset* ts,
                                                      size_t index, char** out, char* err,
                                                      size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_task_period(const dagsched_taskset* ts,
                                                          size_t index, char** out,
                                                          char* err, size_t errlen);
DAGSCHED_API dagsched_status dagsched_taskset_task_deadline(const dagsched_taskset* ts,
                                                            size_t index, char** out,
                                                            char* err, size_t errlen);

/* ---- generation ---- */

typedef struct dagsched_gen_params {
  size_t n_tasks;
  unsigned cores;
  size_t node_count_min; /* real nodes, excluding the virtual entry/exit */
  size_t node_count_max;
  double edge_probability;
  size_t layers_min;
  size_t layers_max;
  const char* total_utilization; /* exact time string, e.g. "4/5" */
  unsigned long long cost_min;
  unsigned long long cost_max;
  int halved_cmin; /* nonzero: c_min = ceil(c_max / 2) instead of c_min = c_max */
  dagsched_deadline_mode deadline_mode;
  unsigned long long seed;
} dagsched_gen_params;

DAGSCHED_API void dagsched_gen_params_init(dagsched_gen_params* params);
DAGSCHED_API dagsched_status dagsched_generate(const dagsched_gen_params* params,
                                               dagsched_taskset** out, char* err,
                                               size_t errlen);

/* ---- response-time analysis ---- */

typedef struct dagsched_analysis_options {
  dagsched_method method;
  const char* epsilon;               /* NULL: 1/1000000 */
  unsigned long long max_iterations; /* 0: default 100000 */
} dagsched_analysis_options;

DAGSCHED_API void dagsched_analysis_options_init(dagsched_analysis_options* options);
DAGSCHED_API dagsched_status dagsched_analyze(const dagsched_taskset* ts,
                                              const dagsched_analysis_options* options,
                                              dagsched_report** out, char* err,
                                              size_t errlen);
DAGSCHED_API void dagsched_report_free(dagsched_report* report);

DAGSCHED_API int dagsched_report_schedulable(const dagsched_report* report);
DAGSCHED_API dagsched_status dagsched_report_task_verdict(const dagsched_report* report,
                                                          size_t index,
                                                          dagsched_verdict* out, char* err,
                                                          size_t errlen);
/* *out is NULL when the task has no certified bound (not schedulable). */
DAGSCHED_API dagsched_status dagsched_report_task_response(const dagsched_report* report,
                                                           size_t index, char** out,
                                                           char* err, size_t errlen);
/* As above but as a double; positive infinity when there is no bound. */
DAGSCHED_API dagsched_status dagsched_report_task_response_double(
    const dagsched_report* report, size_t index, double* out, char* err, size_t errlen);
DAGSCHED_API dagsched_status dagsched_report_task_iterations(const dagsched_report* report,
                                                             size_t index, size_t* out,
                                                             char* err, size_t errlen);

/* ---- simulation ---- */

typedef struct dagsched_sim_options {
  dagsched_release_pattern release;
  dagsched_execution_pattern execution;
  unsigned long long seed;
  const char* jitter_factor; /* NULL: "3/2"; sporadic gaps are uniform in [T, jitter*T] */
  const char* horizon;       /* required; must cover the largest period */
  const char* trace_path;    /* NULL: no trace written */
} dagsched_sim_options;

DAGSCHED_API void dagsched_sim_options_init(dagsched_sim_options* options);
/* Runs the simulation, replays the trace against every schedule invariant,
 * and optionally writes the trace CSV. */
DAGSCHED_API dagsched_status dagsched_simulate(const dagsched_taskset* ts,
                                               const dagsched_sim_options* options,
                                               dagsched_sim** out, char* err,
                                               size_t errlen);
DAGSCHED_API void dagsched_sim_free(dagsched_sim* sim);

DAGSCHED_API unsigned long long dagsched_sim_total_misses(const dagsched_sim* sim);
DAGSCHED_API dagsched_status dagsched_sim_task_jobs(const dagsched_sim* sim, size_t index,
                                                    unsigned long long* out, char* err,
                                                    size_t errlen);
DAGSCHED_API dagsched_status dagsched_sim_task_misses(const dagsched_sim* sim,
                                                      size_t index,
                                                      unsigned long long* out, char* err,
                                                      size_t errlen);
/* *out is NULL when no job of the task completed inside the horizon. */
DAGSCHED_API dagsched_status dagsched_sim_task_max_response(const dagsched_sim* sim,
                                                            size_t index, char** out,
                                                            char* err, size_t errlen);

/* ---- formatting ---- */

/* Exact decimal expansion when one exists, otherwise "~" plus a rounded
 * approximation. Accepts any exact time string. */
DAGSCHED_API dagsched_status dagsched_format_decimal(const char* time, char** out,
                                                     char* err, size_t errlen);

/* Exact product of two time strings, returned as an integer or reduced "p/q". */
DAGSCHED_API dagsched_status dagsched_time_multiply(const char* a, const char* b,
                                                    char** out, char* err, size_t errlen);

#ifdef __cplusplus
}
#endif

#endif /* DAGSCHED_H */
