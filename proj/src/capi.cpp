#include "dagsched.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "dagsched/gen.hpp"
#include "dagsched/rta.hpp"
#include "dagsched/sim.hpp"
#include "dagsched/taskset_io.hpp"

struct dagsched_taskset {
  dagsched::TaskSet value;
};

struct dagsched_report {
  dagsched::AnalysisReport value;
};

struct dagsched_sim {
  dagsched::SimOutcome value;
  std::vector<unsigned long long> jobs_per_task;
};

namespace {

void put_error(char* err, size_t errlen, const char* what) {
  if (!err || errlen == 0) return;
  std::strncpy(err, what, errlen - 1);
  err[errlen - 1] = '\0';
}

template <typename F>
dagsched_status guarded(char* err, size_t errlen, F&& body) {
  try {
    return body();
  } catch (const dagsched::ParseError& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_PARSE;
  } catch (const dagsched::ValidationError& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_VALIDATION;
  } catch (const dagsched::InfeasibleParams& e) {
    put_error(err, errlen, (std::string("InfeasibleParams: ") + e.what()).c_str());
    return DAGSCHED_ERR_INFEASIBLE;
  } catch (const dagsched::IoError& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_IO;
  } catch (const dagsched::SimulationError& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_ARGUMENT;
  } catch (const std::invalid_argument& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_ARGUMENT;
  } catch (const std::out_of_range& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_RANGE;
  } catch (const std::bad_alloc&) {
    put_error(err, errlen, "out of memory");
    return DAGSCHED_ERR_INTERNAL;
  } catch (const std::exception& e) {
    put_error(err, errlen, e.what());
    return DAGSCHED_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dagsched_status require(bool ok, const char* what, char* err, size_t errlen) {
  if (ok) return DAGSCHED_OK;
  put_error(err, errlen, what);
  return DAGSCHED_ERR_ARGUMENT;
}

dagsched_status check_index(const void* handle, size_t index, size_t count,
                            const char* what, char* err, size_t errlen) {
  if (!handle) {
    put_error(err, errlen, "null handle");
    return DAGSCHED_ERR_ARGUMENT;
  }
  if (index >= count) {
    put_error(err, errlen, what);
    return DAGSCHED_ERR_RANGE;
  }
  return DAGSCHED_OK;
}

dagsched::Time parse_time_arg(const char* text, const char* what) {
  try {
    return dagsched::parse_time(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char* dagsched_version(void) { return "0.1.0"; }

void dagsched_string_free(char* s) { delete[] s; }

/* ---- task sets ---- */

dagsched_status dagsched_taskset_parse(const char* text, int wrap_virtual,
                                       dagsched_taskset** out, char* err, size_t errlen) {
  if (auto st = require(text && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    dagsched::ValidateOptions options;
    options.wrap_virtual_nodes = wrap_virtual != 0;
    *out = new dagsched_taskset{dagsched::parse_taskset(text, options)};
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_load(const char* path, int wrap_virtual,
                                      dagsched_taskset** out, char* err, size_t errlen) {
  if (auto st = require(path && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    dagsched::ValidateOptions options;
    options.wrap_virtual_nodes = wrap_virtual != 0;
    *out = new dagsched_taskset{dagsched::load_taskset(path, options)};
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_serialize(const dagsched_taskset* ts, char** out,
                                           char* err, size_t errlen) {
  if (auto st = require(ts && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(dagsched::serialize_taskset(ts->value));
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_save(const dagsched_taskset* ts, const char* path,
                                      char* err, size_t errlen) {
  if (auto st = require(ts && path, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    dagsched::save_taskset(ts->value, path);
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_sort_deadline_monotonic(const dagsched_taskset* ts,
                                                         dagsched_taskset** out, char* err,
                                                         size_t errlen) {
  if (auto st = require(ts && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = new dagsched_taskset{dagsched::deadline_monotonic_order(ts->value)};
    return DAGSCHED_OK;
  });
}

void dagsched_taskset_free(dagsched_taskset* ts) { delete ts; }

size_t dagsched_taskset_task_count(const dagsched_taskset* ts) {
  return ts ? ts->value.tasks().size() : 0;
}

unsigned dagsched_taskset_cores(const dagsched_taskset* ts) {
  return ts ? ts->value.cores() : 0;
}

dagsched_status dagsched_taskset_task_id(const dagsched_taskset* ts, size_t index,
                                         char** out, char* err, size_t errlen) {
  if (auto st = check_index(ts, index, dagsched_taskset_task_count(ts),
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(ts->value.tasks()[index].id());
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_task_period(const dagsched_taskset* ts, size_t index,
                                             char** out, char* err, size_t errlen) {
  if (auto st = check_index(ts, index, dagsched_taskset_task_count(ts),
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(dagsched::format_time(ts->value.tasks()[index].period()));
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_taskset_task_deadline(const dagsched_taskset* ts, size_t index,
                                               char** out, char* err, size_t errlen) {
  if (auto st = check_index(ts, index, dagsched_taskset_task_count(ts),
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(dagsched::format_time(ts->value.tasks()[index].deadline()));
    return DAGSCHED_OK;
  });
}

/* ---- generation ---- */

void dagsched_gen_params_init(dagsched_gen_params* params) {
  if (!params) return;
  params->n_tasks = 4;
  params->cores = 2;
  params->node_count_min = 3;
  params->node_count_max = 8;
  params->edge_probability = 0.4;
  params->layers_min = 2;
  params->layers_max = 4;
  params->total_utilization = "1/2";
  params->cost_min = 1;
  params->cost_max = 20;
  params->halved_cmin = 0;
  params->deadline_mode = DAGSCHED_DEADLINE_IMPLICIT;
  params->seed = 0;
}

dagsched_status dagsched_generate(const dagsched_gen_params* params,
                                  dagsched_taskset** out, char* err, size_t errlen) {
  if (auto st = require(params && out && params->total_utilization, "null argument", err,
                        errlen))
    return st;
  return guarded(err, errlen, [&] {
    dagsched::GenParams gp;
    gp.n_tasks = params->n_tasks;
    gp.cores = params->cores;
    gp.node_count_min = params->node_count_min;
    gp.node_count_max = params->node_count_max;
    gp.edge_probability = params->edge_probability;
    gp.layers_min = params->layers_min;
    gp.layers_max = params->layers_max;
    gp.total_utilization = parse_time_arg(params->total_utilization, "total_utilization");
    gp.cost_min = params->cost_min;
    gp.cost_max = params->cost_max;
    gp.halved_cmin = params->halved_cmin != 0;
    gp.deadline_mode = params->deadline_mode == DAGSCHED_DEADLINE_UNIFORM
                           ? dagsched::DeadlineMode::UniformLenToPeriod
                           : dagsched::DeadlineMode::Implicit;
    gp.seed = params->seed;
    *out = new dagsched_taskset{dagsched::generate_taskset(gp)};
    return DAGSCHED_OK;
  });
}

/* ---- response-time analysis ---- */

void dagsched_analysis_options_init(dagsched_analysis_options* options) {
  if (!options) return;
  options->method = DAGSCHED_METHOD_BASIC;
  options->epsilon = nullptr;
  options->max_iterations = 0;
}

dagsched_status dagsched_analyze(const dagsched_taskset* ts,
                                 const dagsched_analysis_options* options,
                                 dagsched_report** out, char* err, size_t errlen) {
  if (auto st = require(ts && options && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    dagsched::AnalysisConfig config;
    config.method = options->method == DAGSCHED_METHOD_LIMITED
                        ? dagsched::Method::LimitedCarryIn
                        : dagsched::Method::Basic;
    if (options->epsilon) config.epsilon = parse_time_arg(options->epsilon, "epsilon");
    if (options->max_iterations) config.max_iterations = options->max_iterations;
    *out = new dagsched_report{dagsched::analyze(ts->value, config)};
    return DAGSCHED_OK;
  });
}

void dagsched_report_free(dagsched_report* report) { delete report; }

int dagsched_report_schedulable(const dagsched_report* report) {
  return report && report->value.set_schedulable ? 1 : 0;
}

dagsched_status dagsched_report_task_verdict(const dagsched_report* report, size_t index,
                                             dagsched_verdict* out, char* err,
                                             size_t errlen) {
  if (auto st = check_index(report, index, report ? report->value.tasks.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  switch (report->value.tasks[index].verdict) {
    case dagsched::Verdict::Schedulable: *out = DAGSCHED_VERDICT_SCHEDULABLE; break;
    case dagsched::Verdict::Unschedulable: *out = DAGSCHED_VERDICT_UNSCHEDULABLE; break;
    case dagsched::Verdict::BlockedByHigherPriority: *out = DAGSCHED_VERDICT_BLOCKED; break;
  }
  return DAGSCHED_OK;
}

dagsched_status dagsched_report_task_response(const dagsched_report* report, size_t index,
                                              char** out, char* err, size_t errlen) {
  if (auto st = check_index(report, index, report ? report->value.tasks.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    const auto& bound = report->value.tasks[index].response_bound;
    *out = bound ? copy_string(dagsched::format_time(*bound)) : nullptr;
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_report_task_response_double(const dagsched_report* report,
                                                     size_t index, double* out, char* err,
                                                     size_t errlen) {
  if (auto st = check_index(report, index, report ? report->value.tasks.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  const auto& bound = report->value.tasks[index].response_bound;
  *out = bound ? dagsched::to_double(*bound) : std::numeric_limits<double>::infinity();
  return DAGSCHED_OK;
}

dagsched_status dagsched_report_task_iterations(const dagsched_report* report,
                                                size_t index, size_t* out, char* err,
                                                size_t errlen) {
  if (auto st = check_index(report, index, report ? report->value.tasks.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  *out = report->value.tasks[index].iterations.size();
  return DAGSCHED_OK;
}

/* ---- simulation ---- */

void dagsched_sim_options_init(dagsched_sim_options* options) {
  if (!options) return;
  options->release = DAGSCHED_RELEASE_SYNCHRONOUS;
  options->execution = DAGSCHED_EXECUTION_CMAX;
  options->seed = 0;
  options->jitter_factor = nullptr;
  options->horizon = nullptr;
  options->trace_path = nullptr;
}

dagsched_status dagsched_simulate(const dagsched_taskset* ts,
                                  const dagsched_sim_options* options, dagsched_sim** out,
                                  char* err, size_t errlen) {
  if (auto st = require(ts && options && out, "null argument", err, errlen)) return st;
  if (auto st = require(options->horizon != nullptr, "horizon is required", err, errlen))
    return st;
  return guarded(err, errlen, [&] {
    dagsched::Scenario scenario;
    scenario.release = options->release == DAGSCHED_RELEASE_SPORADIC
                           ? dagsched::ReleasePattern::SporadicRandom
                           : dagsched::ReleasePattern::SynchronousPeriodic;
    scenario.execution = options->execution == DAGSCHED_EXECUTION_RANDOM
                             ? dagsched::ExecutionPattern::RandomInRange
                             : dagsched::ExecutionPattern::AlwaysCmax;
    scenario.seed = options->seed;
    if (options->jitter_factor)
      scenario.jitter_factor = parse_time_arg(options->jitter_factor, "jitter_factor");
    scenario.horizon = parse_time_arg(options->horizon, "horizon");

    dagsched::SimOutcome outcome = dagsched::simulate(ts->value, scenario);
    dagsched::verify_trace(ts->value, outcome);
    if (options->trace_path) {
      std::ofstream trace(options->trace_path);
      if (!trace)
        throw dagsched::IoError(std::string("cannot open '") + options->trace_path +
                                "' for writing");
      dagsched::write_trace(ts->value, outcome, trace);
      if (!trace)
        throw dagsched::IoError(std::string("write failure on '") + options->trace_path +
                                "'");
    }

    auto* sim = new dagsched_sim{std::move(outcome), {}};
    sim->jobs_per_task.assign(ts->value.tasks().size(), 0);
    for (const dagsched::JobRecord& rec : sim->value.jobs) ++sim->jobs_per_task[rec.task];
    *out = sim;
    return DAGSCHED_OK;
  });
}

void dagsched_sim_free(dagsched_sim* sim) { delete sim; }

unsigned long long dagsched_sim_total_misses(const dagsched_sim* sim) {
  return sim ? sim->value.total_misses : 0;
}

dagsched_status dagsched_sim_task_jobs(const dagsched_sim* sim, size_t index,
                                       unsigned long long* out, char* err, size_t errlen) {
  if (auto st = check_index(sim, index, sim ? sim->jobs_per_task.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  *out = sim->jobs_per_task[index];
  return DAGSCHED_OK;
}

dagsched_status dagsched_sim_task_misses(const dagsched_sim* sim, size_t index,
                                         unsigned long long* out, char* err,
                                         size_t errlen) {
  if (auto st = check_index(sim, index, sim ? sim->value.miss_count.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  *out = sim->value.miss_count[index];
  return DAGSCHED_OK;
}

dagsched_status dagsched_sim_task_max_response(const dagsched_sim* sim, size_t index,
                                               char** out, char* err, size_t errlen) {
  if (auto st = check_index(sim, index, sim ? sim->value.max_observed_response.size() : 0,
                            "task index out of range", err, errlen))
    return st;
  if (auto st = require(out != nullptr, "null output", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    const auto& best = sim->value.max_observed_response[index];
    *out = best ? copy_string(dagsched::format_time(*best)) : nullptr;
    return DAGSCHED_OK;
  });
}

/* ---- formatting ---- */

dagsched_status dagsched_format_decimal(const char* time, char** out, char* err,
                                        size_t errlen) {
  if (auto st = require(time && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(dagsched::format_time_decimal(dagsched::parse_time(time)));
    return DAGSCHED_OK;
  });
}

dagsched_status dagsched_time_multiply(const char* a, const char* b, char** out,
                                       char* err, size_t errlen) {
  if (auto st = require(a && b && out, "null argument", err, errlen)) return st;
  return guarded(err, errlen, [&] {
    *out = copy_string(
        dagsched::format_time(dagsched::parse_time(a) * dagsched::parse_time(b)));
    return DAGSCHED_OK;
  });
}

}  // extern "C"
