// Command-line front end. Everything goes through the C API in dagsched.h;
// this translation unit never touches the C++ core directly.

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dagsched.h"

namespace {

using nlohmann::json;

struct StringOut {
  char* p = nullptr;
  ~StringOut() { dagsched_string_free(p); }
  StringOut() = default;
  StringOut(const StringOut&) = delete;
  StringOut& operator=(const StringOut&) = delete;
};

struct TasksetHandle {
  dagsched_taskset* p = nullptr;
  ~TasksetHandle() { dagsched_taskset_free(p); }
};

struct ReportHandle {
  dagsched_report* p = nullptr;
  ~ReportHandle() { dagsched_report_free(p); }
};

struct SimHandle {
  dagsched_sim* p = nullptr;
  ~SimHandle() { dagsched_sim_free(p); }
};

char g_err[1024];

int fail() {
  std::cerr << "error: " << g_err << "\n";
  return 2;
}

const char* verdict_label(dagsched_verdict v) {
  switch (v) {
    case DAGSCHED_VERDICT_SCHEDULABLE: return "schedulable";
    case DAGSCHED_VERDICT_UNSCHEDULABLE: return "unschedulable";
    case DAGSCHED_VERDICT_BLOCKED: return "blocked_by_higher_priority";
  }
  return "unknown";
}

std::string decimal_of(const char* exact) {
  StringOut dec;
  if (dagsched_format_decimal(exact, &dec.p, g_err, sizeof g_err) != DAGSCHED_OK)
    return exact;
  return dec.p;
}

// Loads a task set and applies the optional priority reordering.
int load_input(const std::string& path, bool wrap_virtual, const std::string& priority,
               TasksetHandle& ts) {
  if (dagsched_taskset_load(path.c_str(), wrap_virtual ? 1 : 0, &ts.p, g_err,
                            sizeof g_err) != DAGSCHED_OK)
    return fail();
  if (priority == "deadline-monotonic") {
    TasksetHandle sorted;
    if (dagsched_taskset_sort_deadline_monotonic(ts.p, &sorted.p, g_err, sizeof g_err) !=
        DAGSCHED_OK)
      return fail();
    std::swap(ts.p, sorted.p);
  }
  return -1;  // no exit yet
}

struct AnalyzeArgs {
  std::string file;
  std::string method = "basic";
  std::string epsilon;
  std::uint64_t max_iterations = 0;
  bool as_json = false;
  std::string priority = "file";
  bool wrap_virtual = false;
};

int run_analyze(const AnalyzeArgs& args) {
  TasksetHandle ts;
  if (int rc = load_input(args.file, args.wrap_virtual, args.priority, ts); rc >= 0)
    return rc;

  dagsched_analysis_options options;
  dagsched_analysis_options_init(&options);
  options.method =
      args.method == "limited" ? DAGSCHED_METHOD_LIMITED : DAGSCHED_METHOD_BASIC;
  if (!args.epsilon.empty()) options.epsilon = args.epsilon.c_str();
  options.max_iterations = args.max_iterations;

  ReportHandle report;
  if (dagsched_analyze(ts.p, &options, &report.p, g_err, sizeof g_err) != DAGSCHED_OK)
    return fail();

  const size_t count = dagsched_taskset_task_count(ts.p);
  struct Row {
    std::string id, verdict, response, decimal;
    size_t iterations;
  };
  std::vector<Row> rows;
  for (size_t i = 0; i < count; ++i) {
    Row row;
    StringOut id, response;
    dagsched_verdict verdict;
    if (dagsched_taskset_task_id(ts.p, i, &id.p, g_err, sizeof g_err) != DAGSCHED_OK ||
        dagsched_report_task_verdict(report.p, i, &verdict, g_err, sizeof g_err) !=
            DAGSCHED_OK ||
        dagsched_report_task_response(report.p, i, &response.p, g_err, sizeof g_err) !=
            DAGSCHED_OK ||
        dagsched_report_task_iterations(report.p, i, &row.iterations, g_err,
                                        sizeof g_err) != DAGSCHED_OK)
      return fail();
    row.id = id.p;
    row.verdict = verdict_label(verdict);
    row.response = response.p ? response.p : "";
    row.decimal = response.p ? decimal_of(response.p) : "";
    rows.push_back(std::move(row));
  }
  bool schedulable = dagsched_report_schedulable(report.p) != 0;

  if (args.as_json) {
    json doc;
    doc["cores"] = dagsched_taskset_cores(ts.p);
    doc["method"] = args.method;
    doc["schedulable"] = schedulable;
    json tasks = json::array();
    for (const Row& row : rows) {
      json t;
      t["id"] = row.id;
      t["verdict"] = row.verdict;
      t["response"] = row.response.empty() ? json(nullptr) : json(row.response);
      t["response_decimal"] = row.decimal.empty() ? json(nullptr) : json(row.decimal);
      t["iterations"] = row.iterations;
      tasks.push_back(std::move(t));
    }
    doc["tasks"] = std::move(tasks);
    std::cout << doc.dump(2) << "\n";
  } else {
    size_t idw = 4, vw = 8, rw = 8, dw = 8;
    for (const Row& row : rows) {
      idw = std::max(idw, row.id.size());
      vw = std::max(vw, row.verdict.size());
      rw = std::max(rw, row.response.size());
      dw = std::max(dw, row.decimal.size());
    }
    std::printf("%-*s  %-*s  %-*s  %-*s  %s\n", int(idw), "task", int(vw), "verdict",
                int(rw), "response", int(dw), "decimal", "iterations");
    for (const Row& row : rows)
      std::printf("%-*s  %-*s  %-*s  %-*s  %zu\n", int(idw), row.id.c_str(), int(vw),
                  row.verdict.c_str(), int(rw),
                  row.response.empty() ? "-" : row.response.c_str(), int(dw),
                  row.decimal.empty() ? "-" : row.decimal.c_str(), row.iterations);
    std::printf("set: %s (%s method, %u cores)\n",
                schedulable ? "schedulable" : "not schedulable", args.method.c_str(),
                dagsched_taskset_cores(ts.p));
  }
  return schedulable ? 0 : 1;
}

struct SimulateArgs {
  std::string file;
  std::string release = "synchronous";
  std::string execution = "cmax";
  std::uint64_t seed = 0;
  std::string jitter;
  std::string horizon;
  std::string trace;
  std::string priority = "file";
  bool wrap_virtual = false;
};

int run_simulate(const SimulateArgs& args) {
  TasksetHandle ts;
  if (int rc = load_input(args.file, args.wrap_virtual, args.priority, ts); rc >= 0)
    return rc;

  dagsched_sim_options options;
  dagsched_sim_options_init(&options);
  options.release = args.release == "sporadic" ? DAGSCHED_RELEASE_SPORADIC
                                               : DAGSCHED_RELEASE_SYNCHRONOUS;
  options.execution = args.execution == "random" ? DAGSCHED_EXECUTION_RANDOM
                                                 : DAGSCHED_EXECUTION_CMAX;
  options.seed = args.seed;
  if (!args.jitter.empty()) options.jitter_factor = args.jitter.c_str();
  options.horizon = args.horizon.c_str();
  if (!args.trace.empty()) options.trace_path = args.trace.c_str();

  SimHandle sim;
  if (dagsched_simulate(ts.p, &options, &sim.p, g_err, sizeof g_err) != DAGSCHED_OK)
    return fail();

  const size_t count = dagsched_taskset_task_count(ts.p);
  size_t idw = 4, rw = 12;
  std::vector<std::string> ids, responses;
  std::vector<unsigned long long> jobs(count), misses(count);
  for (size_t i = 0; i < count; ++i) {
    StringOut id, response;
    if (dagsched_taskset_task_id(ts.p, i, &id.p, g_err, sizeof g_err) != DAGSCHED_OK ||
        dagsched_sim_task_jobs(sim.p, i, &jobs[i], g_err, sizeof g_err) != DAGSCHED_OK ||
        dagsched_sim_task_misses(sim.p, i, &misses[i], g_err, sizeof g_err) !=
            DAGSCHED_OK ||
        dagsched_sim_task_max_response(sim.p, i, &response.p, g_err, sizeof g_err) !=
            DAGSCHED_OK)
      return fail();
    ids.emplace_back(id.p);
    responses.emplace_back(response.p ? response.p : "-");
    idw = std::max(idw, ids.back().size());
    rw = std::max(rw, responses.back().size());
  }
  std::printf("%-*s  %8s  %8s  %-*s  %s\n", int(idw), "task", "jobs", "misses", int(rw),
              "max_response", "decimal");
  for (size_t i = 0; i < count; ++i)
    std::printf("%-*s  %8llu  %8llu  %-*s  %s\n", int(idw), ids[i].c_str(), jobs[i],
                misses[i], int(rw), responses[i].c_str(),
                responses[i] == "-" ? "-" : decimal_of(responses[i].c_str()).c_str());
  unsigned long long total = dagsched_sim_total_misses(sim.p);
  std::printf("total misses: %llu\n", total);
  return total == 0 ? 0 : 1;
}

struct GenArgs {
  dagsched_gen_params params;
  std::string utilization = "1/2";
  std::string deadline_mode = "implicit";
  std::string out = "-";
};

void add_gen_flags(CLI::App* cmd, GenArgs& args) {
  dagsched_gen_params_init(&args.params);
  cmd->add_option("--tasks", args.params.n_tasks, "Number of tasks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--cores", args.params.cores, "Number of identical cores")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--nodes-min", args.params.node_count_min, "Fewest real nodes per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--nodes-max", args.params.node_count_max, "Most real nodes per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--edge-prob", args.params.edge_probability,
                  "Edge probability between nodes of distinct layers")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--layers-min", args.params.layers_min, "Fewest layers per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--layers-max", args.params.layers_max, "Most layers per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--cost-min", args.params.cost_min, "Smallest node cost")
      ->capture_default_str();
  cmd->add_option("--cost-max", args.params.cost_max, "Largest node cost")
      ->capture_default_str();
  cmd->add_flag("--halved-cmin", args.params.halved_cmin,
                "Draw c_min = ceil(c_max / 2) instead of c_min = c_max");
  cmd->add_option("--deadline-mode", args.deadline_mode,
                  "implicit (D = T) or uniform (D uniform over [len, T])")
      ->check(CLI::IsMember({"implicit", "uniform"}))
      ->capture_default_str();
  cmd->add_option("--seed", args.params.seed, "Base seed")->capture_default_str();
}

void finish_gen_params(GenArgs& args) {
  args.params.total_utilization = args.utilization.c_str();
  args.params.deadline_mode = args.deadline_mode == "uniform"
                                  ? DAGSCHED_DEADLINE_UNIFORM
                                  : DAGSCHED_DEADLINE_IMPLICIT;
}

int write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return 2;
  }
  out << text;
  if (!out) {
    std::cerr << "error: write failure on '" << path << "'\n";
    return 2;
  }
  return 0;
}

int run_generate(GenArgs& args) {
  finish_gen_params(args);
  TasksetHandle ts;
  if (dagsched_generate(&args.params, &ts.p, g_err, sizeof g_err) != DAGSCHED_OK)
    return fail();
  StringOut text;
  if (dagsched_taskset_serialize(ts.p, &text.p, g_err, sizeof g_err) != DAGSCHED_OK)
    return fail();
  return write_text(args.out, text.p);
}

struct SweepArgs {
  GenArgs gen;
  std::vector<std::string> utilizations;
  std::uint64_t sets_per_point = 50;
  bool normalized = false;
  std::string epsilon;
  std::string out = "-";
};

// Seeds are derived per (utilization index, set index) so a sweep is
// reproducible regardless of row evaluation order.
std::uint64_t sweep_seed(std::uint64_t base, size_t u_index, size_t set_index) {
  return base + 1000003ULL * static_cast<std::uint64_t>(u_index) +
         static_cast<std::uint64_t>(set_index);
}

int run_sweep(SweepArgs& args) {
  if (args.utilizations.empty()) {
    std::cerr << "error: --utilizations needs at least one value\n";
    return 2;
  }
  const char* methods[2] = {"basic", "limited"};
  std::string csv = "utilization,method,accepted,total,acceptance_ratio\n";
  for (size_t u = 0; u < args.utilizations.size(); ++u) {
    std::string target = args.utilizations[u];
    if (args.normalized) {
      StringOut scaled;
      if (dagsched_time_multiply(target.c_str(),
                                 std::to_string(args.gen.params.cores).c_str(),
                                 &scaled.p, g_err, sizeof g_err) != DAGSCHED_OK)
        return fail();
      target = scaled.p;
    }
    unsigned long long accepted[2] = {0, 0};
    for (size_t s = 0; s < args.sets_per_point; ++s) {
      GenArgs gen = args.gen;
      gen.utilization = target;
      finish_gen_params(gen);
      gen.params.seed = sweep_seed(args.gen.params.seed, u, s);
      TasksetHandle ts;
      if (dagsched_generate(&gen.params, &ts.p, g_err, sizeof g_err) != DAGSCHED_OK)
        return fail();
      for (int mi = 0; mi < 2; ++mi) {
        dagsched_analysis_options options;
        dagsched_analysis_options_init(&options);
        options.method = mi == 0 ? DAGSCHED_METHOD_BASIC : DAGSCHED_METHOD_LIMITED;
        if (!args.epsilon.empty()) options.epsilon = args.epsilon.c_str();
        ReportHandle report;
        if (dagsched_analyze(ts.p, &options, &report.p, g_err, sizeof g_err) !=
            DAGSCHED_OK)
          return fail();
        if (dagsched_report_schedulable(report.p)) ++accepted[mi];
      }
    }
    for (int mi = 0; mi < 2; ++mi) {
      char row[256];
      std::snprintf(row, sizeof row, "%s,%s,%llu,%llu,%.6f\n",
                    args.utilizations[u].c_str(), methods[mi], accepted[mi],
                    static_cast<unsigned long long>(args.sets_per_point),
                    static_cast<double>(accepted[mi]) /
                        static_cast<double>(args.sets_per_point));
      csv += row;
    }
  }
  return write_text(args.out, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedulability analysis for sporadic DAG tasks under global "
               "fixed-priority scheduling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dagsched_version()));

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Bound worst-case response times and decide schedulability");
  analyze->add_option("file", analyze_args.file, "Task-set file")->required();
  analyze->add_option("--method", analyze_args.method,
                      "basic (all tasks pay carry-in) or limited (at most m-1 do)")
      ->check(CLI::IsMember({"basic", "limited"}))
      ->capture_default_str();
  analyze->add_option("--epsilon", analyze_args.epsilon,
                      "Fixed-point convergence threshold (exact time string)");
  analyze->add_option("--max-iterations", analyze_args.max_iterations,
                      "Iteration budget per task (0 = library default)");
  analyze->add_flag("--json", analyze_args.as_json, "Machine-readable report");
  analyze->add_option("--priority", analyze_args.priority,
                      "file (as listed) or deadline-monotonic")
      ->check(CLI::IsMember({"file", "deadline-monotonic"}))
      ->capture_default_str();
  analyze->add_flag("--wrap-virtual", analyze_args.wrap_virtual,
                    "Accept multi-source/multi-sink graphs by adding zero-cost wrappers");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the discrete-event scheduler and report observed behavior");
  simulate->add_option("file", sim_args.file, "Task-set file")->required();
  simulate->add_option("--release", sim_args.release, "synchronous or sporadic")
      ->check(CLI::IsMember({"synchronous", "sporadic"}))
      ->capture_default_str();
  simulate->add_option("--execution", sim_args.execution, "cmax or random")
      ->check(CLI::IsMember({"cmax", "random"}))
      ->capture_default_str();
  simulate->add_option("--seed", sim_args.seed, "Scenario seed")->capture_default_str();
  simulate->add_option("--jitter", sim_args.jitter,
                       "Sporadic inter-arrival factor (gaps uniform in [T, jitter*T])");
  simulate->add_option("--horizon", sim_args.horizon, "Simulation horizon (exact time)")
      ->required();
  simulate->add_option("--trace", sim_args.trace, "Write the event trace CSV here");
  simulate->add_option("--priority", sim_args.priority,
                       "file (as listed) or deadline-monotonic")
      ->check(CLI::IsMember({"file", "deadline-monotonic"}))
      ->capture_default_str();
  simulate->add_flag("--wrap-virtual", sim_args.wrap_virtual,
                     "Accept multi-source/multi-sink graphs by adding zero-cost wrappers");

  GenArgs gen_args;
  CLI::App* generate =
      app.add_subcommand("generate", "Emit a random task set in the file format");
  add_gen_flags(generate, gen_args);
  generate->add_option("--utilization", gen_args.utilization,
                       "Total utilization target (exact time string)")
      ->capture_default_str();
  generate->add_option("--out", gen_args.out, "Output path ('-' = stdout)")
      ->capture_default_str();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Acceptance ratios of both methods across utilization targets");
  add_gen_flags(sweep, sweep_args.gen);
  sweep->add_option("--utilizations", sweep_args.utilizations,
                    "Utilization targets, echoed verbatim into the CSV")
      ->required()
      ->delimiter(',');
  sweep->add_option("--sets-per-point", sweep_args.sets_per_point,
                    "Task sets generated per utilization value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_flag("--normalized", sweep_args.normalized,
                  "Treat each utilization as per-core (multiply by --cores)");
  sweep->add_option("--epsilon", sweep_args.epsilon,
                    "Fixed-point convergence threshold (exact time string)");
  sweep->add_option("--out", sweep_args.out, "Output path ('-' = stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*analyze) return run_analyze(analyze_args);
  if (*simulate) return run_simulate(sim_args);
  if (*generate) return run_generate(gen_args);
  if (*sweep) return run_sweep(sweep_args);
  return 2;
}
