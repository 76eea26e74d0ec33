#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dagsched/rta.hpp"

namespace dagsched {

enum class ReleasePattern {
  SynchronousPeriodic,  // all tasks release at 0 and then strictly periodically
  SporadicRandom,       // inter-arrival drawn uniformly from [T, jitter * T]
};

enum class ExecutionPattern {
  AlwaysCmax,
  RandomInRange,  // per-job node costs drawn from [c_min, c_max]
};

struct Scenario {
  ReleasePattern release = ReleasePattern::SynchronousPeriodic;
  ExecutionPattern execution = ExecutionPattern::AlwaysCmax;
  std::uint64_t seed = 0;
  Time jitter_factor = Time(3, 2);
  Time horizon = 0;  // must cover at least the largest period
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EventKind { Release, Start, Preempt, Resume, Complete };

const char* event_name(EventKind k);

struct TraceEvent {
  Time time;
  EventKind kind;
  int task = -1;
  int node = -1;  // -1 for job-level events
  long job = -1;
  int core = -1;  // -1 when no core is involved (release, zero-cost completion)
};

struct JobRecord {
  std::size_t task = 0;
  std::size_t job = 0;
  Time release;
  Time absolute_deadline;
  std::vector<Time> cost;  // sampled per node, topological order
  std::optional<Time> completion;
  bool missed = false;  // completed late, or unfinished with the deadline inside the horizon
};

struct SimOutcome {
  Time horizon;
  std::vector<JobRecord> jobs;
  std::vector<TraceEvent> trace;
  std::vector<std::optional<Time>> max_observed_response;  // per task, completed jobs only
  std::vector<std::size_t> miss_count;                     // per task
  std::size_t total_misses = 0;
};

// Work-conserving global fixed-priority run over [0, horizon]: at every event
// the cores() highest-priority ready nodes execute, ties broken by task index,
// then job, then topological node index. Preemption and migration are free.
// Throws SimulationError when the horizon is shorter than the largest period
// (nothing interesting can complete) or the jitter factor is below 1.
SimOutcome simulate(const TaskSet& ts, const Scenario& scenario);

// Lines of `time,event,task,node,core`. Times print as exact terminating
// decimals, falling back to "p/q" when the expansion does not terminate.
void write_trace(const TaskSet& ts, const SimOutcome& outcome, std::ostream& os);

// Replays the trace and rechecks every schedule invariant: interval shape,
// core exclusivity, precedence, executed work against sampled costs, work
// conservation and priority compliance, and the job bookkeeping. Throws
// SimulationError describing the first violation.
void verify_trace(const TaskSet& ts, const SimOutcome& outcome);

// A simulation can only refute an analysis, never confirm it: a run with no
// misses proves nothing, while an observed response above a certified bound
// or a deadline miss of an accepted task disproves it.
struct ConsistencyReport {
  AnalysisReport analysis;
  std::vector<std::string> counterexamples;
  bool consistent() const { return counterexamples.empty(); }
};

ConsistencyReport check_against_analysis(const TaskSet& ts, const AnalysisConfig& config,
                                         std::span<const Scenario> scenarios);

}  // namespace dagsched
