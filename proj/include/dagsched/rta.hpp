#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dagsched/workload.hpp"

namespace dagsched {

enum class Method {
  Basic,          // carry-in bound for every higher-priority task
  LimitedCarryIn  // carry-in surplus only for the cores-1 worst interferers
};

struct AnalysisConfig {
  Method method = Method::Basic;
  Time epsilon = Time(1, 1000000);   // fixed-point stopping increment
  unsigned max_iterations = 100000;  // exceeded => conservatively unschedulable
};

enum class Verdict {
  Schedulable,
  Unschedulable,
  BlockedByHigherPriority,  // not analyzed: some higher-priority task already failed
};

const char* verdict_name(Verdict v);

struct TaskResult {
  std::optional<Time> response_bound;  // empty = no finite bound established
  Verdict verdict = Verdict::Unschedulable;
  std::vector<Time> iterations;  // non-decreasing fixed-point trace
};

struct AnalysisReport {
  std::vector<TaskResult> tasks;
  bool set_schedulable = false;
};

// Mean interference bounds over a window of length delta. `hp` holds the
// finalized contexts of all higher-priority tasks, in priority order.
Time interference_basic(std::span<const WorkloadContext> hp, unsigned cores,
                        const Time& delta);

// Charges the full carry-in surplus only to the cores-1 largest contributors;
// everyone pays the no-carry-in bound. Both sums share the 1/cores factor.
Time interference_limited(std::span<const WorkloadContext> hp, unsigned cores,
                          const Time& delta);

// Single-node reference recurrence: per-core share of the cores-1 largest
// carry-in surpluses plus the plain sum of no-carry-in bounds.
Time interference_ll(std::span<const LLTask> tasks, std::size_t index, unsigned cores,
                     const Time& delta);

struct FixedPointResult {
  std::optional<Time> response;
  Verdict verdict = Verdict::Unschedulable;
  std::vector<Time> iterations;
};

// Smallest certified solution of R = interference(R) + r_isolated, bounded by
// the deadline. Starts at r_isolated; terminates on an exact repeat, or once
// increments drop below epsilon validates upward (a doubling search brackets a
// certified point, then the bracket is refined to its minimal certified
// point), or rejects past the deadline or the iteration cap.
FixedPointResult response_time(const DagTask& task, const TimingProfile& profile,
                               std::span<const WorkloadContext> hp, unsigned cores,
                               const AnalysisConfig& config);

// Whole-set analysis in priority order. A failed task blocks every
// lower-priority task (their verdict reports the propagated failure).
AnalysisReport analyze(const TaskSet& ts, const AnalysisConfig& config);

}  // namespace dagsched
