#pragma once

#include <vector>

#include "dagsched/dag_task.hpp"

namespace dagsched {

// Everything needed to evaluate workload-request bounds for one interfering
// task: its structure, timing profile and a finalized response-time bound.
// carry_in_slack is R - critical_path_length; it shifts the phase of the
// carry-in job relative to the window start.
class WorkloadContext {
 public:
  WorkloadContext(DagTask task, TimingProfile profile, Time response_time);

  const DagTask& task() const { return task_; }
  const TimingProfile& profile() const { return profile_; }
  const Time& response_time() const { return response_time_; }
  const Time& carry_in_slack() const { return carry_in_slack_; }

  // Cached per-node columns in topological order.
  const std::vector<Time>& earliest() const { return earliest_; }
  const std::vector<Time>& latest() const { return latest_; }
  const std::vector<Time>& cost() const { return cost_; }

 private:
  DagTask task_;
  TimingProfile profile_;
  Time response_time_;
  Time carry_in_slack_;
  std::vector<Time> earliest_, latest_, cost_;
};

// Classic single-node reference task, used to cross-check the DAG bounds.
struct LLTask {
  LLTask(Time wcet, Time deadline, Time period, Time response);
  Time C, D, T, R;
};

// Sorted, duplicate-free window offsets; always contains 0 and the critical
// path length.
struct OffsetCandidates {
  std::vector<Time> offsets;
};

// Per-node released-work envelopes inside a window that starts t time units
// after the phase reference. Upper assumes earliest releases, lower latest.
Time node_workload_upper(const WorkloadContext& ctx, std::string_view node_id,
                         const Time& t);
Time node_workload_lower(const WorkloadContext& ctx, std::string_view node_id,
                         const Time& t);

// Task-level cumulative envelopes with carry-in: below one period minus the
// carry-in slack the window holds at most one job, beyond that whole periods
// contribute full WCETs plus a partial job.
Time task_workload_upper_ci(const WorkloadContext& ctx, const Time& t);
Time task_workload_lower_ci(const WorkloadContext& ctx, const Time& t);

// Carry-in-free variants (every job released inside the window).
Time task_workload_upper_nc(const DagTask& task, const TimingProfile& profile,
                            const Time& t);
Time task_workload_lower_nc(const DagTask& task, const TimingProfile& profile,
                            const Time& t);
Time task_workload_upper_nc(const WorkloadContext& ctx, const Time& t);
Time task_workload_lower_nc(const WorkloadContext& ctx, const Time& t);

// Window phases that can maximize upper(delta+phi) - lower(phi) over
// phi in [0, critical_path_length]: every latest-release offset, the phases
// aligning a node's saturation point with the window, and both interval ends.
OffsetCandidates candidate_offsets(const WorkloadContext& ctx, const Time& delta);
OffsetCandidates candidate_offsets_nc(const WorkloadContext& ctx, const Time& delta);

// Worst-case released work of the task in any window of length delta, with
// and without a carry-in job.
Time workload_carry_in(const WorkloadContext& ctx, const Time& delta);
Time workload_no_carry_in(const DagTask& task, const TimingProfile& profile,
                          const Time& delta);
Time workload_no_carry_in(const WorkloadContext& ctx, const Time& delta);

// Carry-in surplus: workload_carry_in - workload_no_carry_in, never negative.
Time workload_diff_dag(const WorkloadContext& ctx, const Time& delta);

// Single-node reference bounds in their corrected literature form.
Time ll_workload_nc(const LLTask& task, const Time& delta);
Time ll_workload_ci(const LLTask& task, const Time& delta);
Time ll_workload_diff(const LLTask& task, const Time& delta);

}  // namespace dagsched
