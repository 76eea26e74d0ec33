#include "dagsched/workload.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagsched {

WorkloadContext::WorkloadContext(DagTask task, TimingProfile profile, Time response_time)
    : task_(std::move(task)),
      profile_(std::move(profile)),
      response_time_(std::move(response_time)) {
  if (response_time_ < profile_.r_isolated)
    throw std::invalid_argument(
        "workload context: response time below the isolated response time");
  if (response_time_ > task_.deadline())
    throw std::invalid_argument(
        "workload context: response time beyond the deadline");
  carry_in_slack_ = response_time_ - profile_.critical_path_length;
  earliest_.reserve(task_.size());
  latest_.reserve(task_.size());
  cost_.reserve(task_.size());
  for (const Node& n : task_.nodes()) {
    earliest_.push_back(profile_.earliest.at(n.id));
    latest_.push_back(profile_.latest.at(n.id));
    cost_.push_back(n.c_max);
  }
}

LLTask::LLTask(Time wcet, Time deadline, Time period, Time response)
    : C(std::move(wcet)), D(std::move(deadline)), T(std::move(period)), R(std::move(response)) {
  if (C < 0 || C > D || D > T || R < C || R > D)
    throw std::invalid_argument("reference task: need 0 <= C <= R <= D <= T");
}

namespace {

// Shared evaluation kernel. `slack` is the carry-in shift K; the no-carry-in
// variants run with slack = 0 and the single-job branch disabled.
struct Columns {
  const std::vector<Time>* offsets;  // earliest or latest, per node
  const std::vector<Time>* cost;
  Time period;
  Time total;
};

Time clamp_ramp(const Time& x, const Time& width) {
  if (x <= 0) return Time(0);
  if (x >= width) return width;
  return x;
}

Time node_envelope(const Columns& c, std::size_t i, const Time& t) {
  return clamp_ramp(time_mod(t, c.period) - (*c.offsets)[i], (*c.cost)[i]);
}

Time sum_envelopes(const Columns& c, const Time& t) {
  Time sum = 0;
  for (std::size_t i = 0; i < c.offsets->size(); ++i) sum += node_envelope(c, i, t);
  return sum;
}

// Cumulative envelope: floor((t+K)/T) complete jobs plus a partial one; below
// T-K the window overlaps a single job and the plain per-node sum applies.
Time cumulative(const Columns& c, const Time& slack, const Time& t) {
  if (t < 0) return Time(0);
  if (t < c.period - slack) return sum_envelopes(c, t);
  Time shifted = t + slack;
  return floor_div(shifted, c.period) * c.total + sum_envelopes(c, time_mod(shifted, c.period));
}

Columns upper_columns(const WorkloadContext& ctx) {
  return {&ctx.earliest(), &ctx.cost(), ctx.task().period(), ctx.profile().total_wcet};
}
Columns lower_columns(const WorkloadContext& ctx) {
  return {&ctx.latest(), &ctx.cost(), ctx.task().period(), ctx.profile().total_wcet};
}

// NC evaluation always takes the periodic branch: floor(t/T) jobs plus a
// partial one, with no phase shift.
Time cumulative_nc(const Columns& c, const Time& t) {
  if (t < 0) return Time(0);
  return floor_div(t, c.period) * c.total + sum_envelopes(c, time_mod(t, c.period));
}

struct ScratchColumns {
  std::vector<Time> offsets, cost;
};

ScratchColumns make_scratch(const DagTask& task, const std::map<std::string, Time>& offs) {
  ScratchColumns s;
  s.offsets.reserve(task.size());
  s.cost.reserve(task.size());
  for (const Node& n : task.nodes()) {
    s.offsets.push_back(offs.at(n.id));
    s.cost.push_back(n.c_max);
  }
  return s;
}

// Everything the window maximizer needs, independent of where the vectors
// live. Lets the profile-only entry points skip building a full context.
struct EnvelopeTable {
  const std::vector<Time>* earliest;
  const std::vector<Time>* latest;
  const std::vector<Time>* cost;
  Time period;
  Time total;
  Time len;
};

EnvelopeTable table_of(const WorkloadContext& ctx) {
  return {&ctx.earliest(), &ctx.latest(), &ctx.cost(), ctx.task().period(),
          ctx.profile().total_wcet, ctx.profile().critical_path_length};
}

OffsetCandidates offsets_for(const EnvelopeTable& tab, const Time& delta,
                             const Time& slack) {
  const Time& len = tab.len;
  const Time& T = tab.period;
  std::vector<Time> out;
  out.push_back(Time(0));
  out.push_back(len);
  for (const Time& l : *tab.latest) out.push_back(l);
  // Phases that align a saturation point e_i + c_i of the upper envelope
  // with the window start: delta + phi + shift = k T + e_i + c_i. The job
  // boundary phi = k T - shift - delta is included as well; the carry-in
  // form switches branches there and may peak exactly on the switch. The
  // carry-in envelope follows the plain sum below T - K, so its candidates
  // need both the shifted and the unshifted alignment families.
  auto push_alignments = [&](const Time& shift) {
    Time k_lo = floor_div(delta + shift - len, T);
    if (k_lo < 0) k_lo = 0;
    Time k_hi = floor_div(delta + len + shift, T);
    for (Time k = k_lo; k <= k_hi; k += 1) {
      Time base = k * T - shift - delta;
      if (base >= 0 && base <= len) out.push_back(base);
      for (std::size_t i = 0; i < tab.earliest->size(); ++i) {
        Time phi = base + (*tab.earliest)[i] + (*tab.cost)[i];
        if (phi >= 0 && phi <= len) out.push_back(phi);
      }
    }
  };
  push_alignments(slack);
  if (slack != 0) push_alignments(Time(0));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return OffsetCandidates{std::move(out)};
}

// Shared maximizer over the candidate offsets. With slack = 0 the cumulative
// kernel degenerates to the always-periodic no-carry-in form.
Time max_window(const EnvelopeTable& tab, const Time& delta, const Time& slack) {
  if (delta < 0) return Time(0);
  Columns up{tab.earliest, tab.cost, tab.period, tab.total};
  Columns low{tab.latest, tab.cost, tab.period, tab.total};
  Time best = 0;
  for (const Time& phi : offsets_for(tab, delta, slack).offsets) {
    Time w = cumulative(up, slack, delta + phi) - cumulative(low, slack, phi);
    if (w > best) best = w;
  }
  return best;
}

}  // namespace

Time node_workload_upper(const WorkloadContext& ctx, std::string_view node_id,
                         const Time& t) {
  if (t < 0) return Time(0);
  return node_envelope(upper_columns(ctx), ctx.task().node_index(node_id), t);
}

Time node_workload_lower(const WorkloadContext& ctx, std::string_view node_id,
                         const Time& t) {
  if (t < 0) return Time(0);
  return node_envelope(lower_columns(ctx), ctx.task().node_index(node_id), t);
}

Time task_workload_upper_ci(const WorkloadContext& ctx, const Time& t) {
  return cumulative(upper_columns(ctx), ctx.carry_in_slack(), t);
}

Time task_workload_lower_ci(const WorkloadContext& ctx, const Time& t) {
  return cumulative(lower_columns(ctx), ctx.carry_in_slack(), t);
}

Time task_workload_upper_nc(const DagTask& task, const TimingProfile& profile,
                            const Time& t) {
  ScratchColumns s = make_scratch(task, profile.earliest);
  return cumulative_nc({&s.offsets, &s.cost, task.period(), profile.total_wcet}, t);
}

Time task_workload_lower_nc(const DagTask& task, const TimingProfile& profile,
                            const Time& t) {
  ScratchColumns s = make_scratch(task, profile.latest);
  return cumulative_nc({&s.offsets, &s.cost, task.period(), profile.total_wcet}, t);
}

Time task_workload_upper_nc(const WorkloadContext& ctx, const Time& t) {
  return cumulative_nc(upper_columns(ctx), t);
}

Time task_workload_lower_nc(const WorkloadContext& ctx, const Time& t) {
  return cumulative_nc(lower_columns(ctx), t);
}

OffsetCandidates candidate_offsets(const WorkloadContext& ctx, const Time& delta) {
  return offsets_for(table_of(ctx), delta, ctx.carry_in_slack());
}

OffsetCandidates candidate_offsets_nc(const WorkloadContext& ctx, const Time& delta) {
  return offsets_for(table_of(ctx), delta, Time(0));
}

Time workload_carry_in(const WorkloadContext& ctx, const Time& delta) {
  return max_window(table_of(ctx), delta, ctx.carry_in_slack());
}

Time workload_no_carry_in(const WorkloadContext& ctx, const Time& delta) {
  return max_window(table_of(ctx), delta, Time(0));
}

Time workload_no_carry_in(const DagTask& task, const TimingProfile& profile,
                          const Time& delta) {
  ScratchColumns up = make_scratch(task, profile.earliest);
  ScratchColumns low = make_scratch(task, profile.latest);
  EnvelopeTable tab{&up.offsets, &low.offsets, &up.cost, task.period(),
                    profile.total_wcet, profile.critical_path_length};
  return max_window(tab, delta, Time(0));
}

Time workload_diff_dag(const WorkloadContext& ctx, const Time& delta) {
  Time diff = workload_carry_in(ctx, delta) - workload_no_carry_in(ctx, delta);
  return diff > 0 ? diff : Time(0);
}

Time ll_workload_nc(const LLTask& task, const Time& delta) {
  if (delta <= 0) return Time(0);
  return floor_div(delta, task.T) * task.C + std::min(time_mod(delta, task.T), task.C);
}

Time ll_workload_ci(const LLTask& task, const Time& delta) {
  if (delta < 0) return Time(0);
  Time body = delta - task.C;
  if (body < 0) body = 0;
  Time partial = time_mod(body, task.T) - (task.T - task.R);
  if (partial < 0) partial = 0;
  if (partial > task.C) partial = task.C;
  return floor_div(body, task.T) * task.C + task.C + partial;
}

Time ll_workload_diff(const LLTask& task, const Time& delta) {
  Time diff = ll_workload_ci(task, delta) - ll_workload_nc(task, delta);
  return diff > 0 ? diff : Time(0);
}

}  // namespace dagsched
