#include "dagsched/rta.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dagsched {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Schedulable: return "schedulable";
    case Verdict::Unschedulable: return "unschedulable";
    case Verdict::BlockedByHigherPriority: return "blocked_by_higher_priority";
  }
  return "unknown";
}

Time interference_basic(std::span<const WorkloadContext> hp, unsigned cores,
                        const Time& delta) {
  if (cores < 1) throw std::invalid_argument("interference: zero cores");
  Time sum = 0;
  for (const WorkloadContext& ctx : hp) sum += workload_carry_in(ctx, delta);
  return sum / cores;
}

Time interference_limited(std::span<const WorkloadContext> hp, unsigned cores,
                          const Time& delta) {
  if (cores < 1) throw std::invalid_argument("interference: zero cores");
  Time nc_sum = 0;
  std::vector<Time> surplus;
  surplus.reserve(hp.size());
  for (const WorkloadContext& ctx : hp) {
    Time nc = workload_no_carry_in(ctx, delta);
    Time ci = workload_carry_in(ctx, delta);
    nc_sum += nc;
    surplus.push_back(ci > nc ? ci - nc : Time(0));
  }
  std::size_t take = std::min<std::size_t>(cores - 1, surplus.size());
  std::partial_sort(surplus.begin(), surplus.begin() + take, surplus.end(),
                    std::greater<Time>());
  Time surplus_sum = 0;
  for (std::size_t i = 0; i < take; ++i) surplus_sum += surplus[i];
  return (surplus_sum + nc_sum) / cores;
}

Time interference_ll(std::span<const LLTask> tasks, std::size_t index, unsigned cores,
                     const Time& delta) {
  if (cores < 1) throw std::invalid_argument("interference: zero cores");
  if (index > tasks.size()) throw std::out_of_range("interference: bad task index");
  Time nc_sum = 0;
  std::vector<Time> surplus;
  surplus.reserve(index);
  for (std::size_t j = 0; j < index; ++j) {
    nc_sum += ll_workload_nc(tasks[j], delta);
    surplus.push_back(ll_workload_diff(tasks[j], delta));
  }
  std::size_t take = std::min<std::size_t>(cores - 1, surplus.size());
  std::partial_sort(surplus.begin(), surplus.begin() + take, surplus.end(),
                    std::greater<Time>());
  Time surplus_sum = 0;
  for (std::size_t i = 0; i < take; ++i) surplus_sum += surplus[i];
  return surplus_sum / cores + nc_sum;
}

namespace {

// First certified point in (lo, hi]: f(x) = x - I(x) - r_isolated crosses from
// negative to >= 0 inside the bracket. Exact regula falsi; on a bracket that
// has narrowed to one linear piece the secant lands on the root exactly.
// Capped, with the certified upper end as fallback.
Time refine_certified(const std::function<Time(const Time&)>& f, Time lo, Time f_lo,
                      Time hi, Time f_hi) {
  for (int step = 0; step < 200; ++step) {
    if (f_hi == 0) return hi;
    Time x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (x <= lo || x >= hi) break;
    Time fx = f(x);
    if (fx == 0) return x;
    if (fx < 0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }
  return hi;
}

}  // namespace

FixedPointResult response_time(const DagTask& task, const TimingProfile& profile,
                               std::span<const WorkloadContext> hp, unsigned cores,
                               const AnalysisConfig& config) {
  if (config.epsilon <= 0) throw std::invalid_argument("analysis: epsilon must be positive");
  if (config.max_iterations < 1)
    throw std::invalid_argument("analysis: need at least one iteration");

  auto interference = [&](const Time& delta) {
    return config.method == Method::Basic ? interference_basic(hp, cores, delta)
                                          : interference_limited(hp, cores, delta);
  };
  const Time& deadline = task.deadline();
  const Time& r_isol = profile.r_isolated;

  FixedPointResult res;
  res.iterations.push_back(r_isol);
  if (r_isol > deadline) {
    res.verdict = Verdict::Unschedulable;
    return res;
  }

  Time prev = r_isol;
  for (unsigned k = 1; k <= config.max_iterations; ++k) {
    Time next = interference(prev) + r_isol;
    res.iterations.push_back(next);
    if (next > deadline) {
      res.verdict = Verdict::Unschedulable;
      return res;
    }
    if (next == prev) {
      res.response = prev;
      res.verdict = Verdict::Schedulable;
      return res;
    }
    if (next - prev < config.epsilon) {
      // Upward validation. f < 0 strictly below the nearest fixed point, so
      // the doubling search brackets it; the refinement recovers it exactly
      // whenever the bracket narrows onto one linear piece.
      auto f = [&](const Time& x) { return x - interference(x) - r_isol; };
      Time lo = next;
      Time f_lo = f(next);
      if (f_lo >= 0) {  // next already certified (interference dropped flat)
        res.iterations.push_back(next);
        res.response = next;
        res.verdict = Verdict::Schedulable;
        return res;
      }
      Time step = config.epsilon;
      while (true) {
        Time cand = next + step;
        Time f_cand = f(cand);
        if (f_cand >= 0) {
          Time accepted = refine_certified(f, lo, f_lo, cand, f_cand);
          res.iterations.push_back(accepted);
          if (accepted > deadline) {
            res.verdict = Verdict::Unschedulable;
            return res;
          }
          res.response = accepted;
          res.verdict = Verdict::Schedulable;
          return res;
        }
        if (cand > deadline) {
          res.iterations.push_back(cand);
          res.verdict = Verdict::Unschedulable;
          return res;
        }
        lo = cand;
        f_lo = f_cand;
        step *= 2;
      }
    }
    prev = next;
  }
  res.verdict = Verdict::Unschedulable;  // iteration budget exhausted
  return res;
}

AnalysisReport analyze(const TaskSet& ts, const AnalysisConfig& config) {
  AnalysisReport report;
  std::vector<WorkloadContext> hp;
  hp.reserve(ts.tasks().size());
  bool blocked = false;
  for (const DagTask& task : ts.tasks()) {
    if (blocked) {
      TaskResult r;
      r.verdict = Verdict::BlockedByHigherPriority;
      report.tasks.push_back(std::move(r));
      continue;
    }
    TimingProfile profile = timing_profile(task, ts.cores());
    FixedPointResult fp = response_time(task, profile, hp, ts.cores(), config);
    TaskResult r;
    r.response_bound = fp.response;
    r.verdict = fp.verdict;
    r.iterations = std::move(fp.iterations);
    report.tasks.push_back(std::move(r));
    if (fp.verdict == Verdict::Schedulable) {
      hp.emplace_back(task, std::move(profile), *fp.response);
    } else {
      blocked = true;
    }
  }
  report.set_schedulable = !blocked;
  return report;
}

}  // namespace dagsched
