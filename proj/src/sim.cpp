#include "dagsched/sim.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "dagsched/rng.hpp"

namespace dagsched {

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::Release: return "release";
    case EventKind::Start: return "start";
    case EventKind::Preempt: return "preempt";
    case EventKind::Resume: return "resume";
    case EventKind::Complete: return "complete";
  }
  return "event";
}

namespace {

constexpr std::uint64_t kReleaseStream = 1;
constexpr std::uint64_t kCostStream = 2;

std::vector<std::vector<Time>> release_times(const TaskSet& ts, const Scenario& sc) {
  std::vector<std::vector<Time>> out(ts.tasks().size());
  RngStream root(sc.seed);
  for (std::size_t i = 0; i < ts.tasks().size(); ++i) {
    const Time& period = ts.tasks()[i].period();
    RngStream stream = root.fork(kReleaseStream).fork(i);
    Time r = 0;
    std::uint64_t k = 0;
    while (r < sc.horizon) {
      out[i].push_back(r);
      if (sc.release == ReleasePattern::SynchronousPeriodic) {
        r += period;
      } else {
        r += stream.fork(k).uniform_grid(period, sc.jitter_factor * period);
      }
      ++k;
    }
  }
  return out;
}

std::vector<Time> sample_costs(const DagTask& task, std::size_t task_index,
                               std::size_t job_index, const Scenario& sc,
                               const RngStream& root) {
  std::vector<Time> cost;
  cost.reserve(task.size());
  for (std::size_t n = 0; n < task.size(); ++n) {
    const Node& nd = task.nodes()[n];
    if (sc.execution == ExecutionPattern::AlwaysCmax || nd.c_min == nd.c_max) {
      cost.push_back(nd.c_max);
    } else {
      cost.push_back(root.fork(kCostStream)
                         .fork(task_index)
                         .fork(job_index)
                         .fork(n)
                         .uniform_grid(nd.c_min, nd.c_max));
    }
  }
  return cost;
}

struct LiveJob {
  std::size_t record;  // index into SimOutcome::jobs
  std::size_t task;
  std::size_t job;
  std::vector<Time> remaining;
  std::vector<int> waiting_parents;
  std::vector<char> done;
  std::vector<char> ever_ran;
  std::vector<int> core;  // -1 when not running
  std::size_t done_count = 0;
};

}  // namespace

SimOutcome simulate(const TaskSet& ts, const Scenario& scenario) {
  Time max_period = 0;
  for (const DagTask& t : ts.tasks()) max_period = std::max(max_period, t.period());
  if (scenario.horizon < max_period)
    throw SimulationError("HorizonTooShort: horizon " + format_time(scenario.horizon) +
                          " is below the largest period " + format_time(max_period));
  if (scenario.jitter_factor < 1)
    throw SimulationError("jitter factor must be at least 1");

  const unsigned m = ts.cores();
  RngStream root(scenario.seed);
  auto releases = release_times(ts, scenario);
  std::vector<std::size_t> next_release(ts.tasks().size(), 0);

  SimOutcome out;
  out.horizon = scenario.horizon;
  out.max_observed_response.resize(ts.tasks().size());
  out.miss_count.assign(ts.tasks().size(), 0);

  std::vector<LiveJob> live;
  // core -> (live index, node), or (-1, -1) when idle
  std::vector<std::pair<int, int>> cores(m, {-1, -1});

  auto complete_node = [&](LiveJob& lj, std::size_t n, const Time& now, int core_id) {
    const DagTask& task = ts.tasks()[lj.task];
    lj.done[n] = 1;
    ++lj.done_count;
    out.trace.push_back({now, EventKind::Complete, static_cast<int>(lj.task),
                         static_cast<int>(n), static_cast<long>(lj.job), core_id});
    for (int s : task.succs(n)) --lj.waiting_parents[s];
    if (n == task.exit()) out.jobs[lj.record].completion = now;
  };

  Time now = 0;
  while (true) {
    // Completions of nodes whose remaining work reached zero on a core.
    for (unsigned c = 0; c < m; ++c) {
      auto [lji, n] = cores[c];
      if (lji < 0) continue;
      LiveJob& lj = live[lji];
      if (lj.remaining[n] == 0) {
        cores[c] = {-1, -1};
        lj.core[n] = -1;
        complete_node(lj, n, now, static_cast<int>(c));
      }
    }

    // Releases due now.
    for (std::size_t i = 0; i < ts.tasks().size(); ++i) {
      if (next_release[i] >= releases[i].size()) continue;
      if (releases[i][next_release[i]] != now) continue;
      const DagTask& task = ts.tasks()[i];
      std::size_t job_index = next_release[i]++;
      LiveJob lj;
      lj.record = out.jobs.size();
      lj.task = i;
      lj.job = job_index;
      JobRecord rec;
      rec.task = i;
      rec.job = job_index;
      rec.release = now;
      rec.absolute_deadline = now + task.deadline();
      rec.cost = sample_costs(task, i, job_index, scenario, root);
      lj.remaining = rec.cost;
      lj.waiting_parents.resize(task.size());
      for (std::size_t n = 0; n < task.size(); ++n)
        lj.waiting_parents[n] = static_cast<int>(task.preds(n).size());
      lj.done.assign(task.size(), 0);
      lj.ever_ran.assign(task.size(), 0);
      lj.core.assign(task.size(), -1);
      out.jobs.push_back(std::move(rec));
      out.trace.push_back({now, EventKind::Release, static_cast<int>(i), -1,
                           static_cast<long>(job_index), -1});
      live.push_back(std::move(lj));
    }

    // Zero-work ready nodes finish instantly without occupying a core.
    for (bool changed = true; changed;) {
      changed = false;
      for (LiveJob& lj : live) {
        const DagTask& task = ts.tasks()[lj.task];
        for (std::size_t n = 0; n < task.size(); ++n) {
          if (lj.done[n] || lj.waiting_parents[n] != 0 || lj.core[n] >= 0) continue;
          if (lj.remaining[n] != 0) continue;
          complete_node(lj, n, now, -1);
          changed = true;
        }
      }
    }

    live.erase(std::remove_if(live.begin(), live.end(),
                              [&](const LiveJob& lj) {
                                return lj.done_count == ts.tasks()[lj.task].size();
                              }),
               live.end());
    for (unsigned c = 0; c < m; ++c) cores[c] = {-1, -1};
    for (std::size_t j = 0; j < live.size(); ++j) {
      const LiveJob& lj = live[j];
      for (std::size_t n = 0; n < lj.core.size(); ++n)
        if (lj.core[n] >= 0) cores[lj.core[n]] = {static_cast<int>(j), static_cast<int>(n)};
    }

    // Pick the m highest-priority ready nodes; (task, job, node) order.
    std::vector<std::pair<std::size_t, std::size_t>> ready;  // (live index, node)
    {
      std::vector<std::size_t> order(live.size());
      for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(live[a].task, live[a].job) < std::tie(live[b].task, live[b].job);
      });
      for (std::size_t j : order) {
        const LiveJob& lj = live[j];
        for (std::size_t n = 0; n < lj.done.size(); ++n)
          if (!lj.done[n] && lj.waiting_parents[n] == 0) ready.emplace_back(j, n);
      }
    }
    std::size_t want = std::min<std::size_t>(m, ready.size());

    // Preempt displaced nodes, then place newcomers on the lowest free cores.
    std::set<std::pair<std::size_t, std::size_t>> chosen(ready.begin(),
                                                         ready.begin() + want);
    for (unsigned c = 0; c < m; ++c) {
      auto [lji, n] = cores[c];
      if (lji < 0) continue;
      if (!chosen.count({static_cast<std::size_t>(lji), static_cast<std::size_t>(n)})) {
        LiveJob& lj = live[lji];
        out.trace.push_back({now, EventKind::Preempt, static_cast<int>(lj.task),
                             static_cast<int>(n), static_cast<long>(lj.job),
                             static_cast<int>(c)});
        lj.core[n] = -1;
        cores[c] = {-1, -1};
      }
    }
    for (std::size_t k = 0; k < want; ++k) {
      auto [lji, n] = ready[k];
      LiveJob& lj = live[lji];
      if (lj.core[n] >= 0) continue;
      unsigned c = 0;
      while (cores[c].first >= 0) ++c;
      cores[c] = {static_cast<int>(lji), static_cast<int>(n)};
      lj.core[n] = static_cast<int>(c);
      out.trace.push_back({now, lj.ever_ran[n] ? EventKind::Resume : EventKind::Start,
                           static_cast<int>(lj.task), static_cast<int>(n),
                           static_cast<long>(lj.job), static_cast<int>(c)});
      lj.ever_ran[n] = 1;
    }

    // Advance to the next completion or release.
    bool have_next = false;
    Time next_time = 0;
    for (unsigned c = 0; c < m; ++c) {
      auto [lji, n] = cores[c];
      if (lji < 0) continue;
      Time finish = now + live[lji].remaining[n];
      if (!have_next || finish < next_time) {
        next_time = finish;
        have_next = true;
      }
    }
    for (std::size_t i = 0; i < ts.tasks().size(); ++i) {
      if (next_release[i] >= releases[i].size()) continue;
      const Time& r = releases[i][next_release[i]];
      if (!have_next || r < next_time) {
        next_time = r;
        have_next = true;
      }
    }
    if (!have_next || next_time > scenario.horizon) break;
    for (unsigned c = 0; c < m; ++c) {
      auto [lji, n] = cores[c];
      if (lji < 0) continue;
      live[lji].remaining[n] -= next_time - now;
    }
    now = next_time;
  }

  for (JobRecord& rec : out.jobs) {
    rec.missed = rec.completion ? *rec.completion > rec.absolute_deadline
                                : rec.absolute_deadline <= out.horizon;
    if (rec.missed) {
      ++out.miss_count[rec.task];
      ++out.total_misses;
    }
    if (rec.completion) {
      Time response = *rec.completion - rec.release;
      auto& best = out.max_observed_response[rec.task];
      if (!best || response > *best) best = response;
    }
  }
  return out;
}

void write_trace(const TaskSet& ts, const SimOutcome& outcome, std::ostream& os) {
  os << "time,event,task,node,core\n";
  for (const TraceEvent& ev : outcome.trace) {
    auto dec = format_time_decimal_exact(ev.time);
    os << (dec ? *dec : format_time(ev.time)) << ',' << event_name(ev.kind) << ','
       << ts.tasks()[ev.task].id() << ',';
    if (ev.node >= 0)
      os << ts.tasks()[ev.task].nodes()[ev.node].id;
    else
      os << '-';
    os << ',';
    if (ev.core >= 0)
      os << ev.core;
    else
      os << '-';
    os << '\n';
  }
}

namespace {

[[noreturn]] void trace_fail(const std::string& what) {
  throw SimulationError("trace invariant violated: " + what);
}

struct ReplayNode {
  Time executed = 0;
  int open_core = -1;
  Time open_time = 0;
  bool complete = false;
  Time completion = 0;
  int waiting_parents = 0;
  bool ever_open = false;
};

struct ReplayJob {
  const JobRecord* rec = nullptr;
  bool released = false;
  std::vector<ReplayNode> nodes;
};

}  // namespace

void verify_trace(const TaskSet& ts, const SimOutcome& outcome) {
  const unsigned m = ts.cores();
  std::map<std::pair<std::size_t, std::size_t>, ReplayJob> jobs;
  for (const JobRecord& rec : outcome.jobs) {
    ReplayJob rj;
    rj.rec = &rec;
    rj.nodes.resize(ts.tasks()[rec.task].size());
    const DagTask& task = ts.tasks()[rec.task];
    for (std::size_t n = 0; n < task.size(); ++n)
      rj.nodes[n].waiting_parents = static_cast<int>(task.preds(n).size());
    jobs.emplace(std::make_pair(rec.task, rec.job), std::move(rj));
  }

  // (task, job, node) currently ready but not running; ordered by priority.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> waiting;
  // core -> (task, job, node)
  std::vector<std::optional<std::tuple<std::size_t, std::size_t, std::size_t>>> on_core(m);
  std::multiset<std::size_t> running_tasks;

  auto waiting_erase = [&](std::size_t t, std::size_t j, std::size_t n) {
    waiting.erase({t, j, n});
  };
  auto node_ready = [&](ReplayJob& rj, std::size_t n) {
    return rj.released && !rj.nodes[n].complete && rj.nodes[n].waiting_parents == 0 &&
           rj.nodes[n].open_core < 0;
  };

  Time prev_time = 0;
  auto check_interval = [&]() {
    // State is stable on the open interval before the current instant.
    if (waiting.empty()) return;
    if (running_tasks.size() < m)
      trace_fail("a core idles while a ready node waits (work conservation)");
    std::size_t top_waiting = std::get<0>(*waiting.begin());
    std::size_t worst_running = *running_tasks.rbegin();
    if (top_waiting < worst_running)
      trace_fail("a waiting node outranks a running one (priority compliance)");
  };

  for (std::size_t idx = 0; idx < outcome.trace.size(); ++idx) {
    const TraceEvent& ev = outcome.trace[idx];
    if (ev.time < prev_time) trace_fail("events out of chronological order");
    if (ev.time > prev_time) {
      check_interval();
      // Account executed time on every open core.
      for (unsigned c = 0; c < m; ++c) {
        if (!on_core[c]) continue;
        auto [t, j, n] = *on_core[c];
        jobs.at({t, j}).nodes[n].executed += ev.time - prev_time;
      }
      prev_time = ev.time;
    }
    if (ev.task < 0 || static_cast<std::size_t>(ev.task) >= ts.tasks().size())
      trace_fail("event names an unknown task");
    auto it = jobs.find({static_cast<std::size_t>(ev.task), static_cast<std::size_t>(ev.job)});
    if (it == jobs.end()) trace_fail("event names an unrecorded job");
    ReplayJob& rj = it->second;
    const DagTask& task = ts.tasks()[ev.task];

    switch (ev.kind) {
      case EventKind::Release:
        if (rj.released) trace_fail("job released twice");
        if (ev.time != rj.rec->release) trace_fail("release time disagrees with the job record");
        rj.released = true;
        for (std::size_t n = 0; n < task.size(); ++n)
          if (node_ready(rj, n)) waiting.insert({it->first.first, it->first.second, n});
        break;
      case EventKind::Start:
      case EventKind::Resume: {
        if (ev.node < 0 || static_cast<std::size_t>(ev.node) >= task.size())
          trace_fail("start of an unknown node");
        ReplayNode& rn = rj.nodes[ev.node];
        if (!rj.released) trace_fail("node started before its job release");
        if (rn.complete) trace_fail("completed node restarted");
        if (rn.waiting_parents != 0) trace_fail("node started before its predecessors finished");
        if (rn.open_core >= 0) trace_fail("node started while already running");
        if ((ev.kind == EventKind::Resume) != rn.ever_open)
          trace_fail("start/resume does not match the node history");
        if (ev.core < 0 || static_cast<unsigned>(ev.core) >= m)
          trace_fail("start on an out-of-range core");
        if (on_core[ev.core]) trace_fail("two nodes share a core");
        rn.open_core = ev.core;
        rn.open_time = ev.time;
        rn.ever_open = true;
        on_core[ev.core] = {it->first.first, it->first.second,
                            static_cast<std::size_t>(ev.node)};
        running_tasks.insert(it->first.first);
        waiting_erase(it->first.first, it->first.second, ev.node);
        break;
      }
      case EventKind::Preempt: {
        if (ev.node < 0 || static_cast<std::size_t>(ev.node) >= task.size())
          trace_fail("preempt of an unknown node");
        ReplayNode& rn = rj.nodes[ev.node];
        if (rn.open_core != ev.core || rn.open_core < 0)
          trace_fail("preempt does not match the running core");
        on_core[rn.open_core].reset();
        running_tasks.erase(running_tasks.find(it->first.first));
        rn.open_core = -1;
        waiting.insert({it->first.first, it->first.second, static_cast<std::size_t>(ev.node)});
        break;
      }
      case EventKind::Complete: {
        if (ev.node < 0 || static_cast<std::size_t>(ev.node) >= task.size())
          trace_fail("completion of an unknown node");
        ReplayNode& rn = rj.nodes[ev.node];
        if (rn.complete) trace_fail("node completed twice");
        if (!rj.released) trace_fail("node completed before its job release");
        if (rn.waiting_parents != 0)
          trace_fail("node completed before its predecessors finished");
        if (rn.open_core >= 0) {
          if (rn.open_core != ev.core) trace_fail("completion core mismatch");
          on_core[rn.open_core].reset();
          running_tasks.erase(running_tasks.find(it->first.first));
          rn.open_core = -1;
        } else if (ev.core >= 0) {
          trace_fail("completion claims a core the node does not hold");
        }
        if (rn.executed != rj.rec->cost[ev.node])
          trace_fail("node '" + task.nodes()[ev.node].id + "' completed after " +
                     format_time(rn.executed) + " of " +
                     format_time(rj.rec->cost[ev.node]) + " time units");
        rn.complete = true;
        rn.completion = ev.time;
        waiting_erase(it->first.first, it->first.second, ev.node);
        for (int s : task.succs(ev.node)) {
          ReplayNode& child = rj.nodes[s];
          if (--child.waiting_parents == 0 && node_ready(rj, s))
            waiting.insert({it->first.first, it->first.second, static_cast<std::size_t>(s)});
        }
        if (static_cast<std::size_t>(ev.node) == task.exit()) {
          if (!rj.rec->completion || *rj.rec->completion != ev.time)
            trace_fail("job completion disagrees with the trace");
        }
        break;
      }
    }
  }

  for (const auto& [key, rj] : jobs) {
    if (!rj.released) trace_fail("job record without a release event");
    const DagTask& task = ts.tasks()[key.first];
    for (std::size_t n = 0; n < rj.nodes.size(); ++n) {
      const ReplayNode& rn = rj.nodes[n];
      if (rn.complete) continue;
      if (rn.executed > rj.rec->cost[n]) trace_fail("node executed beyond its cost");
      if (rj.rec->completion)
        trace_fail("job marked complete with node '" + task.nodes()[n].id + "' unfinished");
    }
    bool expect_missed = rj.rec->completion
                             ? *rj.rec->completion > rj.rec->absolute_deadline
                             : rj.rec->absolute_deadline <= outcome.horizon;
    if (rj.rec->missed != expect_missed) trace_fail("deadline-miss flag is inconsistent");
  }
}

ConsistencyReport check_against_analysis(const TaskSet& ts, const AnalysisConfig& config,
                                         std::span<const Scenario> scenarios) {
  ConsistencyReport report;
  report.analysis = analyze(ts, config);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    SimOutcome out = simulate(ts, scenarios[s]);
    verify_trace(ts, out);
    for (std::size_t i = 0; i < ts.tasks().size(); ++i) {
      const TaskResult& tr = report.analysis.tasks[i];
      if (tr.verdict != Verdict::Schedulable) continue;
      const std::string& id = ts.tasks()[i].id();
      if (out.miss_count[i] > 0)
        report.counterexamples.push_back(
            "scenario " + std::to_string(s) + ": task '" + id +
            "' accepted by the analysis missed " + std::to_string(out.miss_count[i]) +
            " deadline(s)");
      if (out.max_observed_response[i] && tr.response_bound &&
          *out.max_observed_response[i] > *tr.response_bound)
        report.counterexamples.push_back(
            "scenario " + std::to_string(s) + ": task '" + id + "' observed response " +
            format_time(*out.max_observed_response[i]) + " above the certified bound " +
            format_time(*tr.response_bound));
    }
  }
  return report;
}

}  // namespace dagsched
