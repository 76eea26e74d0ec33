#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dagsched/sim.hpp"

using namespace dagsched;

namespace {

TaskSet worked_example(unsigned cores) {
  TaskDesc t1;
  t1.id = "t1";
  t1.nodes = {{"v1", 2, 2}};
  t1.deadline = 5;
  t1.period = 5;
  TaskDesc t2;
  t2.id = "t2";
  t2.nodes = {{"v1", 2, 2}, {"v2", 3, 3}, {"v3", 1, 1}, {"v4", 2, 2}};
  t2.edges = {{"v1", "v2"}, {"v1", "v3"}, {"v2", "v4"}, {"v3", "v4"}};
  t2.deadline = 15;
  t2.period = 20;
  return TaskSet({validate(t1), validate(t2)}, cores);
}

TaskSet single_node_pair(Time c1, Time t1, Time c2, Time t2, unsigned cores) {
  TaskDesc a;
  a.id = "t1";
  a.nodes = {{"v1", c1, c1}};
  a.deadline = t1;
  a.period = t1;
  TaskDesc b;
  b.id = "t2";
  b.nodes = {{"v1", c2, c2}};
  b.deadline = t2;
  b.period = t2;
  return TaskSet({validate(a), validate(b)}, cores);
}

std::string trace_text(const TaskSet& ts, const SimOutcome& outcome) {
  std::ostringstream os;
  write_trace(ts, outcome, os);
  return os.str();
}

}  // namespace

TEST_CASE("synchronous run of the worked example stays within its bounds") {
  TaskSet ts = worked_example(2);
  Scenario sc;
  sc.horizon = 40;
  SimOutcome out = simulate(ts, sc);
  verify_trace(ts, out);

  CHECK(out.total_misses == 0);
  CHECK(out.miss_count == std::vector<std::size_t>{0, 0});

  // releases fall in [0, horizon)
  std::size_t t1_jobs = 0, t2_jobs = 0;
  for (const JobRecord& job : out.jobs) (job.task == 0 ? t1_jobs : t2_jobs)++;
  CHECK(t1_jobs == 8);
  CHECK(t2_jobs == 2);

  REQUIRE(out.max_observed_response[0].has_value());
  REQUIRE(out.max_observed_response[1].has_value());
  CHECK(*out.max_observed_response[0] == Time(2));
  CHECK(*out.max_observed_response[1] == Time(7));
}

TEST_CASE("horizon and jitter are validated") {
  TaskSet ts = worked_example(2);
  Scenario sc;
  sc.horizon = 19;  // below the largest period
  CHECK_THROWS_WITH_AS(simulate(ts, sc), doctest::Contains("HorizonTooShort"),
                       SimulationError);
  sc.horizon = 40;
  sc.release = ReleasePattern::SporadicRandom;
  sc.jitter_factor = Time(1, 2);
  CHECK_THROWS_AS(simulate(ts, sc), SimulationError);
}

TEST_CASE("sporadic releases are deterministic per seed and respect the jitter band") {
  TaskSet ts = worked_example(2);
  Scenario sc;
  sc.release = ReleasePattern::SporadicRandom;
  sc.execution = ExecutionPattern::RandomInRange;
  sc.seed = 42;
  sc.horizon = 200;

  SimOutcome a = simulate(ts, sc);
  SimOutcome b = simulate(ts, sc);
  verify_trace(ts, a);
  CHECK(trace_text(ts, a) == trace_text(ts, b));

  sc.seed = 43;
  SimOutcome c = simulate(ts, sc);
  CHECK(trace_text(ts, a) != trace_text(ts, c));

  // inter-arrival gaps within [T, jitter * T]
  std::vector<std::vector<Time>> releases(2);
  for (const JobRecord& job : a.jobs) releases[job.task].push_back(job.release);
  for (std::size_t i = 0; i < 2; ++i) {
    const Time& period = ts.tasks()[i].period();
    REQUIRE(releases[i].size() >= 2);
    CHECK(releases[i].front() == Time(0));
    for (std::size_t k = 1; k < releases[i].size(); ++k) {
      Time gap = releases[i][k] - releases[i][k - 1];
      CHECK(gap >= period);
      CHECK(gap <= sc.jitter_factor * period);
    }
  }
}

TEST_CASE("random execution draws node costs inside their ranges") {
  TaskDesc d;
  d.id = "t1";
  d.nodes = {{"v1", 1, 10}, {"v2", 2, 8}};
  d.edges = {{"v1", "v2"}};
  d.deadline = 30;
  d.period = 30;
  TaskSet ts({validate(d)}, 1);

  Scenario sc;
  sc.execution = ExecutionPattern::RandomInRange;
  sc.seed = 7;
  sc.horizon = 600;
  SimOutcome out = simulate(ts, sc);
  verify_trace(ts, out);

  bool below_cmax = false;
  for (const JobRecord& job : out.jobs) {
    REQUIRE(job.cost.size() == 2);
    for (std::size_t n = 0; n < 2; ++n) {
      CHECK(job.cost[n] >= ts.tasks()[0].nodes()[n].c_min);
      CHECK(job.cost[n] <= ts.tasks()[0].nodes()[n].c_max);
      if (job.cost[n] < ts.tasks()[0].nodes()[n].c_max) below_cmax = true;
    }
  }
  CHECK(below_cmax);
}

TEST_CASE("a higher-priority release preempts and the node later resumes") {
  // single core: t1 (C=1, T=4) interrupts t2's five-unit node
  TaskDesc a;
  a.id = "t1";
  a.nodes = {{"v1", 1, 1}};
  a.deadline = 4;
  a.period = 4;
  TaskDesc b;
  b.id = "t2";
  b.nodes = {{"v1", 5, 5}};
  b.deadline = 10;
  b.period = 10;
  TaskSet ts({validate(a), validate(b)}, 1);

  Scenario sc;
  sc.horizon = 10;
  SimOutcome out = simulate(ts, sc);
  verify_trace(ts, out);

  std::size_t preempts = 0, resumes = 0;
  for (const TraceEvent& ev : out.trace) {
    if (ev.kind == EventKind::Preempt) {
      ++preempts;
      CHECK(ev.task == 1);
    }
    if (ev.kind == EventKind::Resume) ++resumes;
  }
  CHECK(preempts >= 1);
  CHECK(resumes >= 1);
  CHECK(out.total_misses == 0);
  REQUIRE(out.max_observed_response[1].has_value());
  CHECK(*out.max_observed_response[1] == Time(7));
}

TEST_CASE("an overloaded core starves the low-priority task into misses") {
  TaskSet ts = single_node_pair(5, 5, 5, 5, 1);
  Scenario sc;
  sc.horizon = 10;
  SimOutcome out = simulate(ts, sc);
  verify_trace(ts, out);
  CHECK(out.miss_count[0] == 0);
  CHECK(out.miss_count[1] == 2);
  CHECK(out.total_misses == 2);
  CHECK_FALSE(out.max_observed_response[1].has_value());
}

TEST_CASE("zero-cost wrapper nodes complete without occupying a core") {
  TaskDesc d;
  d.id = "t1";
  d.nodes = {{"entry", 0, 0}, {"v1", 3, 3}, {"v2", 2, 2}, {"exit", 0, 0}};
  d.edges = {{"entry", "v1"}, {"entry", "v2"}, {"v1", "exit"}, {"v2", "exit"}};
  d.deadline = 6;
  d.period = 6;
  TaskSet ts({validate(d)}, 2);

  Scenario sc;
  sc.horizon = 12;
  SimOutcome out = simulate(ts, sc);
  verify_trace(ts, out);
  CHECK(out.total_misses == 0);
  REQUIRE(out.max_observed_response[0].has_value());
  CHECK(*out.max_observed_response[0] == Time(3));
  for (const TraceEvent& ev : out.trace) {
    if (ev.kind != EventKind::Complete) continue;
    const std::string& id = ts.tasks()[0].nodes()[ev.node].id;
    if (id == "entry" || id == "exit") CHECK(ev.core == -1);
  }
}

TEST_CASE("trace output is a csv with ids and dashes for absent fields") {
  TaskSet ts = worked_example(2);
  Scenario sc;
  sc.horizon = 20;
  SimOutcome out = simulate(ts, sc);
  std::string text = trace_text(ts, out);

  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "time,event,task,node,core");
  bool saw_release = false;
  while (std::getline(is, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
    if (line.find(",release,") != std::string::npos) {
      saw_release = true;
      CHECK(line.substr(line.size() - 4) == ",-,-");
    }
  }
  CHECK(saw_release);
}

TEST_CASE("the replay checker rejects tampered outcomes") {
  TaskSet ts = worked_example(2);
  Scenario sc;
  sc.horizon = 40;
  SimOutcome out = simulate(ts, sc);

  SUBCASE("flipped miss flag") {
    out.jobs[0].missed = !out.jobs[0].missed;
    CHECK_THROWS_AS(verify_trace(ts, out), SimulationError);
  }
  SUBCASE("dropped completion event") {
    auto it = std::find_if(out.trace.rbegin(), out.trace.rend(),
                           [](const TraceEvent& ev) {
                             return ev.kind == EventKind::Complete;
                           });
    REQUIRE(it != out.trace.rend());
    out.trace.erase(std::next(it).base());
    CHECK_THROWS_AS(verify_trace(ts, out), SimulationError);
  }
  SUBCASE("completion moved in time") {
    for (TraceEvent& ev : out.trace) {
      if (ev.kind == EventKind::Complete && ev.core >= 0) {
        ev.time += Time(1, 3);
        break;
      }
    }
    CHECK_THROWS_AS(verify_trace(ts, out), SimulationError);
  }
  SUBCASE("forged extra release") {
    TraceEvent forged;
    forged.time = out.horizon;
    forged.kind = EventKind::Release;
    forged.task = 0;
    forged.job = 9999;
    out.trace.push_back(forged);
    CHECK_THROWS_AS(verify_trace(ts, out), SimulationError);
  }
}

TEST_CASE("simulation outcomes never contradict the analysis on the example") {
  TaskSet ts = worked_example(2);
  std::vector<Scenario> scenarios(3);
  scenarios[0].horizon = 40;
  scenarios[1].release = ReleasePattern::SporadicRandom;
  scenarios[1].seed = 1;
  scenarios[1].horizon = 40;
  scenarios[2].release = ReleasePattern::SporadicRandom;
  scenarios[2].execution = ExecutionPattern::RandomInRange;
  scenarios[2].seed = 2;
  scenarios[2].horizon = 40;

  ConsistencyReport report = check_against_analysis(ts, AnalysisConfig{}, scenarios);
  CHECK(report.consistent());
  CHECK(report.analysis.set_schedulable);
}

TEST_CASE("misses of rejected tasks are not counterexamples") {
  TaskSet ts = single_node_pair(5, 5, 5, 5, 1);
  std::vector<Scenario> scenarios(1);
  scenarios[0].horizon = 10;
  ConsistencyReport report = check_against_analysis(ts, AnalysisConfig{}, scenarios);
  CHECK(report.analysis.tasks[1].verdict == Verdict::Unschedulable);
  CHECK(report.consistent());
}
