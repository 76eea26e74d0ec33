#include <doctest.h>

#include <algorithm>

#include "dagsched/dag_task.hpp"
#include "support/oracles.hpp"

using namespace dagsched;

namespace {

// The diamond task used across the suite: v1 fans out to v2 and v3, both
// join at v4. Costs 2, 3, 1, 2; D = 15, T = 20.
TaskDesc diamond_desc() {
  TaskDesc desc;
  desc.id = "t2";
  desc.nodes = {{"v1", 2, 2}, {"v2", 3, 3}, {"v3", 1, 1}, {"v4", 2, 2}};
  desc.edges = {{"v1", "v2"}, {"v1", "v3"}, {"v2", "v4"}, {"v3", "v4"}};
  desc.deadline = 15;
  desc.period = 20;
  return desc;
}

ValidationFault fault_of(const TaskDesc& desc, ValidateOptions options = {}) {
  try {
    validate(desc, options);
  } catch (const ValidationError& e) {
    return e.fault();
  }
  FAIL("expected a validation error");
  return ValidationFault::InvalidParameter;
}

}  // namespace

TEST_CASE("diamond validates into topological order") {
  DagTask task = validate(diamond_desc());
  REQUIRE(task.size() == 4);
  CHECK(task.nodes()[task.entry()].id == "v1");
  CHECK(task.nodes()[task.exit()].id == "v4");
  CHECK(task.total_wcet() == Time(8));
  // every edge goes forward in the stored order
  for (auto [src, dst] : task.edges()) CHECK(src < dst);
  CHECK(std::is_sorted(task.edges().begin(), task.edges().end()));
}

TEST_CASE("diamond release offsets and critical path match the frozen values") {
  DagTask task = validate(diamond_desc());

  auto e = earliest_release_times(task);
  CHECK(e.at("v1") == Time(0));
  CHECK(e.at("v2") == Time(2));
  CHECK(e.at("v3") == Time(2));
  CHECK(e.at("v4") == Time(5));

  auto l = latest_release_times(task);
  CHECK(l.at("v1") == Time(0));
  CHECK(l.at("v2") == Time(2));
  CHECK(l.at("v3") == Time(4));
  CHECK(l.at("v4") == Time(5));

  NodePath cp = critical_path(task);
  CHECK(cp.total_cost == Time(7));
  CHECK(cp.nodes == std::vector<std::string>{"v1", "v2", "v4"});

  TimingProfile profile = timing_profile(task, 2);
  CHECK(profile.critical_path_length == Time(7));
  CHECK(profile.total_wcet == Time(8));
  CHECK(profile.self_interference == Time(1));
  CHECK(profile.r_isolated == Time(15, 2));
}

TEST_CASE("validation rejects malformed tasks with named faults") {
  SUBCASE("cycle") {
    TaskDesc d = diamond_desc();
    d.edges.push_back({"v4", "v1"});
    CHECK(fault_of(d) == ValidationFault::CycleDetected);
  }
  SUBCASE("self edge") {
    TaskDesc d = diamond_desc();
    d.edges.push_back({"v2", "v2"});
    CHECK(fault_of(d) == ValidationFault::CycleDetected);
  }
  SUBCASE("two sources") {
    TaskDesc d = diamond_desc();
    d.edges.erase(std::remove(d.edges.begin(), d.edges.end(),
                              std::pair<std::string, std::string>{"v1", "v3"}),
                  d.edges.end());
    CHECK(fault_of(d) == ValidationFault::MultipleEntryOrExit);
    // wrapping repairs only the deficient side with a fresh zero-cost node
    ValidateOptions wrap;
    wrap.wrap_virtual_nodes = true;
    DagTask task = validate(d, wrap);
    CHECK(task.size() == 5);
    CHECK(task.nodes()[task.entry()].c_max == Time(0));
    CHECK(task.nodes()[task.exit()].id == "v4");
  }
  SUBCASE("deadline beyond period") {
    TaskDesc d = diamond_desc();
    d.deadline = 21;
    CHECK(fault_of(d) == ValidationFault::DeadlineExceedsPeriod);
  }
  SUBCASE("negative cost") {
    TaskDesc d = diamond_desc();
    d.nodes[1].c_min = -1;
    CHECK(fault_of(d) == ValidationFault::NegativeOrInvertedCost);
  }
  SUBCASE("inverted cost bounds") {
    TaskDesc d = diamond_desc();
    d.nodes[1].c_min = 4;  // above c_max = 3
    CHECK(fault_of(d) == ValidationFault::NegativeOrInvertedCost);
  }
  SUBCASE("dangling edge") {
    TaskDesc d = diamond_desc();
    d.edges.push_back({"v1", "ghost"});
    CHECK(fault_of(d) == ValidationFault::DanglingEdge);
  }
  SUBCASE("duplicate node") {
    TaskDesc d = diamond_desc();
    d.nodes.push_back({"v2", 1, 1});
    CHECK(fault_of(d) == ValidationFault::DuplicateNode);
  }
  SUBCASE("duplicate edge") {
    TaskDesc d = diamond_desc();
    d.edges.push_back({"v1", "v2"});
    CHECK(fault_of(d) == ValidationFault::DuplicateEdge);
  }
  SUBCASE("nonpositive period") {
    TaskDesc d = diamond_desc();
    d.period = 0;
    d.deadline = 0;
    CHECK(fault_of(d) == ValidationFault::InvalidParameter);
  }
  SUBCASE("empty node list") {
    TaskDesc d;
    d.id = "t";
    d.period = 1;
    d.deadline = 1;
    CHECK(fault_of(d) == ValidationFault::InvalidParameter);
  }
}

TEST_CASE("error text names the fault and the element") {
  TaskDesc d = diamond_desc();
  d.deadline = 21;
  try {
    validate(d);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("DeadlineExceedsPeriod") != std::string::npos);
    CHECK(msg.find("t2") != std::string::npos);
  }
}

TEST_CASE("task set construction checks ids and cores") {
  DagTask a = validate(diamond_desc());
  CHECK_THROWS_AS(TaskSet({a, a}, 2), ValidationError);
  CHECK_THROWS_AS(TaskSet({a}, 0), ValidationError);
  TaskSet ts({a}, 2);
  CHECK(ts.cores() == 2);
  CHECK(ts.tasks().size() == 1);
}

TEST_CASE("deadline monotonic order sorts by deadline then id") {
  TaskDesc d1 = diamond_desc();
  d1.id = "b";
  d1.deadline = 9;
  TaskDesc d2 = diamond_desc();
  d2.id = "a";
  d2.deadline = 9;
  TaskDesc d3 = diamond_desc();
  d3.id = "c";
  d3.deadline = 4;
  TaskSet ts({validate(d1), validate(d2), validate(d3)}, 2);
  TaskSet dm = deadline_monotonic_order(ts);
  CHECK(dm.tasks()[0].id() == "c");
  CHECK(dm.tasks()[1].id() == "a");
  CHECK(dm.tasks()[2].id() == "b");
}

TEST_CASE("single node and zero cost tasks are valid") {
  TaskDesc d;
  d.id = "solo";
  d.nodes = {{"only", 0, 0}};
  d.period = 5;
  d.deadline = 5;
  DagTask task = validate(d);
  CHECK(task.entry() == task.exit());
  CHECK(timing_profile(task, 4).r_isolated == Time(0));
}

TEST_CASE("concurrent sets and the parallelism bound on the diamond") {
  DagTask task = validate(diamond_desc());
  CHECK(concurrent_set(task, "v2") == std::set<std::string>{"v3"});
  CHECK(concurrent_set(task, "v1").empty());
  CHECK(max_parallelism(task) == 2);
  CHECK_THROWS_AS(concurrent_set(task, "ghost"), ValidationError);
}

TEST_CASE("partial paths: heaviest connecting path and its bound") {
  DagTask task = validate(diamond_desc());
  NodePath p = critical_partial_path(task, "v1", "v4");
  CHECK(p.nodes == std::vector<std::string>{"v1", "v2", "v4"});
  CHECK(p.total_cost == Time(7));
  NodePath single = critical_partial_path(task, "v3", "v3");
  CHECK(single.total_cost == Time(1));
  CHECK_THROWS_AS(critical_partial_path(task, "v2", "v3"), ValidationError);

  // bound = path cost + (C - path cost) / m
  CHECK(partial_path_self_interference_bound(task, p, 2) == Time(7) + Time(1, 2));
  CHECK(partial_path_self_interference_bound(task, single, 2) ==
        Time(1) + Time(7, 2));
  NodePath bogus{{"v2", "v2"}, Time(6)};
  CHECK_THROWS_AS(partial_path_self_interference_bound(task, bogus, 2),
                  ValidationError);
}

TEST_CASE("graph passes agree with path enumeration on random DAGs") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    oracle::SmallDagParams params;
    params.spread_costs = (seed % 2) == 1;
    DagTask task = oracle::random_small_dag(RngStream(seed), params);
    CAPTURE(seed);

    CHECK(earliest_release_times(task) == oracle::earliest_by_paths(task));
    CHECK(latest_release_times(task, CostBasis::Max) ==
          oracle::latest_by_paths(task, CostBasis::Max));
    CHECK(latest_release_times(task, CostBasis::Min) ==
          oracle::latest_by_paths(task, CostBasis::Min));
    CHECK(critical_path(task).total_cost == oracle::critical_length_by_paths(task));
    CHECK(max_parallelism(task) == oracle::max_antichain_by_subsets(task));

    // profile consistency
    TimingProfile profile = timing_profile(task, 3);
    CHECK(profile.self_interference ==
          profile.total_wcet - profile.critical_path_length);
    CHECK(profile.r_isolated ==
          profile.critical_path_length + profile.self_interference / 3);
    CHECK(profile.critical_path_length <= profile.total_wcet);
  }
}

TEST_CASE("earliest offsets never exceed latest offsets") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    oracle::SmallDagParams params;
    params.spread_costs = true;
    DagTask task = oracle::random_small_dag(RngStream(seed), params);
    auto e = earliest_release_times(task);
    auto l = latest_release_times(task);
    for (const auto& [id, early] : e) {
      CAPTURE(seed);
      CAPTURE(id);
      CHECK(early <= l.at(id));
    }
  }
}
