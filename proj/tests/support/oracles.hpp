#pragma once

// Brute-force reference implementations used to pin expected values in tests.
// Everything here recomputes results from first principles (path enumeration,
// exhaustive subsets, dense grids) and must stay independent of the library's
// own algorithms.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dagsched/dag_task.hpp"
#include "dagsched/rng.hpp"
#include "dagsched/workload.hpp"

namespace oracle {

using dagsched::DagTask;
using dagsched::RngStream;
using dagsched::Time;
using dagsched::WorkloadContext;

// Every directed path between two nodes, as inclusive node-index sequences.
std::vector<std::vector<int>> all_paths(const DagTask& task, int from, int to);

// Earliest release offsets: the longest c_min-weighted entry->node path, the
// node itself excluded.
std::map<std::string, Time> earliest_by_paths(const DagTask& task);

// Latest release offsets: M(entry) - M(node), where M(v) is the heaviest
// v->exit path on the chosen basis with the exit node excluded.
std::map<std::string, Time> latest_by_paths(const DagTask& task,
                                            dagsched::CostBasis basis);

// Heaviest c_max-weighted entry->exit path, all nodes included.
Time critical_length_by_paths(const DagTask& task);

// Size of the largest pairwise-unrelated node set, by exhaustive subset
// search. Only sensible for small graphs (n <= 15 or so).
std::size_t max_antichain_by_subsets(const DagTask& task);

// Interference bound of an explicit path: cost(path) + (C - cost(path)) / m.
Time partial_path_bound(const DagTask& task, const std::vector<int>& path,
                        unsigned cores);

// Dense-grid maxima of upper(delta + phi) - lower(phi) over steps+1 evenly
// spaced phases in [0, critical_path_length].
Time grid_max_carry_in(const WorkloadContext& ctx, const Time& delta, int steps);
Time grid_max_no_carry_in(const WorkloadContext& ctx, const Time& delta, int steps);

// Independent small-DAG source for oracle sweeps: an upper-triangular random
// adjacency (edge probability 1/2) wrapped by a costed entry and exit. Not
// the library generator.
struct SmallDagParams {
  int max_real_nodes = 6;
  std::uint64_t max_cost = 10;     // costs drawn from [0, max_cost]
  bool spread_costs = false;       // when set, c_min is drawn from [0, c_max]
  std::uint64_t deadline_slack = 20;  // D = len + U[0, slack]
  std::uint64_t period_slack = 20;    // T = D + U[0, slack]
  std::string id = "t1";
};

DagTask random_small_dag(RngStream stream, const SmallDagParams& params = {});

}  // namespace oracle
