#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dagsched/dag_task.hpp"
#include "dagsched/rng.hpp"

namespace dagsched {

enum class DeadlineMode {
  Implicit,            // D = T
  UniformLenToPeriod,  // D drawn uniformly from the integers in [len, T]
};

// Knobs for the layered task-set generator. Node counts and layer counts are
// drawn uniformly from their ranges; `edge_probability` is the chance of an
// edge between any two nodes of distinct layers (earlier layer to later one).
struct GenParams {
  std::size_t n_tasks = 1;
  unsigned cores = 1;
  std::size_t node_count_min = 1;  // real nodes, excluding the virtual wrappers
  std::size_t node_count_max = 1;
  double edge_probability = 0.5;
  std::size_t layers_min = 1;
  std::size_t layers_max = 1;
  Time total_utilization = Time(1, 2);
  std::uint64_t cost_min = 1;  // bounds for the integer c_max draw
  std::uint64_t cost_max = 1;
  bool halved_cmin = false;  // c_min = ceil(c_max / 2) instead of c_min = c_max
  DeadlineMode deadline_mode = DeadlineMode::Implicit;
  std::uint64_t seed = 0;
};

// Raised when the utilization target cannot be met: rounding the periods up
// to integers (and to the graph lengths) left the set below 95% of the
// target and no period can be shrunk further without overshooting it.
class InfeasibleParams : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One layered DAG: a virtual zero-cost entry feeding every source and a
// virtual zero-cost exit fed by every sink wrap the real nodes. Period and
// deadline are placeholders (total cost); generate_taskset assigns the real
// ones. Deterministic in (params, stream).
DagTask generate_dag(const GenParams& params, RngStream stream,
                     const std::string& id = "t1");

// Full pipeline: graphs, a UUniFast utilization split (normalized so the
// shares sum exactly to the target), periods T_i = ceil(C_i / U_i) raised to
// len_i, a repair pass that shrinks periods until the set utilization lands
// in [0.95 U, U], deadlines per deadline_mode, and deadline-monotonic order
// (ties by id). Same seed, same bytes out.
TaskSet generate_taskset(const GenParams& params);

}  // namespace dagsched
