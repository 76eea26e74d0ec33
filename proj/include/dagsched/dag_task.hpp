#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dagsched/rational.hpp"

namespace dagsched {

struct Node {
  std::string id;
  Time c_min;
  Time c_max;
};

// Unchecked task description, as read from a file or built by a generator.
struct TaskDesc {
  std::string id;
  std::vector<Node> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // (src id, dst id)
  Time deadline;
  Time period;
};

enum class ValidationFault {
  CycleDetected,
  MultipleEntryOrExit,
  DeadlineExceedsPeriod,
  NegativeOrInvertedCost,
  DanglingEdge,
  DuplicateNode,
  DuplicateEdge,
  DuplicateTask,
  InvalidParameter,
  UnknownNode,
  NotConnected,
};

const char* fault_name(ValidationFault f);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationFault fault, const std::string& element)
      : std::runtime_error(std::string(fault_name(fault)) + ": " + element),
        fault_(fault),
        element_(element) {}

  ValidationFault fault() const { return fault_; }
  const std::string& element() const { return element_; }

 private:
  ValidationFault fault_;
  std::string element_;
};

struct ValidateOptions {
  // When set, a graph with several sources or sinks is wrapped with zero-cost
  // virtual entry/exit nodes instead of being rejected.
  bool wrap_virtual_nodes = false;
};

// Immutable validated task. Nodes are held in a deterministic topological
// order (Kahn's algorithm, smallest id first), so index 0 is the entry and
// index size()-1 is the exit. Edges are index pairs sorted ascending.
class DagTask {
 public:
  const std::string& id() const { return id_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const Time& deadline() const { return deadline_; }
  const Time& period() const { return period_; }

  std::size_t size() const { return nodes_.size(); }
  std::size_t entry() const { return 0; }
  std::size_t exit() const { return nodes_.size() - 1; }

  // Throws ValidationError{UnknownNode} for ids not in this task.
  std::size_t node_index(std::string_view node_id) const;

  const std::vector<int>& preds(std::size_t i) const { return preds_[i]; }
  const std::vector<int>& succs(std::size_t i) const { return succs_[i]; }

  Time total_wcet() const;

 private:
  DagTask() = default;
  friend DagTask validate(const TaskDesc&, const ValidateOptions&);

  std::string id_;
  std::vector<Node> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> preds_, succs_;
  std::map<std::string, std::size_t, std::less<>> index_;
  Time deadline_;
  Time period_;
};

// Structural and parameter checks; throws ValidationError naming the
// offending element. See ValidationFault for the cases.
DagTask validate(const TaskDesc& desc, const ValidateOptions& options = {});

// Priority equals position: tasks[0] is the highest-priority task.
class TaskSet {
 public:
  TaskSet(std::vector<DagTask> tasks, unsigned cores);

  const std::vector<DagTask>& tasks() const { return tasks_; }
  unsigned cores() const { return cores_; }

 private:
  std::vector<DagTask> tasks_;
  unsigned cores_;
};

// Reorders tasks by (deadline, id). Index order is priority order, so the
// result runs the set deadline-monotonically.
TaskSet deadline_monotonic_order(const TaskSet& ts);

struct TimingProfile {
  std::map<std::string, Time> earliest;  // node id -> earliest release offset
  std::map<std::string, Time> latest;    // node id -> latest release offset
  Time critical_path_length;
  Time total_wcet;
  Time self_interference;  // total_wcet - critical_path_length
  Time r_isolated;         // critical_path_length + self_interference / cores
};

struct NodePath {
  std::vector<std::string> nodes;
  Time total_cost;  // sum of c_max over the path
};

enum class CostBasis { Min, Max };

// Forward pass: entry gets 0, every other node the maximum over its parents
// of (parent offset + parent c_min).
std::map<std::string, Time> earliest_release_times(const DagTask& task);

// Backward pass from the exit, normalized so the entry gets 0. The basis
// selects which cost bound the pass charges; Max is the conservative default.
std::map<std::string, Time> latest_release_times(const DagTask& task,
                                                 CostBasis basis = CostBasis::Max);

// Longest entry-to-exit path weighted by c_max. Ties resolve to the
// lexicographically smallest node-id sequence.
NodePath critical_path(const DagTask& task);

TimingProfile timing_profile(const DagTask& task, unsigned cores,
                             CostBasis latest_basis = CostBasis::Max);

// Nodes that are ordered neither before nor after the given node.
std::set<std::string> concurrent_set(const DagTask& task, std::string_view node_id);

// Maximum-c_max path from one node to another (inclusive). Throws
// ValidationError{NotConnected} when no directed path exists.
NodePath critical_partial_path(const DagTask& task, std::string_view from,
                               std::string_view to);

// path cost + (off-path work) / cores; the off-path work is everything in the
// task outside the path, regardless of precedence.
Time partial_path_self_interference_bound(const DagTask& task, const NodePath& path,
                                          unsigned cores);

// Size of the largest antichain of the precedence order (the most nodes that
// can ever run at once).
std::size_t max_parallelism(const DagTask& task);

}  // namespace dagsched
