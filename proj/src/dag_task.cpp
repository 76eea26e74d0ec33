#include "dagsched/dag_task.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace dagsched {

const char* fault_name(ValidationFault f) {
  switch (f) {
    case ValidationFault::CycleDetected: return "CycleDetected";
    case ValidationFault::MultipleEntryOrExit: return "MultipleEntryOrExit";
    case ValidationFault::DeadlineExceedsPeriod: return "DeadlineExceedsPeriod";
    case ValidationFault::NegativeOrInvertedCost: return "NegativeOrInvertedCost";
    case ValidationFault::DanglingEdge: return "DanglingEdge";
    case ValidationFault::DuplicateNode: return "DuplicateNode";
    case ValidationFault::DuplicateEdge: return "DuplicateEdge";
    case ValidationFault::DuplicateTask: return "DuplicateTask";
    case ValidationFault::InvalidParameter: return "InvalidParameter";
    case ValidationFault::UnknownNode: return "UnknownNode";
    case ValidationFault::NotConnected: return "NotConnected";
  }
  return "ValidationFault";
}

std::size_t DagTask::node_index(std::string_view node_id) const {
  auto it = index_.find(node_id);
  if (it == index_.end())
    throw ValidationError(ValidationFault::UnknownNode,
                          "node '" + std::string(node_id) + "' in task '" + id_ + "'");
  return it->second;
}

Time DagTask::total_wcet() const {
  Time sum = 0;
  for (const Node& n : nodes_) sum += n.c_max;
  return sum;
}

namespace {

std::string edge_label(const std::string& a, const std::string& b) {
  return "edge " + a + "->" + b;
}

// Deterministic topological order: among ready nodes, smallest id first.
// Returns empty when the graph has a cycle.
std::vector<int> topo_order(std::size_t n, const std::vector<std::vector<int>>& succs,
                            const std::vector<std::vector<int>>& preds,
                            const std::vector<Node>& nodes) {
  std::vector<int> indeg(n);
  for (std::size_t i = 0; i < n; ++i) indeg[i] = static_cast<int>(preds[i].size());
  auto cmp = [&](int a, int b) { return nodes[a].id > nodes[b].id; };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(static_cast<int>(i));
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int s : succs[v])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (order.size() != n) return {};
  return order;
}

}  // namespace

DagTask validate(const TaskDesc& desc, const ValidateOptions& options) {
  if (desc.id.empty())
    throw ValidationError(ValidationFault::InvalidParameter, "task with empty id");
  const std::string where = "task '" + desc.id + "'";
  if (desc.nodes.empty())
    throw ValidationError(ValidationFault::InvalidParameter, where + " has no nodes");
  if (desc.period <= 0)
    throw ValidationError(ValidationFault::InvalidParameter,
                          where + " has non-positive period");
  if (desc.deadline < 0)
    throw ValidationError(ValidationFault::InvalidParameter,
                          where + " has negative deadline");
  if (desc.deadline > desc.period)
    throw ValidationError(ValidationFault::DeadlineExceedsPeriod, where);

  std::map<std::string, int, std::less<>> index;
  for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
    const Node& nd = desc.nodes[i];
    if (nd.id.empty())
      throw ValidationError(ValidationFault::InvalidParameter,
                            where + " has a node with an empty id");
    if (!index.emplace(nd.id, static_cast<int>(i)).second)
      throw ValidationError(ValidationFault::DuplicateNode,
                            "node '" + nd.id + "' in " + where);
    if (nd.c_min < 0 || nd.c_min > nd.c_max)
      throw ValidationError(ValidationFault::NegativeOrInvertedCost,
                            "node '" + nd.id + "' in " + where);
  }

  std::vector<Node> nodes = desc.nodes;
  std::set<std::pair<int, int>> edge_set;
  for (const auto& [a, b] : desc.edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end())
      throw ValidationError(ValidationFault::DanglingEdge,
                            edge_label(a, b) + " in " + where + " (unknown node '" + a + "')");
    if (ib == index.end())
      throw ValidationError(ValidationFault::DanglingEdge,
                            edge_label(a, b) + " in " + where + " (unknown node '" + b + "')");
    if (ia->second == ib->second)
      throw ValidationError(ValidationFault::CycleDetected,
                            edge_label(a, b) + " in " + where);
    if (!edge_set.emplace(ia->second, ib->second).second)
      throw ValidationError(ValidationFault::DuplicateEdge,
                            edge_label(a, b) + " in " + where);
  }

  auto build_adj = [](std::size_t n, const std::set<std::pair<int, int>>& edges) {
    std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> adj;
    adj.first.resize(n);
    adj.second.resize(n);
    for (auto [a, b] : edges) {
      adj.first[a].push_back(b);   // succs
      adj.second[b].push_back(a);  // preds
    }
    return adj;
  };

  auto [succs, preds] = build_adj(nodes.size(), edge_set);
  if (topo_order(nodes.size(), succs, preds, nodes).empty()) {
    // Name the lexicographically smallest node on a cycle.
    std::vector<int> order = [&] {
      std::vector<int> indeg(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i)
        indeg[i] = static_cast<int>(preds[i].size());
      std::vector<int> q;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (indeg[i] == 0) q.push_back(static_cast<int>(i));
      std::vector<int> removed;
      while (!q.empty()) {
        int v = q.back();
        q.pop_back();
        removed.push_back(v);
        for (int s : succs[v])
          if (--indeg[s] == 0) q.push_back(s);
      }
      std::vector<int> rest;
      std::vector<char> gone(nodes.size(), 0);
      for (int v : removed) gone[v] = 1;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!gone[i]) rest.push_back(static_cast<int>(i));
      return rest;
    }();
    std::string culprit = nodes[order.front()].id;
    for (int v : order) culprit = std::min(culprit, nodes[v].id);
    throw ValidationError(ValidationFault::CycleDetected,
                          "node '" + culprit + "' in " + where);
  }

  auto count_if_deg0 = [&](const std::vector<std::vector<int>>& deg) {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (deg[i].empty()) out.push_back(static_cast<int>(i));
    return out;
  };
  std::vector<int> sources = count_if_deg0(preds);
  std::vector<int> sinks = count_if_deg0(succs);

  auto fresh_id = [&](std::string base) {
    while (index.count(base)) base.insert(base.begin(), '_');
    return base;
  };
  if ((sources.size() != 1 || sinks.size() != 1) && options.wrap_virtual_nodes) {
    if (sources.size() != 1) {
      std::string vid = fresh_id("__entry");
      int vi = static_cast<int>(nodes.size());
      nodes.push_back(Node{vid, 0, 0});
      index.emplace(vid, vi);
      for (int s : sources) edge_set.emplace(vi, s);
    }
    if (sinks.size() != 1) {
      std::string vid = fresh_id("__exit");
      int vi = static_cast<int>(nodes.size());
      nodes.push_back(Node{vid, 0, 0});
      index.emplace(vid, vi);
      for (int s : sinks) edge_set.emplace(s, vi);
    }
    std::tie(succs, preds) = build_adj(nodes.size(), edge_set);
    sources = count_if_deg0(preds);
    sinks = count_if_deg0(succs);
  }
  if (sources.size() != 1 || sinks.size() != 1) {
    std::string detail = where + " has " + std::to_string(sources.size()) +
                         " entry and " + std::to_string(sinks.size()) + " exit nodes";
    throw ValidationError(ValidationFault::MultipleEntryOrExit, detail);
  }

  std::vector<int> order = topo_order(nodes.size(), succs, preds, nodes);

  DagTask task;
  task.id_ = desc.id;
  task.deadline_ = desc.deadline;
  task.period_ = desc.period;
  std::vector<int> pos(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos[order[i]] = static_cast<int>(i);
    task.nodes_.push_back(nodes[order[i]]);
    task.index_.emplace(nodes[order[i]].id, i);
  }
  for (auto [a, b] : edge_set) task.edges_.emplace_back(pos[a], pos[b]);
  std::sort(task.edges_.begin(), task.edges_.end());
  task.preds_.resize(nodes.size());
  task.succs_.resize(nodes.size());
  for (auto [a, b] : task.edges_) {
    task.succs_[a].push_back(b);
    task.preds_[b].push_back(a);
  }
  return task;
}

TaskSet::TaskSet(std::vector<DagTask> tasks, unsigned cores)
    : tasks_(std::move(tasks)), cores_(cores) {
  if (tasks_.empty())
    throw ValidationError(ValidationFault::InvalidParameter, "task set has no tasks");
  if (cores_ < 1)
    throw ValidationError(ValidationFault::InvalidParameter, "task set has zero cores");
  std::set<std::string> ids;
  for (const DagTask& t : tasks_)
    if (!ids.insert(t.id()).second)
      throw ValidationError(ValidationFault::DuplicateTask, "task '" + t.id() + "'");
}

TaskSet deadline_monotonic_order(const TaskSet& ts) {
  std::vector<DagTask> sorted = ts.tasks();
  std::sort(sorted.begin(), sorted.end(), [](const DagTask& a, const DagTask& b) {
    return std::tie(a.deadline(), a.id()) < std::tie(b.deadline(), b.id());
  });
  return TaskSet(std::move(sorted), ts.cores());
}

std::map<std::string, Time> earliest_release_times(const DagTask& task) {
  std::vector<Time> e(task.size(), Time(0));
  for (std::size_t i = 0; i < task.size(); ++i)
    for (int p : task.preds(i))
      e[i] = std::max(e[i], Time(e[p] + task.nodes()[p].c_min));
  std::map<std::string, Time> out;
  for (std::size_t i = 0; i < task.size(); ++i) out.emplace(task.nodes()[i].id, e[i]);
  return out;
}

std::map<std::string, Time> latest_release_times(const DagTask& task, CostBasis basis) {
  // Backward pass in raw form (exit at 0, earlier nodes negative), then
  // shifted so the entry sits at 0.
  std::vector<Time> raw(task.size(), Time(0));
  for (std::size_t k = task.size(); k-- > 0;) {
    if (task.succs(k).empty()) continue;
    bool first = true;
    Time best = 0;
    for (int s : task.succs(k)) {
      if (first || raw[s] < best) best = raw[s];
      first = false;
    }
    const Node& nd = task.nodes()[k];
    raw[k] = best - (basis == CostBasis::Max ? nd.c_max : nd.c_min);
  }
  Time shift = raw[task.entry()];
  std::map<std::string, Time> out;
  for (std::size_t i = 0; i < task.size(); ++i)
    out.emplace(task.nodes()[i].id, raw[i] - shift);
  return out;
}

namespace {

// For each node, the best (max c_max) suffix path from it to the exit and the
// lexicographically smallest id sequence among the best. suffix[i] holds node
// indices starting at i.
struct SuffixTable {
  std::vector<Time> cost;                   // includes the node's own c_max
  std::vector<std::vector<int>> sequence;   // chosen suffix, node indices
};

SuffixTable best_suffixes(const DagTask& task) {
  SuffixTable t;
  t.cost.assign(task.size(), Time(0));
  t.sequence.resize(task.size());
  auto seq_ids_less = [&](const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [&](int x, int y) {
          return task.nodes()[x].id < task.nodes()[y].id;
        });
  };
  for (std::size_t k = task.size(); k-- > 0;) {
    int best = -1;
    for (int s : task.succs(k)) {
      if (best < 0 || t.cost[s] > t.cost[best] ||
          (t.cost[s] == t.cost[best] && seq_ids_less(t.sequence[s], t.sequence[best])))
        best = s;
    }
    t.sequence[k].push_back(static_cast<int>(k));
    t.cost[k] = task.nodes()[k].c_max;
    if (best >= 0) {
      t.cost[k] += t.cost[best];
      t.sequence[k].insert(t.sequence[k].end(), t.sequence[best].begin(),
                           t.sequence[best].end());
    }
  }
  return t;
}

NodePath path_from_indices(const DagTask& task, const std::vector<int>& idx, Time cost) {
  NodePath p;
  p.total_cost = cost;
  for (int i : idx) p.nodes.push_back(task.nodes()[i].id);
  return p;
}

}  // namespace

NodePath critical_path(const DagTask& task) {
  SuffixTable t = best_suffixes(task);
  std::size_t e = task.entry();
  return path_from_indices(task, t.sequence[e], t.cost[e]);
}

TimingProfile timing_profile(const DagTask& task, unsigned cores, CostBasis latest_basis) {
  if (cores < 1)
    throw ValidationError(ValidationFault::InvalidParameter, "zero cores");
  TimingProfile p;
  p.earliest = earliest_release_times(task);
  p.latest = latest_release_times(task, latest_basis);
  p.critical_path_length = critical_path(task).total_cost;
  p.total_wcet = task.total_wcet();
  p.self_interference = p.total_wcet - p.critical_path_length;
  p.r_isolated = p.critical_path_length + p.self_interference / cores;
  return p;
}

namespace {

// reach[i] = nodes reachable from i (excluding i), as a bitset.
std::vector<std::vector<char>> reachability(const DagTask& task) {
  std::size_t n = task.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t k = n; k-- > 0;)
    for (int s : task.succs(k)) {
      reach[k][s] = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (reach[s][j]) reach[k][j] = 1;
    }
  return reach;
}

}  // namespace

std::set<std::string> concurrent_set(const DagTask& task, std::string_view node_id) {
  std::size_t v = task.node_index(node_id);
  auto reach = reachability(task);
  std::set<std::string> out;
  for (std::size_t i = 0; i < task.size(); ++i) {
    if (i == v || reach[v][i] || reach[i][v]) continue;
    out.insert(task.nodes()[i].id);
  }
  return out;
}

NodePath critical_partial_path(const DagTask& task, std::string_view from,
                               std::string_view to) {
  std::size_t a = task.node_index(from);
  std::size_t b = task.node_index(to);
  if (a == b) return NodePath{{task.nodes()[a].id}, task.nodes()[a].c_max};

  // Longest a->b path over the subgraph of nodes on some a->b route.
  auto reach = reachability(task);
  if (!reach[a][b])
    throw ValidationError(ValidationFault::NotConnected,
                          "node '" + std::string(from) + "' to node '" + std::string(to) +
                              "' in task '" + task.id() + "'");
  std::vector<Time> cost(task.size(), Time(-1));
  std::vector<std::vector<int>> seq(task.size());
  auto seq_ids_less = [&](const std::vector<int>& x, const std::vector<int>& y) {
    return std::lexicographical_compare(
        x.begin(), x.end(), y.begin(), y.end(),
        [&](int p, int q) { return task.nodes()[p].id < task.nodes()[q].id; });
  };
  cost[b] = task.nodes()[b].c_max;
  seq[b] = {static_cast<int>(b)};
  for (std::size_t k = task.size(); k-- > 0;) {
    if (k == b) continue;
    bool on_route = (k == a || reach[a][k]) && reach[k][b];
    if (!on_route) continue;
    int best = -1;
    for (int s : task.succs(k)) {
      if (cost[s] < 0) continue;
      if (best < 0 || cost[s] > cost[best] ||
          (cost[s] == cost[best] && seq_ids_less(seq[s], seq[best])))
        best = s;
    }
    cost[k] = task.nodes()[k].c_max + cost[best];
    seq[k] = {static_cast<int>(k)};
    seq[k].insert(seq[k].end(), seq[best].begin(), seq[best].end());
  }
  return path_from_indices(task, seq[a], cost[a]);
}

Time partial_path_self_interference_bound(const DagTask& task, const NodePath& path,
                                          unsigned cores) {
  if (cores < 1)
    throw ValidationError(ValidationFault::InvalidParameter, "zero cores");
  Time on_path = 0;
  std::set<std::size_t> seen;
  for (const std::string& id : path.nodes) {
    std::size_t i = task.node_index(id);
    if (!seen.insert(i).second)
      throw ValidationError(ValidationFault::InvalidParameter,
                            "path revisits node '" + id + "'");
    on_path += task.nodes()[i].c_max;
  }
  return on_path + (task.total_wcet() - on_path) / cores;
}

std::size_t max_parallelism(const DagTask& task) {
  // Largest antichain = n - maximum matching in the bipartite graph of the
  // transitive closure (minimum chain cover on a transitively closed order).
  std::size_t n = task.size();
  auto reach = reachability(task);
  std::vector<int> match_right(n, -1);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) -> bool {
    for (std::size_t v = 0; v < n; ++v) {
      if (!reach[u][v] || visited[v]) continue;
      visited[v] = 1;
      if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  std::size_t matching = 0;
  for (std::size_t u = 0; u < n; ++u) {
    visited.assign(n, 0);
    if (augment(u)) ++matching;
  }
  return n - matching;
}

}  // namespace dagsched
