#include "support/oracles.hpp"

#include <algorithm>

namespace oracle {

namespace {

void dfs_paths(const DagTask& task, int at, int to, std::vector<int>& stack,
               std::vector<std::vector<int>>& out) {
  stack.push_back(at);
  if (at == to) {
    out.push_back(stack);
  } else {
    for (int s : task.succs(at)) dfs_paths(task, s, to, stack, out);
  }
  stack.pop_back();
}

// Pairwise reachability (reflexive) by DFS from every node.
std::vector<std::vector<char>> reachable(const DagTask& task) {
  const std::size_t n = task.size();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> stack{static_cast<int>(i)};
    while (!stack.empty()) {
      int at = stack.back();
      stack.pop_back();
      if (r[i][at]) continue;
      r[i][at] = 1;
      for (int s : task.succs(at)) stack.push_back(s);
    }
  }
  return r;
}

}  // namespace

std::vector<std::vector<int>> all_paths(const DagTask& task, int from, int to) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  dfs_paths(task, from, to, stack, out);
  return out;
}

std::map<std::string, Time> earliest_by_paths(const DagTask& task) {
  std::map<std::string, Time> out;
  for (std::size_t j = 0; j < task.size(); ++j) {
    Time best = 0;
    for (const auto& path : all_paths(task, static_cast<int>(task.entry()),
                                      static_cast<int>(j))) {
      Time sum = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k)
        sum += task.nodes()[path[k]].c_min;
      best = std::max(best, sum);
    }
    out.emplace(task.nodes()[j].id, best);
  }
  return out;
}

std::map<std::string, Time> latest_by_paths(const DagTask& task,
                                            dagsched::CostBasis basis) {
  auto cost = [&](int v) {
    return basis == dagsched::CostBasis::Min ? task.nodes()[v].c_min
                                             : task.nodes()[v].c_max;
  };
  auto heaviest_to_exit = [&](std::size_t from) {
    Time best = 0;
    for (const auto& path :
         all_paths(task, static_cast<int>(from), static_cast<int>(task.exit()))) {
      Time sum = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) sum += cost(path[k]);
      best = std::max(best, sum);
    }
    return best;
  };
  const Time from_entry = heaviest_to_exit(task.entry());
  std::map<std::string, Time> out;
  for (std::size_t j = 0; j < task.size(); ++j)
    out.emplace(task.nodes()[j].id, Time(from_entry - heaviest_to_exit(j)));
  return out;
}

Time critical_length_by_paths(const DagTask& task) {
  Time best = 0;
  for (const auto& path : all_paths(task, static_cast<int>(task.entry()),
                                    static_cast<int>(task.exit()))) {
    Time sum = 0;
    for (int v : path) sum += task.nodes()[v].c_max;
    best = std::max(best, sum);
  }
  return best;
}

std::size_t max_antichain_by_subsets(const DagTask& task) {
  const std::size_t n = task.size();
  if (n > 20) throw std::invalid_argument("subset search is limited to 20 nodes");
  auto r = reachable(task);
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(static_cast<int>(i));
    if (members.size() <= best) continue;
    bool antichain = true;
    for (std::size_t a = 0; a < members.size() && antichain; ++a)
      for (std::size_t b = a + 1; b < members.size() && antichain; ++b)
        if (r[members[a]][members[b]] || r[members[b]][members[a]]) antichain = false;
    if (antichain) best = members.size();
  }
  return best;
}

Time partial_path_bound(const DagTask& task, const std::vector<int>& path,
                        unsigned cores) {
  Time on_path = 0;
  for (int v : path) on_path += task.nodes()[v].c_max;
  return on_path + (task.total_wcet() - on_path) / cores;
}

Time grid_max_carry_in(const WorkloadContext& ctx, const Time& delta, int steps) {
  if (delta < 0) return 0;
  const Time& len = ctx.profile().critical_path_length;
  Time best = 0;
  for (int k = 0; k <= steps; ++k) {
    Time phi = len * Time(k) / Time(steps);
    best = std::max(best, Time(task_workload_upper_ci(ctx, delta + phi) -
                               task_workload_lower_ci(ctx, phi)));
    if (len == 0) break;
  }
  return best;
}

Time grid_max_no_carry_in(const WorkloadContext& ctx, const Time& delta, int steps) {
  if (delta < 0) return 0;
  const Time& len = ctx.profile().critical_path_length;
  Time best = 0;
  for (int k = 0; k <= steps; ++k) {
    Time phi = len * Time(k) / Time(steps);
    best = std::max(best, Time(task_workload_upper_nc(ctx, delta + phi) -
                               task_workload_lower_nc(ctx, phi)));
    if (len == 0) break;
  }
  return best;
}

DagTask random_small_dag(RngStream stream, const SmallDagParams& params) {
  const int n = static_cast<int>(stream.fork(0).uniform_int(1, params.max_real_nodes));

  dagsched::TaskDesc desc;
  desc.id = params.id;
  auto draw_costs = [&](RngStream s) {
    Time c_max(s.fork(0).uniform_int(0, params.max_cost));
    Time c_min = c_max;
    if (params.spread_costs && c_max > 0)
      c_min = Time(s.fork(1).uniform_int(
          0, c_max.convert_to<std::uint64_t>()));
    return std::pair<Time, Time>(c_min, c_max);
  };

  auto [entry_min, entry_max] = draw_costs(stream.fork(1));
  desc.nodes.push_back({"entry", entry_min, entry_max});
  for (int i = 0; i < n; ++i) {
    auto [c_min, c_max] = draw_costs(stream.fork(2).fork(i));
    desc.nodes.push_back({"v" + std::to_string(i + 1), c_min, c_max});
  }
  auto [exit_min, exit_max] = draw_costs(stream.fork(3));
  desc.nodes.push_back({"exit", exit_min, exit_max});

  std::vector<char> has_pred(n, 0), has_succ(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (stream.fork(4).fork(a).fork(b).uniform01() >= 0.5) continue;
      desc.edges.emplace_back("v" + std::to_string(a + 1), "v" + std::to_string(b + 1));
      has_succ[a] = 1;
      has_pred[b] = 1;
    }
  for (int i = 0; i < n; ++i) {
    if (!has_pred[i]) desc.edges.emplace_back("entry", "v" + std::to_string(i + 1));
    if (!has_succ[i]) desc.edges.emplace_back("v" + std::to_string(i + 1), "exit");
  }

  // Timing: validate needs len <= D <= T; compute len by path enumeration on
  // a throwaway copy with safe placeholders.
  Time total = 0;
  for (const auto& node : desc.nodes) total += node.c_max;
  desc.deadline = std::max(total, Time(1));
  desc.period = desc.deadline;
  Time len = critical_length_by_paths(dagsched::validate(desc));

  desc.deadline = len + Time(stream.fork(5).uniform_int(0, params.deadline_slack));
  desc.period =
      std::max(Time(1), Time(desc.deadline + Time(stream.fork(6).uniform_int(
                                 0, params.period_slack))));
  if (desc.deadline > desc.period) desc.deadline = desc.period;
  return dagsched::validate(desc);
}

}  // namespace oracle
