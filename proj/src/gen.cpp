#include "dagsched/gen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dagsched {

namespace {

constexpr std::uint64_t kShapeStream = 0;
constexpr std::uint64_t kEdgeStream = 1;
constexpr std::uint64_t kCostStream = 2;
constexpr std::uint64_t kTaskStream = 10;
constexpr std::uint64_t kUtilStream = 11;
constexpr std::uint64_t kDeadlineStream = 12;

constexpr std::size_t kRepairCap = 500000;

void check_params(const GenParams& p) {
  if (p.n_tasks == 0) throw std::invalid_argument("n_tasks must be positive");
  if (p.cores == 0) throw std::invalid_argument("cores must be positive");
  if (p.node_count_min == 0 || p.node_count_min > p.node_count_max)
    throw std::invalid_argument("node count range is empty");
  if (p.layers_min == 0 || p.layers_min > p.layers_max)
    throw std::invalid_argument("layer count range is empty");
  if (!(p.edge_probability >= 0.0 && p.edge_probability <= 1.0))
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  if (p.total_utilization <= 0)
    throw std::invalid_argument("utilization target must be positive");
  if (p.cost_min > p.cost_max) throw std::invalid_argument("cost range is empty");
}

Time ceil_rational(const Time& x) { return -time_floor(-x); }

BigInt to_bigint(const Time& x) {
  return numerator(x) / denominator(x);  // callers pass integral values
}

// Uniform integer in [0, span]; spans beyond 64 bits use rejection on the
// smallest covering power of two.
BigInt draw_big(RngStream stream, const BigInt& span) {
  if (span <= 0) return 0;
  if (span <= BigInt(UINT64_MAX))
    return BigInt(stream.uniform_int(0, span.convert_to<std::uint64_t>()));
  unsigned bits = boost::multiprecision::msb(span) + 1;
  unsigned words = (bits + 63) / 64;
  for (;;) {
    BigInt value = 0;
    for (unsigned w = 0; w < words; ++w) value = (value << 64) | BigInt(stream.next());
    value >>= words * 64 - bits;
    if (value <= span) return value;
  }
}

TaskDesc generate_desc(const GenParams& params, const RngStream& stream,
                       const std::string& id) {
  RngStream shape = stream.fork(kShapeStream);
  std::size_t n = shape.fork(0).uniform_int(params.node_count_min, params.node_count_max);
  std::size_t layer_count = shape.fork(1).uniform_int(params.layers_min, params.layers_max);
  layer_count = std::min(layer_count, n);

  std::vector<std::size_t> layer(n);
  for (std::size_t i = 0; i < n; ++i)
    layer[i] = i < layer_count ? i : shape.fork(2).fork(i).uniform_int(0, layer_count - 1);

  TaskDesc desc;
  desc.id = id;
  desc.nodes.push_back({"entry", 0, 0});
  Time total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t c =
        stream.fork(kCostStream).fork(i).uniform_int(params.cost_min, params.cost_max);
    Time c_max(c);
    Time c_min = params.halved_cmin ? Time((c + 1) / 2) : c_max;
    desc.nodes.push_back({"v" + std::to_string(i + 1), c_min, c_max});
    total += c_max;
  }
  desc.nodes.push_back({"exit", 0, 0});

  std::vector<char> has_pred(n, 0), has_succ(n, 0);
  RngStream edges = stream.fork(kEdgeStream);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (layer[a] >= layer[b]) continue;
      if (edges.fork(a).fork(b).uniform01() >= params.edge_probability) continue;
      desc.edges.emplace_back("v" + std::to_string(a + 1), "v" + std::to_string(b + 1));
      has_succ[a] = 1;
      has_pred[b] = 1;
    }
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_pred[i]) desc.edges.emplace_back("entry", "v" + std::to_string(i + 1));
    if (!has_succ[i]) desc.edges.emplace_back("v" + std::to_string(i + 1), "exit");
  }

  // Placeholder timing; generate_taskset overwrites it.
  desc.period = std::max(total, Time(1));
  desc.deadline = desc.period;
  return desc;
}

}  // namespace

DagTask generate_dag(const GenParams& params, RngStream stream, const std::string& id) {
  check_params(params);
  return validate(generate_desc(params, stream, id));
}

TaskSet generate_taskset(const GenParams& params) {
  check_params(params);
  RngStream root(params.seed);
  const std::size_t n = params.n_tasks;

  std::size_t width = std::to_string(n).size();
  auto task_id = [&](std::size_t j) {
    std::string digits = std::to_string(j + 1);
    return "t" + std::string(width - digits.size(), '0') + digits;
  };

  std::vector<TaskDesc> descs;
  std::vector<Time> cost, len;
  for (std::size_t j = 0; j < n; ++j) {
    descs.push_back(generate_desc(params, root.fork(kTaskStream).fork(j), task_id(j)));
    DagTask task = validate(descs.back());
    cost.push_back(task.total_wcet());
    len.push_back(critical_path(task).total_cost);
  }

  // UUniFast split of the utilization target, then an exact normalization so
  // the shares sum to the target despite the floating-point recursion.
  std::vector<double> raw(n);
  double remaining = to_double(params.total_utilization);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double u = root.fork(kUtilStream).fork(i).uniform01();
    double next = remaining * std::pow(u, 1.0 / static_cast<double>(n - 1 - i));
    raw[i] = remaining - next;
    remaining = next;
  }
  raw[n - 1] = remaining;
  Time raw_sum = 0;
  for (double r : raw) raw_sum += Time(r);
  if (raw_sum <= 0) throw InfeasibleParams("utilization split collapsed to zero");

  std::vector<BigInt> period(n), floor_period(n);
  std::vector<Time> util(n);
  Time sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Time share = Time(raw[j]) * params.total_utilization / raw_sum;
    floor_period[j] = to_bigint(std::max(len[j], Time(1)));
    if (cost[j] == 0) {
      period[j] = floor_period[j];
    } else if (share == 0) {
      // A share can underflow to zero; park the task at a period so large its
      // utilization is negligible and let the repair pass pull it back.
      period[j] = std::max(floor_period[j], to_bigint(cost[j]) << 64);
    } else {
      period[j] = std::max(floor_period[j], to_bigint(ceil_rational(cost[j] / share)));
    }
    util[j] = cost[j] / Time(period[j]);
    sum += util[j];
  }

  // Shrink periods until the set utilization reaches 95% of the target while
  // never exceeding the target itself. Prefer a single jump that lands inside
  // the band; otherwise take the largest safe one-unit step.
  const Time& target = params.total_utilization;
  const Time band_low = target * Time(19, 20);
  std::size_t iter = 0;
  while (sum < band_low) {
    if (++iter > kRepairCap)
      throw InfeasibleParams("utilization repair did not converge");
    Time deficit = band_low - sum;
    Time cap = target - sum;
    bool applied = false;
    for (std::size_t j = 0; j < n && !applied; ++j) {
      if (cost[j] == 0 || period[j] <= floor_period[j]) continue;
      BigInt hi = to_bigint(floor_div(cost[j], util[j] + deficit));
      hi = std::min(hi, BigInt(period[j] - 1));
      BigInt lo = std::max(floor_period[j], to_bigint(ceil_rational(cost[j] / (util[j] + cap))));
      if (lo > hi) continue;
      sum -= util[j];
      period[j] = hi;
      util[j] = cost[j] / Time(period[j]);
      sum += util[j];
      applied = true;
    }
    if (applied) continue;
    std::size_t best = n;
    Time best_gain = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (cost[j] == 0 || period[j] <= floor_period[j]) continue;
      Time gain = cost[j] / Time(period[j] - 1) - util[j];
      if (gain > cap) continue;
      if (best == n || gain > best_gain) {
        best = j;
        best_gain = gain;
      }
    }
    if (best == n)
      throw InfeasibleParams("cannot reach 95% of the utilization target: set at " +
                             format_time(sum) + " of " + format_time(target));
    sum -= util[best];
    --period[best];
    util[best] = cost[best] / Time(period[best]);
    sum += util[best];
  }

  std::vector<DagTask> tasks;
  for (std::size_t j = 0; j < n; ++j) {
    descs[j].period = Time(period[j]);
    if (params.deadline_mode == DeadlineMode::Implicit) {
      descs[j].deadline = descs[j].period;
    } else {
      BigInt span = period[j] - to_bigint(len[j]);
      descs[j].deadline =
          len[j] + Time(draw_big(root.fork(kDeadlineStream).fork(j), span));
    }
    tasks.push_back(validate(descs[j]));
  }
  std::sort(tasks.begin(), tasks.end(), [](const DagTask& a, const DagTask& b) {
    return std::tie(a.deadline(), a.id()) < std::tie(b.deadline(), b.id());
  });
  return TaskSet(std::move(tasks), params.cores);
}

}  // namespace dagsched
