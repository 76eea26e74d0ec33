#include "dagsched/taskset_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dagsched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Time read_time(const json& value, const std::string& where) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Time(value.get<std::uint64_t>());
    return Time(value.get<std::int64_t>());
  }
  if (value.is_number())
    fail(where, "non-integral numbers lose precision; write the value as a string");
  if (!value.is_string()) fail(where, "expected an integer or a string time value");
  try {
    return parse_time(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::string read_id(const json& value, const std::string& where) {
  if (!value.is_string()) fail(where, "expected a string identifier");
  return value.get<std::string>();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

// Integral values that survive a double round trip stay bare numbers; the
// rest become reduced "p/q" strings.
json time_to_json(const Time& t) {
  static const BigInt kSafe = BigInt(1) << 53;
  if (denominator(t) == 1 && abs(numerator(t)) < kSafe)
    return json(numerator(t).convert_to<std::int64_t>());
  return json(format_time(t));
}

}  // namespace

TaskSet parse_taskset(const std::string& text, const ValidateOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a top-level object");

  const json& cores = field(doc, "cores", "document");
  if (!cores.is_number_integer() || cores.get<std::int64_t>() < 1)
    fail("cores", "expected a positive integer");

  const json& tasks = field(doc, "tasks", "document");
  if (!tasks.is_array()) fail("tasks", "expected an array");

  std::vector<DagTask> parsed;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    const json& t = tasks[i];
    if (!t.is_object()) fail(where, "expected an object");
    TaskDesc desc;
    desc.id = read_id(field(t, "id", where), where + ".id");
    desc.period = read_time(field(t, "period", where), where + ".period");
    desc.deadline = read_time(field(t, "deadline", where), where + ".deadline");

    const json& nodes = field(t, "nodes", where);
    if (!nodes.is_array()) fail(where + ".nodes", "expected an array");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const std::string nwhere = where + ".nodes[" + std::to_string(k) + "]";
      const json& nd = nodes[k];
      if (!nd.is_object()) fail(nwhere, "expected an object");
      Node node;
      node.id = read_id(field(nd, "id", nwhere), nwhere + ".id");
      node.c_min = read_time(field(nd, "cmin", nwhere), nwhere + ".cmin");
      node.c_max = read_time(field(nd, "cmax", nwhere), nwhere + ".cmax");
      desc.nodes.push_back(std::move(node));
    }

    const json& edges = field(t, "edges", where);
    if (!edges.is_array()) fail(where + ".edges", "expected an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string ewhere = where + ".edges[" + std::to_string(k) + "]";
      const json& e = edges[k];
      if (!e.is_array() || e.size() != 2) fail(ewhere, "expected a [source, target] pair");
      desc.edges.emplace_back(read_id(e[0], ewhere + "[0]"), read_id(e[1], ewhere + "[1]"));
    }
    parsed.push_back(validate(desc, options));
  }
  return TaskSet(std::move(parsed), static_cast<unsigned>(cores.get<std::int64_t>()));
}

std::string serialize_taskset(const TaskSet& ts) {
  json doc;
  doc["cores"] = ts.cores();
  json tasks = json::array();
  for (const DagTask& task : ts.tasks()) {
    json t;
    t["id"] = task.id();
    t["period"] = time_to_json(task.period());
    t["deadline"] = time_to_json(task.deadline());
    json nodes = json::array();
    for (const Node& nd : task.nodes()) {
      json n;
      n["id"] = nd.id;
      n["cmin"] = time_to_json(nd.c_min);
      n["cmax"] = time_to_json(nd.c_max);
      nodes.push_back(std::move(n));
    }
    t["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& [src, dst] : task.edges())
      edges.push_back(json::array({task.nodes()[src].id, task.nodes()[dst].id}));
    t["edges"] = std::move(edges);
    tasks.push_back(std::move(t));
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

TaskSet load_taskset(const std::string& path, const ValidateOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return parse_taskset(buffer.str(), options);
}

void save_taskset(const TaskSet& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << serialize_taskset(ts);
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace dagsched
