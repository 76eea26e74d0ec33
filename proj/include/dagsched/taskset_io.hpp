#pragma once

#include <stdexcept>
#include <string>

#include "dagsched/dag_task.hpp"

namespace dagsched {

// Input text that is not a well-formed task-set document. The message names
// the offending element (e.g. "tasks[1].nodes[0].cmin").
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document shape: {"cores": m, "tasks": [{id, period, deadline,
// nodes: [{id, cmin, cmax}], edges: [[src, dst], ...]}, ...]} with task order
// carrying priority (highest first). Times are bare integers or strings
// ("p/q" or an exact decimal); non-integral bare numbers are rejected rather
// than silently rounded.
TaskSet parse_taskset(const std::string& text, const ValidateOptions& options = {});

// Canonical form: keys sorted, two-space indent, integral times as numbers
// when they fit a double-safe range and reduced "p/q" strings otherwise.
// Equal sets serialize to identical bytes.
std::string serialize_taskset(const TaskSet& ts);

TaskSet load_taskset(const std::string& path, const ValidateOptions& options = {});
void save_taskset(const TaskSet& ts, const std::string& path);

}  // namespace dagsched
