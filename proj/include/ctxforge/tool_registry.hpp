// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxforge/util.hpp"

namespace ctxforge {

struct ParamSpec {
  std::string name;
  std::string type = "string";  // string | int | number | object | any
  bool required = true;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::string output_type = "string";
};

struct ToolResult {
  bool ok = false;
  std::string payload;
  std::string error;
  bool truncated = false;

  static ToolResult success(std::string payload) { return ToolResult{true, std::move(payload), "", false}; }
  static ToolResult failure(std::string error) { return ToolResult{false, "", std::move(error), false}; }

  /// Text form appended to the trajectory as the tool message.
  std::string render() const { return ok ? payload : "Error: " + error; }
};

struct Trajectory;

/// Per-run mutable state shared with tool handlers. The registry itself is
/// immutable once built; everything run-scoped lives here.
struct ToolRunState {
  Trajectory* trajectory = nullptr;
  bool training_mode = false;
  bool usage_summary_called = false;
  std::optional<std::string> final_answer;
};

using ToolHandler = std::function<ToolResult(const nlohmann::json& args, ToolRunState& state)>;

struct ToolCall {
  std::string name;
  nlohmann::json arguments = nlohmann::json::object();
  std::string raw;
};

/// Name -> (spec, handler) table. dispatch() is total: unknown tools, schema
/// violations and handler exceptions all come back as error results, never
/// as exceptions. Payloads are capped with a flagged truncation marker.
class ToolRegistry {
 public:
  void add(ToolSpec spec, ToolHandler handler);

  ToolResult dispatch(const ToolCall& call, ToolRunState& state) const;

  bool has(const std::string& name) const { return tools_.count(name) > 0; }
  std::vector<ToolSpec> specs() const;
  std::vector<std::string> names() const;

  std::size_t payload_cap() const { return payload_cap_; }
  void set_payload_cap(std::size_t cap) { payload_cap_ = cap; }

 private:
  std::map<std::string, std::pair<ToolSpec, ToolHandler>> tools_;
  std::size_t payload_cap_ = 2000;
};

}  // namespace ctxforge
