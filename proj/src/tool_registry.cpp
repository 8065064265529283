// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/tool_registry.hpp"

#include <sstream>

namespace ctxforge {

void ToolRegistry::add(ToolSpec spec, ToolHandler handler) {
  std::string name = spec.name;
  if (name.empty()) throw CtxError("tool name must be non-empty");
  if (tools_.count(name)) throw CtxError("duplicate tool name: " + name);
  tools_.emplace(name, std::make_pair(std::move(spec), std::move(handler)));
}

std::vector<ToolSpec> ToolRegistry::specs() const {
  std::vector<ToolSpec> out;
  out.reserve(tools_.size());
  for (const auto& [name, entry] : tools_) out.push_back(entry.first);
  return out;
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(tools_.size());
  for (const auto& [name, entry] : tools_) out.push_back(name);
  return out;
}

namespace {

bool type_matches(const nlohmann::json& value, const std::string& type) {
  if (type == "any") return true;
  if (type == "string") return value.is_string();
  if (type == "int") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "object") return value.is_object();
  return true;
}

}  // namespace

ToolResult ToolRegistry::dispatch(const ToolCall& call, ToolRunState& state) const {
  ToolResult result;
  auto it = tools_.find(call.name);
  if (it == tools_.end()) {
    std::ostringstream msg;
    msg << "unknown tool '" << call.name << "'; available tools:";
    for (const auto& name : names()) msg << " " << name;
    result = ToolResult::failure(msg.str());
  } else {
    const ToolSpec& spec = it->second.first;
    const nlohmann::json& args =
        call.arguments.is_object() ? call.arguments : nlohmann::json::object();
    std::string schema_error;
    for (const auto& p : spec.params) {
      if (!args.contains(p.name)) {
        if (p.required) {
          schema_error = "missing required parameter '" + p.name + "' for tool " + call.name;
          break;
        }
        continue;
      }
      if (!type_matches(args[p.name], p.type)) {
        schema_error = "parameter '" + p.name + "' of tool " + call.name + " must be a " + p.type;
        break;
      }
    }
    if (!schema_error.empty()) {
      result = ToolResult::failure(schema_error);
    } else {
      try {
        result = it->second.second(args, state);
      } catch (const std::exception& e) {
        result = ToolResult::failure(e.what());
      }
    }
  }

  if (utf8_length(result.payload) > payload_cap_) {
    result.payload = truncate_with_marker(result.payload, payload_cap_);
    result.truncated = true;
  }
  if (utf8_length(result.error) > payload_cap_) {
    result.error = truncate_with_marker(result.error, payload_cap_);
    result.truncated = true;
  }
  return result;
}

}  // namespace ctxforge
