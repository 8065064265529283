// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxforge/chat_backend.hpp"
#include "ctxforge/tool_registry.hpp"

namespace ctxforge {

struct UsageSummary {
  std::set<std::string> helpful;
  std::set<std::string> unhelpful;
  std::string free_text;
  std::vector<std::string> warnings;
};

/// Extracts \helpful_resource_id{...} / \unhelpful_resource_id{...} markers.
/// An id tagged both ways resolves to unhelpful and is logged as a warning.
UsageSummary parse_usage_tags(std::string_view text);

enum class TrajectoryStatus { Completed, Truncated, Failed };

std::string to_string(TrajectoryStatus status);

/// Full record of one agent run: the message transcript, the dispatched tool
/// calls, and the protocol outcomes.
struct Trajectory {
  std::vector<Message> messages;
  std::vector<ToolCall> tool_calls;
  std::optional<std::string> final_answer;
  std::optional<UsageSummary> usage_summary;
  std::vector<std::string> plans;
  TrajectoryStatus status = TrajectoryStatus::Truncated;
  int step_count = 0;  // backend calls issued
  std::size_t token_estimate = 0;
};

/// Finds the last well-formed action blob ({"name": ..., "arguments": {...}})
/// in assistant text. Returns nothing when no valid blob exists.
std::optional<ToolCall> parse_action_blob(std::string_view text);

std::string serialize_tool_call(const ToolCall& call);

struct AgentConfig {
  int max_steps = 12;
  int retries = 3;
  std::chrono::milliseconds backoff{25};
  bool training_mode = false;
};

inline constexpr int kDefaultExecutorSteps = 12;
inline constexpr int kDefaultOptimizerSteps = 24;

/// Tool-call loop: send messages, parse the action blob, dispatch, append the
/// tool result, until final_answer_tool succeeds or the step budget runs out.
/// Duplicate (tool, arguments) calls are rejected with a corrective tool
/// message. Backend failures are retried with exponential backoff; persistent
/// failure marks the trajectory Failed.
Trajectory run_agent(ChatBackend& backend, const AgentConfig& config,
                     const std::string& initial_prompt, const ToolRegistry& registry);

}  // namespace ctxforge
