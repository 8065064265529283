// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/agent.hpp"

#include <thread>

#include "ctxforge/prompts.hpp"

namespace ctxforge {

std::string to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::Truncated: return "truncated";
    case TrajectoryStatus::Failed: return "failed";
  }
  return "truncated";
}

namespace {

void collect_tagged_ids(std::string_view text, std::string_view marker,
                        std::set<std::string>& out) {
  std::size_t pos = 0;
  while ((pos = text.find(marker, pos)) != std::string_view::npos) {
    pos += marker.size();
    std::size_t close = text.find('}', pos);
    if (close == std::string_view::npos) break;
    std::string inside(text.substr(pos, close - pos));
    for (const auto& token : tokenize(inside)) out.insert(token);
    pos = close + 1;
  }
}

}  // namespace

UsageSummary parse_usage_tags(std::string_view text) {
  UsageSummary summary;
  summary.free_text = std::string(text);
  collect_tagged_ids(text, "\\helpful_resource_id{", summary.helpful);
  collect_tagged_ids(text, "\\unhelpful_resource_id{", summary.unhelpful);
  for (const auto& id : summary.unhelpful) {
    if (summary.helpful.erase(id) > 0)
      summary.warnings.push_back("resource " + id +
                                 " tagged both helpful and unhelpful; counting as unhelpful");
  }
  return summary;
}

std::optional<ToolCall> parse_action_blob(std::string_view text) {
  std::optional<ToolCall> last;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find('{', pos);
    if (open == std::string_view::npos) break;

    // String-aware brace matching to find candidate JSON objects.
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = open; i < text.size(); ++i) {
      char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        end = i;
        break;
      }
    }
    if (end == std::string_view::npos) {
      pos = open + 1;
      continue;
    }

    std::string candidate(text.substr(open, end - open + 1));
    nlohmann::json j = nlohmann::json::parse(candidate, nullptr, /*allow_exceptions=*/false);
    if (j.is_object() && j.contains("name") && j["name"].is_string() &&
        !j["name"].get<std::string>().empty()) {
      ToolCall call;
      call.name = j["name"].get<std::string>();
      call.arguments = j.contains("arguments") && j["arguments"].is_object()
                           ? j["arguments"]
                           : nlohmann::json::object();
      call.raw = candidate;
      last = std::move(call);
      pos = end + 1;
    } else {
      pos = open + 1;
    }
  }
  return last;
}

std::string serialize_tool_call(const ToolCall& call) {
  nlohmann::json j;
  j["name"] = call.name;
  j["arguments"] = call.arguments;
  return j.dump();
}

Trajectory run_agent(ChatBackend& backend, const AgentConfig& config,
                     const std::string& initial_prompt, const ToolRegistry& registry) {
  Trajectory traj;
  traj.messages.push_back(Message{Role::System, initial_prompt});

  ToolRunState state;
  state.trajectory = &traj;
  state.training_mode = config.training_mode;

  std::set<std::string> seen_calls;

  while (traj.step_count < config.max_steps) {
    std::string reply;
    bool got_reply = false;
    auto backoff = config.backoff;
    for (int attempt = 0; attempt <= config.retries; ++attempt) {
      try {
        reply = backend.complete(traj.messages);
        got_reply = true;
        break;
      } catch (const BackendError&) {
        if (attempt == config.retries) break;
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    ++traj.step_count;
    if (!got_reply) {
      traj.status = TrajectoryStatus::Failed;
      break;
    }

    traj.messages.push_back(Message{Role::Assistant, reply});

    auto call = parse_action_blob(reply);
    if (!call) {
      traj.messages.push_back(Message{
          Role::Tool,
          "Error: no valid action blob found. You MUST ALWAYS call a tool in your response."});
      continue;
    }

    std::string key = call->name + "\x1f" + call->arguments.dump();
    if (!seen_calls.insert(key).second) {
      traj.messages.push_back(Message{Role::Tool, std::string("Error: ") + kDuplicateCallRule});
      continue;
    }

    traj.tool_calls.push_back(*call);
    ToolResult result = registry.dispatch(*call, state);
    traj.messages.push_back(Message{Role::Tool, result.render()});

    if (state.final_answer.has_value()) {
      traj.final_answer = state.final_answer;
      traj.status = TrajectoryStatus::Completed;
      break;
    }
  }

  for (const auto& m : traj.messages) traj.token_estimate += utf8_length(m.content) / 4;
  return traj;
}

}  // namespace ctxforge
