// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctxforge/tool_registry.hpp"

namespace ctxforge {

enum class ExecutorMode { Training, Inference };

// Stable section markers; scripted agents and tests key off these.
inline constexpr const char* kContextAndTaskHeader = "### CONTEXT PREVIEW AND TASK GIVEN";
inline constexpr const char* kUpdateHistoryHeader = "### A. CONTEXT UPDATE HISTORY";
inline constexpr const char* kContextPreviewHeader = "### B. CONTEXT PREVIEW";
inline constexpr const char* kFeedbackHeader = "### C. EXECUTOR TRAJECTORY & FEEDBACK";
inline constexpr const char* kSiblingHeader = "### PREVIOUS SIBLING EXPLORATIONS";
inline constexpr const char* kDiversityInstruction =
    "You have already explored the updates above starting from this same context. "
    "Pursue a different update strategy from the previous attempts.";
inline constexpr const char* kEditionOnlyRule =
    "You MUST ONLY modify the content. DO NOT use any branch management actions like "
    "create_branch, checkout, merge_branch, or commit. Changes will be committed "
    "automatically when you are done.";
inline constexpr const char* kDuplicateCallRule =
    "DO NOT call the same tool with the exact same parameters twice.";
inline constexpr const char* kUsageSummaryOnceRule =
    "You must call ctx_usage_summary_tool only one time.";

/// One rendered tool entry per spec, matching the prompt's tool-listing block.
std::string render_tool_list(const std::vector<ToolSpec>& tools);

/// Full executor prompt. `context_preview` and `task` are substituted into the
/// final section; training mode adds the usage-summary protocol step.
std::string render_executor_prompt(const std::string& context_preview, const std::string& task,
                                   const std::vector<ToolSpec>& tools, ExecutorMode mode);

struct HistoryEntry {
  std::string summary;
  std::optional<double> val_score;
};

struct TrajectoryFeedback {
  std::string task;
  std::string executor_output;
  std::optional<std::string> reference;
  std::optional<std::string> evaluation_result;
  std::optional<std::string> context_usage_summary;
};

struct OptimizerDataPackage {
  std::vector<HistoryEntry> update_history;
  std::string context_preview;
  std::vector<TrajectoryFeedback> feedback;
  std::vector<std::string> sibling_summaries;
};

/// Full optimizer prompt: role/rules/tooling system block plus the incoming
/// data package (sections A/B/C) and the recommended workflow. Throws on an
/// empty batch.
std::string render_optimizer_prompt(const OptimizerDataPackage& package,
                                    const std::vector<ToolSpec>& tools);

/// Minimal ranking prompt for the llm_search sub-agent (replaceable).
std::string render_agent_search_prompt(const std::string& query, const std::string& listing);

/// Text of the section starting at `header` up to the next "### " or EOF.
std::string extract_section(const std::string& prompt, const std::string& header);

}  // namespace ctxforge
