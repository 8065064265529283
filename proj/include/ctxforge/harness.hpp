// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ctxforge/agent.hpp"
#include "ctxforge/dataset.hpp"
#include "ctxforge/evaluation.hpp"
#include "ctxforge/prompts.hpp"
#include "ctxforge/toolset.hpp"

namespace ctxforge {

/// How the executor's context preview is built from the active context.
/// TaskTopK filters by embedding similarity against the task text; Full lists
/// everything. The filter is a replaceable strategy, not part of the store.
struct PreviewStrategy {
  enum class Kind { TaskTopK, Full } kind = Kind::TaskTopK;
  std::size_t top_k = 8;
  DetailLevel detail = DetailLevel::Preview;
};

/// Runs executor agents against the active context: builds the preview,
/// renders the prompt, drives the tool loop, and collects final answers
/// (empty string for truncated or failed runs).
class ExecutorHarness {
 public:
  ExecutorHarness(ContextStore& store, RetrievalEngine& retrieval, ChatBackend& backend,
                  ToolsetConfig toolset_config = {}, PreviewStrategy preview = {},
                  AgentConfig agent_config = {});

  std::string build_preview(const std::string& task);

  Trajectory run_task(const TaskExample& task, ExecutorMode mode);

  std::vector<Trajectory> forward_pass(const std::vector<TaskExample>& batch, ExecutorMode mode);

  static std::vector<std::string> outputs_of(const std::vector<Trajectory>& trajectories);

  const PreviewStrategy& preview_strategy() const { return preview_; }
  void set_preview_strategy(PreviewStrategy preview) { preview_ = preview; }

 private:
  ContextStore& store_;
  RetrievalEngine& retrieval_;
  ChatBackend& backend_;
  ToolsetConfig toolset_config_;
  PreviewStrategy preview_;
  AgentConfig agent_config_;
};

/// Held-out evaluation: inference-mode forward pass over every test task,
/// scored per task; the report is keyed by the active snapshot id and the
/// dataset hash. Throws CtxError on an empty dataset.
EvalReport evaluate(ExecutorHarness& harness, ContextStore& store, const Dataset& test_set,
                    const std::string& metric_name, const RewardFn& reward);

}  // namespace ctxforge
