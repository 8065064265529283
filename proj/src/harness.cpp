// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/harness.hpp"

#include <sstream>

namespace ctxforge {

ExecutorHarness::ExecutorHarness(ContextStore& store, RetrievalEngine& retrieval,
                                 ChatBackend& backend, ToolsetConfig toolset_config,
                                 PreviewStrategy preview, AgentConfig agent_config)
    : store_(store),
      retrieval_(retrieval),
      backend_(backend),
      toolset_config_(toolset_config),
      preview_(preview),
      agent_config_(agent_config) {}

std::string ExecutorHarness::build_preview(const std::string& task) {
  ContextRepository& repo = store_.active();
  if (repo.working().resources.empty()) return "";
  if (preview_.kind == PreviewStrategy::Kind::Full)
    return repo.render_listing(preview_.detail);

  auto hits = retrieval_.embedding_search(repo, task, preview_.top_k);
  std::ostringstream out;
  for (const auto& hit : hits) {
    const Resource& r = repo.get_resource(hit.resource_id);
    out << "[" << r.id << "] " << r.summary << " (length=" << r.length
        << ", source=" << to_string(r.source) << ")";
    if (preview_.detail == DetailLevel::Preview)
      out << "\n    " << truncate_with_marker(r.content, repo.preview_chars());
    else if (preview_.detail == DetailLevel::Detail)
      out << "\n    " << r.content;
    out << "\n";
  }
  std::string text = out.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

Trajectory ExecutorHarness::run_task(const TaskExample& task, ExecutorMode mode) {
  ToolEnvironment env;
  env.store = &store_;
  env.retrieval = &retrieval_;
  env.search_subagent = &backend_;
  SessionKind kind = mode == ExecutorMode::Training ? SessionKind::ExecutorTraining
                                                    : SessionKind::ExecutorInference;
  ToolRegistry registry = make_registry(kind, env, toolset_config_);

  std::string preview = build_preview(task.task);
  std::string prompt = render_executor_prompt(preview, task.task, registry.specs(), mode);

  AgentConfig config = agent_config_;
  config.training_mode = mode == ExecutorMode::Training;
  return run_agent(backend_, config, prompt, registry);
}

std::vector<Trajectory> ExecutorHarness::forward_pass(const std::vector<TaskExample>& batch,
                                                      ExecutorMode mode) {
  std::vector<Trajectory> trajectories;
  trajectories.reserve(batch.size());
  for (const auto& task : batch) trajectories.push_back(run_task(task, mode));
  return trajectories;
}

std::vector<std::string> ExecutorHarness::outputs_of(const std::vector<Trajectory>& trajectories) {
  std::vector<std::string> outputs;
  outputs.reserve(trajectories.size());
  for (const auto& t : trajectories)
    outputs.push_back(t.final_answer.value_or(""));
  return outputs;
}

EvalReport evaluate(ExecutorHarness& harness, ContextStore& store, const Dataset& test_set,
                    const std::string& metric_name, const RewardFn& reward) {
  if (test_set.empty()) throw CtxError("empty dataset: nothing to evaluate");
  EvalReport report;
  report.metric = metric_name;
  report.dataset_hash = dataset_hash(test_set);
  report.snapshot_id = store.active().working_hash();

  auto trajectories = harness.forward_pass(test_set, ExecutorMode::Inference);
  auto outputs = ExecutorHarness::outputs_of(trajectories);
  RewardOutcome outcome = compute_reward(test_set, outputs, reward);
  report.per_task = outcome.rewards;
  double sum = 0;
  for (double r : report.per_task) sum += r;
  report.mean = sum / static_cast<double>(report.per_task.size());
  return report;
}

}  // namespace ctxforge
