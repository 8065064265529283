// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/training.hpp"

#include <algorithm>
#include <sstream>

namespace ctxforge {

void TrainConfig::validate() const {
  if (beam_width < 1) throw CtxError("config key 'beam_width': must be >= 1");
  if (branching_factor < 1) throw CtxError("config key 'branching_factor': must be >= 1");
  if (steps_per_child < 1) throw CtxError("config key 'steps_per_child': must be >= 1");
  if (epochs < 0) throw CtxError("config key 'epochs': must be >= 0");
  if (batch_size < 1) throw CtxError("config key 'batch_size': must be >= 1");
  if (max_global_steps < 0) throw CtxError("config key 'max_global_steps': must be >= 0");
  if (best_of_n < 1) throw CtxError("config key 'best_of_n': must be >= 1");
}

TrainConfig::Mode train_mode_from_string(const std::string& label) {
  if (label == "seq") return TrainConfig::Mode::Seq;
  if (label == "beam") return TrainConfig::Mode::Beam;
  if (label == "bon") return TrainConfig::Mode::BoN;
  throw CtxError("config key 'mode': unknown mode '" + label + "' (expected seq|beam|bon)");
}

std::string to_string(TrainConfig::Mode mode) {
  switch (mode) {
    case TrainConfig::Mode::Seq: return "seq";
    case TrainConfig::Mode::Beam: return "beam";
    case TrainConfig::Mode::BoN: return "bon";
  }
  return "beam";
}

RewardOutcome compute_reward(const std::vector<TaskExample>& tasks,
                             const std::vector<std::string>& outputs, const RewardFn& fn) {
  if (tasks.size() != outputs.size())
    throw CtxError("compute_reward: tasks and outputs must have equal length");
  RewardOutcome outcome;
  outcome.rewards.reserve(tasks.size());
  outcome.feedback.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    try {
      double r = fn(tasks[i], outputs[i]);
      if (!std::isfinite(r)) throw CtxError("reward function returned a non-finite value");
      outcome.rewards.push_back(r);
      std::ostringstream fb;
      fb << "score: " << r;
      outcome.feedback.push_back(fb.str());
    } catch (const std::exception& e) {
      outcome.rewards.push_back(0.0);
      outcome.feedback.push_back(std::string("reward error: ") + e.what());
    }
  }
  return outcome;
}

BatchSampler::BatchSampler(std::size_t n, std::size_t batch_size, unsigned seed)
    : n_(n), batch_size_(batch_size), rng_(seed) {
  reshuffle();
}

void BatchSampler::reshuffle() {
  order_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) order_[i] = i;
  std::shuffle(order_.begin(), order_.end(), rng_);
  cursor_ = 0;
}

std::vector<std::size_t> BatchSampler::next() {
  if (n_ == 0) return {};
  if (cursor_ >= n_) {
    ++epochs_;
    reshuffle();
  }
  std::size_t take = std::min(batch_size_, n_ - cursor_);
  std::vector<std::size_t> batch(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                 order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
  cursor_ += take;
  if (cursor_ >= n_) {
    ++epochs_;
    reshuffle();
  }
  ++batches_;
  return batch;
}

Trainer::Trainer(ContextStore& store, RetrievalEngine& retrieval, ChatBackend& executor_backend,
                 ChatBackend& optimizer_backend, RewardFn reward, Dataset train, Dataset val,
                 TrainConfig config, RunLedger& ledger, ToolsetConfig toolset_config,
                 PreviewStrategy preview, WikipediaAdapter* wikipedia, BrowserAdapter* browser)
    : store_(store),
      retrieval_(retrieval),
      executor_backend_(executor_backend),
      optimizer_backend_(optimizer_backend),
      reward_(std::move(reward)),
      train_(std::move(train)),
      val_(std::move(val)),
      config_(config),
      ledger_(&ledger),
      toolset_config_(toolset_config),
      preview_(preview),
      wikipedia_(wikipedia),
      browser_(browser),
      sampler_(train_.size(), static_cast<std::size_t>(config.batch_size), config.seed) {
  config_.validate();
  toolset_config_.information_seeking = config_.information_seeking;
  context_id_ = store_.create_context();
  val_hash_ = dataset_hash(val_);
}

ContextRepository& Trainer::repo() { return store_.get(context_id_); }

std::vector<Trajectory> Trainer::forward_pass(const std::vector<TaskExample>& batch) {
  store_.set_active(context_id_);
  ExecutorHarness harness(store_, retrieval_, executor_backend_, toolset_config_, preview_);
  return harness.forward_pass(batch, ExecutorMode::Training);
}

LearnableBatch Trainer::make_learnable_batch(const std::vector<TaskExample>& tasks) {
  LearnableBatch batch;
  batch.tasks = tasks;
  auto trajectories = forward_pass(tasks);
  batch.outputs = ExecutorHarness::outputs_of(trajectories);
  RewardOutcome outcome = compute_reward(tasks, batch.outputs, reward_);
  batch.rewards = std::move(outcome.rewards);
  batch.feedback = std::move(outcome.feedback);
  for (const auto& traj : trajectories) {
    if (traj.usage_summary)
      batch.usage_summaries.push_back(traj.usage_summary->free_text);
    else
      batch.usage_summaries.push_back(std::nullopt);
  }
  return batch;
}

Trainer::UpdateOutcome Trainer::optimizer_update(const std::string& branch,
                                                 const LearnableBatch& batch,
                                                 const std::vector<std::string>& sibling_summaries) {
  if (batch.tasks.empty()) throw CtxError("optimizer_update requires a non-empty batch");
  store_.set_active(context_id_);
  ContextRepository& r = repo();
  r.checkout(branch);

  OptimizerDataPackage package;
  package.update_history = histories_[branch];
  package.context_preview = r.render_listing(DetailLevel::Preview);
  for (std::size_t i = 0; i < batch.tasks.size(); ++i) {
    TrajectoryFeedback fb;
    fb.task = batch.tasks[i].task;
    fb.executor_output = batch.outputs[i];
    if (!batch.tasks[i].reference.empty()) fb.reference = batch.tasks[i].reference;
    fb.evaluation_result = batch.feedback[i];
    fb.context_usage_summary = batch.usage_summaries[i];
    package.feedback.push_back(std::move(fb));
  }
  package.sibling_summaries = sibling_summaries;

  ToolEnvironment env;
  env.store = &store_;
  env.retrieval = &retrieval_;
  env.search_subagent = &optimizer_backend_;
  env.wikipedia = wikipedia_;
  env.browser = browser_;
  ToolRegistry registry = make_registry(SessionKind::Optimizer, env, toolset_config_);

  std::string prompt = render_optimizer_prompt(package, registry.specs());
  optimizer_prompts_.push_back(prompt);

  AgentConfig agent_config;
  agent_config.max_steps = kDefaultOptimizerSteps;
  Trajectory traj = run_agent(optimizer_backend_, agent_config, prompt, registry);

  store_.set_active(context_id_);
  UpdateOutcome outcome;
  outcome.applied = traj.status == TrajectoryStatus::Completed;
  outcome.summary = outcome.applied && !traj.final_answer->empty() ? *traj.final_answer : "no-op";
  if (!outcome.applied) r.checkout(branch);  // drop partial edits, commit empty diff
  outcome.commit_id = r.commit(outcome.summary);
  histories_[branch].push_back(HistoryEntry{outcome.summary, std::nullopt});
  ledger_->record_optimizer_call(current_step_, branch, outcome.commit_id, outcome.summary,
                                 outcome.applied);
  return outcome;
}

double Trainer::run_validation_pass() {
  store_.set_active(context_id_);
  ExecutorHarness harness(store_, retrieval_, executor_backend_, toolset_config_, preview_);
  ExecutorMode mode =
      config_.validate_in_training_mode ? ExecutorMode::Training : ExecutorMode::Inference;
  auto trajectories = harness.forward_pass(val_, mode);
  auto outputs = ExecutorHarness::outputs_of(trajectories);
  RewardOutcome outcome = compute_reward(val_, outputs, reward_);
  double sum = 0;
  for (double r : outcome.rewards) sum += r;
  return outcome.rewards.empty() ? 0.0 : sum / static_cast<double>(outcome.rewards.size());
}

double Trainer::validate() {
  store_.set_active(context_id_);
  ContextRepository& r = repo();
  std::string key = r.working_hash() + ":" + val_hash_;
  auto it = validation_cache_.find(key);
  bool cached = it != validation_cache_.end();
  double score = cached ? it->second : run_validation_pass();
  if (!cached) validation_cache_[key] = score;
  ledger_->record_validation(current_step_, r.detached() ? "(detached)" : r.active_branch(),
                             r.working_hash(), score, cached);
  if (!histories_[r.active_branch()].empty() && !r.detached())
    histories_[r.active_branch()].back().val_score = score;
  return score;
}

std::string Trainer::next_branch_name(const CandidateContext& parent, int step_index,
                                      int child_index) {
  return "s" + std::to_string(step_index) + "-p" + std::to_string(parent.creation_index) + "-c" +
         std::to_string(child_index);
}

std::vector<CandidateContext> Trainer::expand(const CandidateContext& parent, int step_index) {
  ContextRepository& r = repo();
  std::vector<CandidateContext> children;
  std::vector<std::string> sibling_summaries;

  for (int j = 0; j < config_.branching_factor; ++j) {
    std::string child_name = next_branch_name(parent, step_index, j);
    r.checkout(parent.branch);
    r.create_branch(child_name, "child " + std::to_string(j) + " of " + parent.branch);
    r.checkout(child_name);
    histories_[child_name] = histories_[parent.branch];

    std::vector<std::string> child_summaries;
    for (int l = 0; l < config_.steps_per_child; ++l) {
      std::vector<TaskExample> tasks;
      for (std::size_t idx : sampler_.next()) tasks.push_back(train_[idx]);
      if (tasks.empty()) throw CtxError("training set is empty; cannot expand");
      LearnableBatch batch = make_learnable_batch(tasks);
      UpdateOutcome outcome = optimizer_update(child_name, batch, sibling_summaries);
      child_summaries.push_back(outcome.summary);
    }

    double score = validate();
    r.update_branch_info(child_name, "val_score", std::to_string(score));

    std::string joined;
    for (std::size_t i = 0; i < child_summaries.size(); ++i) {
      if (i) joined += "; ";
      joined += child_summaries[i];
    }
    sibling_summaries.push_back(joined);

    CandidateContext child;
    child.branch = child_name;
    child.head = r.head_of(child_name);
    child.score = score;
    child.scored = true;
    child.lineage = parent.branch;
    child.exploration_summary = joined;
    child.creation_index = ++creation_counter_;
    children.push_back(std::move(child));
  }
  return children;
}

std::pair<std::vector<CandidateContext>, CandidateContext> Trainer::select_top_k(
    const std::vector<CandidateContext>& candidates, const CandidateContext& previous_best,
    int k) {
  for (const auto& c : candidates)
    if (!c.scored) throw CtxError("select_top_k: candidate " + c.branch + " is unscored");

  std::vector<CandidateContext> pool = candidates;
  CandidateContext elite = previous_best;
  elite.elite = true;
  pool.push_back(elite);

  std::sort(pool.begin(), pool.end(), [](const CandidateContext& a, const CandidateContext& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.elite != b.elite) return a.elite;
    return a.creation_index < b.creation_index;
  });

  std::vector<CandidateContext> beam(
      pool.begin(), pool.begin() + std::min<std::size_t>(static_cast<std::size_t>(k), pool.size()));

  CandidateContext best = pool.front().score > previous_best.score ? pool.front() : elite;
  best.elite = true;
  return {std::move(beam), std::move(best)};
}

CandidateContext Trainer::beam_search_train() {
  ContextRepository& r = repo();
  current_step_ = 0;
  double s0 = validate();

  CandidateContext root;
  root.branch = r.active_branch();
  root.head = r.head_of(root.branch);
  root.score = s0;
  root.scored = true;
  root.elite = true;
  root.creation_index = 0;

  CandidateContext best = root;
  std::vector<CandidateContext> beam(static_cast<std::size_t>(config_.beam_width), root);

  for (int step = 1; step <= config_.max_global_steps; ++step) {
    if (sampler_.epochs_completed() >= config_.epochs) break;
    current_step_ = step;
    std::vector<CandidateContext> candidates;
    for (const auto& parent : beam) {
      auto children = expand(parent, step);
      candidates.insert(candidates.end(), children.begin(), children.end());
    }
    auto [new_beam, new_best] = select_top_k(candidates, best, config_.beam_width);
    beam = std::move(new_beam);
    best = std::move(new_best);
    std::vector<std::string> beam_branches;
    for (const auto& c : beam) beam_branches.push_back(c.branch);
    ledger_->record_selection(step, beam_branches, best.branch, best.score);
  }

  r.checkout(best.branch);
  store_.set_active(context_id_);
  return best;
}

CandidateContext Trainer::seq_train() {
  ContextRepository& r = repo();
  current_step_ = 0;
  double s0 = validate();

  CandidateContext best;
  best.branch = r.active_branch();
  best.head = r.head_of(best.branch);
  best.score = s0;
  best.scored = true;
  best.creation_index = 0;

  const std::string branch = r.active_branch();
  for (int step = 1; step <= config_.max_global_steps; ++step) {
    if (sampler_.epochs_completed() >= config_.epochs) break;
    current_step_ = step;
    std::vector<TaskExample> tasks;
    for (std::size_t idx : sampler_.next()) tasks.push_back(train_[idx]);
    if (tasks.empty()) break;
    LearnableBatch batch = make_learnable_batch(tasks);
    optimizer_update(branch, batch, {});
    double score = validate();
    r.update_branch_info(branch, "val_score", std::to_string(score));
    if (score > best.score) {
      best.branch = branch;
      best.head = r.head_of(branch);
      best.score = score;
      best.creation_index = static_cast<std::uint64_t>(step);
    }
    ledger_->record_selection(step, {branch}, branch, best.score);
  }
  return best;
}

CandidateContext Trainer::best_of_n_context() {
  ContextRepository& r = repo();
  current_step_ = 0;

  Dataset all = train_;
  all.insert(all.end(), val_.begin(), val_.end());

  store_.set_active(context_id_);
  ExecutorHarness harness(store_, retrieval_, executor_backend_, toolset_config_, preview_);
  for (const auto& task : all) {
    std::string best_output;
    double best_reward = 0;
    bool first = true;
    for (int i = 0; i < config_.best_of_n; ++i) {
      Trajectory traj = harness.run_task(task, ExecutorMode::Inference);
      std::string output = traj.final_answer.value_or("");
      RewardOutcome outcome = compute_reward({task}, {output}, reward_);
      if (first || outcome.rewards[0] > best_reward) {
        best_reward = outcome.rewards[0];
        best_output = output;
        first = false;
      }
    }
    r.add_resource("Task: " + task.task + "\nResponse: " + best_output,
                   "best-of-" + std::to_string(config_.best_of_n) + " example",
                   Source::Imported);
  }
  r.commit("best-of-" + std::to_string(config_.best_of_n) + " context over train+val tasks");

  CandidateContext result;
  result.branch = r.active_branch();
  result.head = r.head_of(result.branch);
  result.score = validate();
  result.scored = true;
  return result;
}

CandidateContext Trainer::train() {
  switch (config_.mode) {
    case TrainConfig::Mode::Seq: return seq_train();
    case TrainConfig::Mode::Beam: return beam_search_train();
    case TrainConfig::Mode::BoN: return best_of_n_context();
  }
  throw CtxError("unknown training mode");
}

}  // namespace ctxforge
