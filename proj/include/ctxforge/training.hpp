// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctxforge/evaluation.hpp"
#include "ctxforge/harness.hpp"
#include "ctxforge/run_ledger.hpp"

namespace ctxforge {

struct TrainConfig {
  enum class Mode { Seq, Beam, BoN };
  Mode mode = Mode::Beam;
  int beam_width = 2;       // K
  int branching_factor = 3; // M
  int steps_per_child = 1;  // L
  int epochs = 2;
  int batch_size = 4;
  int max_global_steps = 8;
  int best_of_n = 8;
  unsigned seed = 0;
  bool information_seeking = false;
  bool validate_in_training_mode = false;

  void validate() const;  // throws CtxError on bad parameters
};

TrainConfig::Mode train_mode_from_string(const std::string& label);
std::string to_string(TrainConfig::Mode mode);

/// (tasks, outputs, rewards) consumed by one optimizer update step.
struct LearnableBatch {
  std::vector<TaskExample> tasks;
  std::vector<std::string> outputs;
  std::vector<double> rewards;
  std::vector<std::string> feedback;
  std::vector<std::optional<std::string>> usage_summaries;
};

struct RewardOutcome {
  std::vector<double> rewards;
  std::vector<std::string> feedback;
};

/// Applies the reward function element-wise; a failing element scores 0 and
/// the error is recorded in its feedback slot.
RewardOutcome compute_reward(const std::vector<TaskExample>& tasks,
                             const std::vector<std::string>& outputs, const RewardFn& fn);

/// A branch reference plus its validation score: the unit beam search ranks.
struct CandidateContext {
  std::string branch;
  std::string head;
  double score = 0;
  bool scored = false;
  std::string lineage;
  std::string exploration_summary;
  std::uint64_t creation_index = 0;
  bool elite = false;
};

/// Epoch-based shuffling without replacement, seeded.
class BatchSampler {
 public:
  BatchSampler(std::size_t n, std::size_t batch_size, unsigned seed);
  std::vector<std::size_t> next();
  int epochs_completed() const { return epochs_; }
  std::size_t batches_drawn() const { return batches_; }

 private:
  void reshuffle();
  std::size_t n_;
  std::size_t batch_size_;
  std::mt19937 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  int epochs_ = 0;
  std::size_t batches_ = 0;
};

/// Drives the context-training loop over one repository: forward pass,
/// reward, optimizer update, validation, and the three training modes.
class Trainer {
 public:
  Trainer(ContextStore& store, RetrievalEngine& retrieval, ChatBackend& executor_backend,
          ChatBackend& optimizer_backend, RewardFn reward, Dataset train, Dataset val,
          TrainConfig config, RunLedger& ledger, ToolsetConfig toolset_config = {},
          PreviewStrategy preview = {}, WikipediaAdapter* wikipedia = nullptr,
          BrowserAdapter* browser = nullptr);

  CandidateContext train();
  CandidateContext seq_train();
  CandidateContext beam_search_train();
  CandidateContext best_of_n_context();

  std::vector<Trajectory> forward_pass(const std::vector<TaskExample>& batch);
  LearnableBatch make_learnable_batch(const std::vector<TaskExample>& tasks);

  struct UpdateOutcome {
    std::string commit_id;
    std::string summary;
    bool applied = false;  // false: failed/truncated optimizer, empty-diff commit
  };
  UpdateOutcome optimizer_update(const std::string& branch, const LearnableBatch& batch,
                                 const std::vector<std::string>& sibling_summaries);

  /// Mean reward of the working snapshot over the validation set, cached by
  /// (snapshot hash, validation-set hash).
  double validate();

  /// Forks M children from the parent and optimizes each for L steps; children
  /// are built sequentially, each seeing summaries of its earlier siblings.
  std::vector<CandidateContext> expand(const CandidateContext& parent, int step_index);

  /// Pool = candidates + previous best (elitism). Beam is the top-K by score
  /// (elite wins ties, then earlier creation); the best is replaced only by a
  /// strictly greater score.
  static std::pair<std::vector<CandidateContext>, CandidateContext> select_top_k(
      const std::vector<CandidateContext>& candidates, const CandidateContext& previous_best,
      int k);

  ContextRepository& repo();
  const std::string& context_id() const { return context_id_; }
  RunLedger& ledger() { return *ledger_; }
  const TrainConfig& config() const { return config_; }

  /// Captured optimizer prompts, in dispatch order (sibling-diversity tests).
  const std::vector<std::string>& optimizer_prompts() const { return optimizer_prompts_; }

 private:
  double run_validation_pass();
  std::string next_branch_name(const CandidateContext& parent, int step_index, int child_index);

  ContextStore& store_;
  RetrievalEngine& retrieval_;
  ChatBackend& executor_backend_;
  ChatBackend& optimizer_backend_;
  RewardFn reward_;
  Dataset train_;
  Dataset val_;
  TrainConfig config_;
  RunLedger* ledger_;
  ToolsetConfig toolset_config_;
  PreviewStrategy preview_;
  WikipediaAdapter* wikipedia_;
  BrowserAdapter* browser_;

  std::string context_id_;
  std::string val_hash_;
  BatchSampler sampler_;
  std::map<std::string, double> validation_cache_;
  std::map<std::string, std::vector<HistoryEntry>> histories_;
  std::uint64_t creation_counter_ = 0;
  int current_step_ = 0;
  std::vector<std::string> optimizer_prompts_;
};

}  // namespace ctxforge
