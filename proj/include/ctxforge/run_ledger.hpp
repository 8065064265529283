// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace ctxforge {

/// Append-only structured log of a training run: optimizer calls, validation
/// scores, selections, and per-step bests. Sufficient to regenerate training
/// trajectories; consumed by the inspect command and the budget accounting.
class RunLedger {
 public:
  void record_optimizer_call(int step, const std::string& branch, const std::string& commit,
                             const std::string& summary, bool applied);
  void record_validation(int step, const std::string& branch, const std::string& snapshot_id,
                         double score, bool cached);
  void record_selection(int step, const std::vector<std::string>& beam_branches,
                        const std::string& best_branch, double best_score);

  std::size_t optimizer_calls() const { return optimizer_calls_; }
  std::size_t validations() const { return validations_; }
  /// Cache-miss validations == distinct (snapshot, dataset) scores.
  std::size_t distinct_validations() const { return distinct_validations_; }
  const std::vector<double>& best_score_history() const { return best_scores_; }

  const std::vector<nlohmann::json>& events() const { return events_; }

  void save(const std::string& path) const;
  static RunLedger load(const std::string& path);

  /// Tab-separated (step, event, branch, score) table for plotting.
  std::string to_table() const;

 private:
  std::vector<nlohmann::json> events_;
  std::size_t optimizer_calls_ = 0;
  std::size_t validations_ = 0;
  std::size_t distinct_validations_ = 0;
  std::vector<double> best_scores_;
};

}  // namespace ctxforge
