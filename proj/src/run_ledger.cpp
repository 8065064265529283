// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/run_ledger.hpp"

#include <sstream>

#include "ctxforge/util.hpp"

namespace ctxforge {

void RunLedger::record_optimizer_call(int step, const std::string& branch,
                                      const std::string& commit, const std::string& summary,
                                      bool applied) {
  ++optimizer_calls_;
  events_.push_back({{"event", "optimizer_call"},
                     {"step", step},
                     {"branch", branch},
                     {"commit", commit},
                     {"summary", summary},
                     {"applied", applied}});
}

void RunLedger::record_validation(int step, const std::string& branch,
                                  const std::string& snapshot_id, double score, bool cached) {
  ++validations_;
  if (!cached) ++distinct_validations_;
  events_.push_back({{"event", "validation"},
                     {"step", step},
                     {"branch", branch},
                     {"snapshot_id", snapshot_id},
                     {"score", score},
                     {"cached", cached}});
}

void RunLedger::record_selection(int step, const std::vector<std::string>& beam_branches,
                                 const std::string& best_branch, double best_score) {
  best_scores_.push_back(best_score);
  events_.push_back({{"event", "selection"},
                     {"step", step},
                     {"beam", beam_branches},
                     {"best_branch", best_branch},
                     {"best_score", best_score}});
}

void RunLedger::save(const std::string& path) const {
  std::ostringstream out;
  for (const auto& event : events_) out << event.dump() << "\n";
  write_text_file(path, out.str());
}

RunLedger RunLedger::load(const std::string& path) {
  RunLedger ledger;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    nlohmann::json event = nlohmann::json::parse(line);
    std::string kind = event.value("event", "");
    if (kind == "optimizer_call") {
      ++ledger.optimizer_calls_;
    } else if (kind == "validation") {
      ++ledger.validations_;
      if (!event.value("cached", false)) ++ledger.distinct_validations_;
    } else if (kind == "selection") {
      ledger.best_scores_.push_back(event.value("best_score", 0.0));
    }
    ledger.events_.push_back(std::move(event));
  }
  return ledger;
}

std::string RunLedger::to_table() const {
  std::ostringstream out;
  out << "step\tevent\tbranch\tscore\n";
  for (const auto& event : events_) {
    std::string kind = event.value("event", "");
    if (kind == "validation") {
      out << event.value("step", 0) << "\tvalidation\t" << event.value("branch", "") << "\t"
          << event.value("score", 0.0) << "\n";
    } else if (kind == "selection") {
      out << event.value("step", 0) << "\tbest\t" << event.value("best_branch", "") << "\t"
          << event.value("best_score", 0.0) << "\n";
    }
  }
  return out.str();
}

}  // namespace ctxforge
