// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/evaluation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ctxforge {

namespace {

constexpr std::size_t kCharOrder = 6;
constexpr std::size_t kWordOrder = 2;
constexpr double kBeta = 2.0;

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Code-point units of the whitespace-stripped string.
std::vector<std::string_view> char_units(const std::string& text) {
  std::vector<std::string_view> units;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    std::size_t actual = 1;
    while (actual < len && i + actual < text.size() &&
           (static_cast<unsigned char>(text[i + actual]) & 0xC0) == 0x80)
      ++actual;
    if (!(actual == 1 && is_ws(text[i]))) units.emplace_back(text.data() + i, actual);
    i += actual;
  }
  return units;
}

std::vector<std::string_view> word_units(const std::string& text) {
  std::vector<std::string_view> words;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || is_ws(text[i])) {
      if (i > start) words.emplace_back(text.data() + start, i - start);
      start = i + 1;
    }
  }
  return words;
}

struct OrderStats {
  long hyp_total = 0;
  long ref_total = 0;
  long matches = 0;
};

// Sliding-window n-gram multiset per order, counted via a hash map.
OrderStats ngram_order_stats(const std::vector<std::string_view>& hyp,
                             const std::vector<std::string_view>& ref, std::size_t n) {
  auto join = [](const std::vector<std::string_view>& units, std::size_t i, std::size_t n) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      key.append(units[i + j]);
      key.push_back('\x1f');
    }
    return key;
  };
  OrderStats stats;
  std::unordered_map<std::string, long> ref_counts;
  if (ref.size() >= n) {
    for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[join(ref, i, n)];
    stats.ref_total = static_cast<long>(ref.size() - n + 1);
  }
  if (hyp.size() >= n) {
    stats.hyp_total = static_cast<long>(hyp.size() - n + 1);
    std::unordered_map<std::string, long> hyp_counts;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[join(hyp, i, n)];
    for (const auto& [key, count] : hyp_counts) {
      auto it = ref_counts.find(key);
      if (it != ref_counts.end()) stats.matches += std::min(count, it->second);
    }
  }
  return stats;
}

}  // namespace

double chrf_pp(const std::string& hypothesis, const std::string& reference) {
  if (reference.empty()) throw CtxError("chrf_pp requires a non-empty reference");

  std::vector<std::string_view> hyp_chars = char_units(hypothesis);
  std::vector<std::string_view> ref_chars = char_units(reference);
  std::vector<std::string_view> hyp_words = word_units(hypothesis);
  std::vector<std::string_view> ref_words = word_units(reference);

  double precision_sum = 0, recall_sum = 0;
  std::size_t effective = 0;
  auto accumulate = [&](const std::vector<std::string_view>& hyp,
                        const std::vector<std::string_view>& ref, std::size_t max_order) {
    for (std::size_t n = 1; n <= max_order; ++n) {
      OrderStats s = ngram_order_stats(hyp, ref, n);
      if (s.hyp_total == 0 && s.ref_total == 0) continue;
      ++effective;
      if (s.hyp_total > 0) precision_sum += static_cast<double>(s.matches) / s.hyp_total;
      if (s.ref_total > 0) recall_sum += static_cast<double>(s.matches) / s.ref_total;
    }
  };
  accumulate(hyp_chars, ref_chars, kCharOrder);
  accumulate(hyp_words, ref_words, kWordOrder);

  if (effective == 0) return 0.0;
  double precision = precision_sum / static_cast<double>(effective);
  double recall = recall_sum / static_cast<double>(effective);
  double denom = kBeta * kBeta * precision + recall;
  if (denom <= 0) return 0.0;
  return 100.0 * (1.0 + kBeta * kBeta) * precision * recall / denom;
}

double exact_match(const std::string& hypothesis, const std::string& reference) {
  return to_lower(trim(hypothesis)) == to_lower(trim(reference)) ? 1.0 : 0.0;
}

RewardFn make_metric_fn(const std::string& metric_name) {
  if (metric_name == "exact_match") {
    return [](const TaskExample& task, const std::string& output) {
      return exact_match(output, task.reference);
    };
  }
  if (metric_name == "chrf_pp" || metric_name == "chrf++") {
    return [](const TaskExample& task, const std::string& output) {
      return chrf_pp(output, task.reference);
    };
  }
  throw CtxError("unknown metric: " + metric_name +
                 " (expected exact_match|chrf_pp; domain rewards are plugin points)");
}

std::string EvalReport::to_text() const {
  nlohmann::json j;
  j["metric"] = metric;
  if (metric == "chrf_pp") j["metric_params"] = kChrfParams;
  j["dataset_hash"] = dataset_hash;
  j["snapshot_id"] = snapshot_id;
  j["per_task"] = per_task;
  j["mean"] = mean;
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EvalReport report;
  report.metric = j.at("metric").get<std::string>();
  report.dataset_hash = j.at("dataset_hash").get<std::string>();
  report.snapshot_id = j.at("snapshot_id").get<std::string>();
  report.per_task = j.at("per_task").get<std::vector<double>>();
  report.mean = j.at("mean").get<double>();
  return report;
}

}  // namespace ctxforge
