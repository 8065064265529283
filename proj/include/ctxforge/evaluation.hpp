// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ctxforge/dataset.hpp"

namespace ctxforge {

/// ChrF++: character n-grams (n=1..6, whitespace stripped) plus word n-grams
/// (n=1..2, whitespace tokenized), clipped matches, per-order precision and
/// recall averaged over orders where either side has n-grams, F-score with
/// beta=2, in [0,100]. Parameters are fixed to that standard and recorded in
/// report headers. Throws CtxError on an empty reference.
double chrf_pp(const std::string& hypothesis, const std::string& reference);

inline constexpr const char* kChrfParams = "chrf++ char_order=6 word_order=2 beta=2";

/// 1 iff trimmed, case-folded equality.
double exact_match(const std::string& hypothesis, const std::string& reference);

using RewardFn = std::function<double(const TaskExample& task, const std::string& output)>;

RewardFn make_metric_fn(const std::string& metric_name);

struct EvalReport {
  std::string metric;
  std::string dataset_hash;
  std::string snapshot_id;
  std::vector<double> per_task;
  double mean = 0;

  std::string to_text() const;
  static EvalReport from_text(const std::string& text);
};

}  // namespace ctxforge
