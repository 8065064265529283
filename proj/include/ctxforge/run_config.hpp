// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "ctxforge/training.hpp"

namespace ctxforge {

/// Operator-facing run configuration: one JSON file plus environment
/// variables for secrets. Parse errors name the offending key.
struct RunConfig {
  TrainConfig train;
  std::string backend = "scripted";  // scripted | live
  std::string fixtures;              // required for scripted backends
  std::string out;                   // run directory
  std::string metric = "exact_match";
  std::optional<std::string> train_dataset;
  std::optional<std::string> val_dataset;
  std::optional<std::string> test_dataset;
  std::string live_host = "https://api.openai.com";
  std::string live_path = "/v1/chat/completions";
  std::string live_model;
  std::size_t payload_cap = 2000;
  std::string preview = "topk";  // topk | full
  std::size_t preview_top_k = 8;
  bool resume = false;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

}  // namespace ctxforge
