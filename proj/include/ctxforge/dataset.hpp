// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ctxforge/util.hpp"

namespace ctxforge {

struct TaskExample {
  std::string task;
  std::string reference;
};

using Dataset = std::vector<TaskExample>;

/// Line-oriented dataset file: one JSON record per line with "task" and
/// optional "reference" fields.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path);

/// Stable content hash used for validation-cache and report keys.
std::string dataset_hash(const Dataset& dataset);

}  // namespace ctxforge
