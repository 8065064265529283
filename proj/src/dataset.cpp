// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/dataset.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace ctxforge {

Dataset load_dataset(const std::string& path) {
  std::string text = read_text_file(path);
  Dataset dataset;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CtxError(path + ":" + std::to_string(lineno) + ": invalid record: " + e.what());
    }
    if (!j.contains("task") || !j["task"].is_string())
      throw CtxError(path + ":" + std::to_string(lineno) + ": record needs a string 'task'");
    dataset.push_back(TaskExample{j["task"].get<std::string>(), j.value("reference", "")});
  }
  return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ostringstream out;
  for (const auto& ex : dataset) {
    nlohmann::json j;
    j["task"] = ex.task;
    j["reference"] = ex.reference;
    out << j.dump() << "\n";
  }
  write_text_file(path, out.str());
}

std::string dataset_hash(const Dataset& dataset) {
  std::ostringstream buf;
  for (const auto& ex : dataset) buf << ex.task << "\x1f" << ex.reference << "\x1e";
  return sha256_hex(buf.str());
}

}  // namespace ctxforge
