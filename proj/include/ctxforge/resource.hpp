// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxforge/util.hpp"

namespace ctxforge {

enum class Source { OptimizerAuthored, Wikipedia, Web, Imported };

std::string to_string(Source source);
Source source_from_string(const std::string& label);

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// One atomic context item. `length` is the code-point count of `content`
/// and `keywords` the extracted keyword set; both are maintained by
/// set_content. The embedding is filled lazily by the retrieval layer and
/// invalidated whenever content changes.
struct Resource {
  std::string id;
  std::string summary;
  std::string content;
  Source source = Source::OptimizerAuthored;
  std::size_t length = 0;
  std::set<std::string> keywords;
  std::optional<EmbeddingVector> embedding;

  static Resource make(std::string id, std::string content, std::string summary, Source source);

  void set_content(std::string new_content);
  void set_summary(std::string new_summary);

  /// Hash-relevant fields in canonical key order (no embedding, no length).
  nlohmann::json canonical() const;
};

}  // namespace ctxforge
