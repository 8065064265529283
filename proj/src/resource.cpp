// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/resource.hpp"

#include <cmath>

namespace ctxforge {

std::string to_string(Source source) {
  switch (source) {
    case Source::OptimizerAuthored: return "optimizer-authored";
    case Source::Wikipedia: return "wikipedia";
    case Source::Web: return "web";
    case Source::Imported: return "imported";
  }
  return "optimizer-authored";
}

Source source_from_string(const std::string& label) {
  if (label == "optimizer-authored") return Source::OptimizerAuthored;
  if (label == "wikipedia") return Source::Wikipedia;
  if (label == "web") return Source::Web;
  if (label == "imported") return Source::Imported;
  throw CtxError("unknown source label: " + label);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw CtxError("embedding dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

Resource Resource::make(std::string id, std::string content, std::string summary, Source source) {
  Resource r;
  r.id = std::move(id);
  r.summary = std::move(summary);
  r.source = source;
  r.set_content(std::move(content));
  return r;
}

void Resource::set_content(std::string new_content) {
  content = std::move(new_content);
  length = utf8_length(content);
  keywords = extract_keywords(content, summary);
  embedding.reset();
}

void Resource::set_summary(std::string new_summary) {
  summary = std::move(new_summary);
  keywords = extract_keywords(content, summary);
}

nlohmann::json Resource::canonical() const {
  nlohmann::json j;
  j["id"] = id;
  j["summary"] = summary;
  j["content"] = content;
  j["source"] = to_string(source);
  j["keywords"] = std::vector<std::string>(keywords.begin(), keywords.end());
  return j;
}

}  // namespace ctxforge
