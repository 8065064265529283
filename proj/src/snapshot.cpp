// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/snapshot.hpp"

#include <set>

namespace ctxforge {

const Resource* ContextSnapshot::find(const std::string& id) const {
  for (const auto& r : resources)
    if (r.id == id) return &r;
  return nullptr;
}

Resource* ContextSnapshot::find(const std::string& id) {
  for (auto& r : resources)
    if (r.id == id) return &r;
  return nullptr;
}

std::size_t ContextSnapshot::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < resources.size(); ++i)
    if (resources[i].id == id) return i;
  throw CtxError("no such resource: " + id);
}

bool ContextSnapshot::contains(const std::string& id) const { return find(id) != nullptr; }

std::string ContextSnapshot::canonical_text() const {
  nlohmann::json j;
  j["resources"] = nlohmann::json::array();
  for (const auto& r : resources) j["resources"].push_back(r.canonical());
  return j.dump();
}

std::string ContextSnapshot::hash() const { return sha256_hex(canonical_text()); }

std::string ContextSnapshot::export_text() const {
  nlohmann::json j;
  j["format"] = "ctxforge-snapshot";
  j["resources"] = nlohmann::json::array();
  for (const auto& r : resources) {
    nlohmann::json rec = r.canonical();
    rec["length"] = r.length;
    j["resources"].push_back(rec);
  }
  return j.dump(2) + "\n";
}

ContextSnapshot ContextSnapshot::import_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CtxError(std::string("import: invalid document: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "ctxforge-snapshot")
    throw CtxError("import: not a ctxforge snapshot document");
  if (!j.contains("resources") || !j["resources"].is_array())
    throw CtxError("import: missing resources list");

  ContextSnapshot snapshot;
  std::set<std::string> seen_ids;
  for (const auto& rec : j["resources"]) {
    Resource r;
    try {
      r.id = rec.at("id").get<std::string>();
      r.summary = rec.at("summary").get<std::string>();
      r.content = rec.at("content").get<std::string>();
      r.source = source_from_string(rec.at("source").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw CtxError(std::string("import: malformed resource record: ") + e.what());
    }
    if (r.id.empty()) throw CtxError("import: empty resource id");
    if (!seen_ids.insert(r.id).second) throw CtxError("import: duplicate resource id: " + r.id);
    r.length = utf8_length(r.content);
    if (rec.contains("length") && rec["length"].get<std::size_t>() != r.length)
      throw CtxError("import: length field does not match content for resource " + r.id);
    if (rec.contains("keywords")) {
      for (const auto& kw : rec["keywords"]) {
        std::string token = kw.get<std::string>();
        if (token != to_lower(token))
          throw CtxError("import: keyword not lowercase for resource " + r.id);
        r.keywords.insert(token);
      }
    } else {
      r.keywords = extract_keywords(r.content, r.summary);
    }
    if (!r.content.empty() && r.keywords.empty()) {
      r.keywords = extract_keywords(r.content, r.summary);
      if (r.keywords.empty() && !tokenize(r.content).empty())
        throw CtxError("import: empty keywords for non-empty resource " + r.id);
    }
    snapshot.resources.push_back(std::move(r));
  }
  return snapshot;
}

}  // namespace ctxforge
