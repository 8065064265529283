// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/retrieval.hpp"

#include <algorithm>

#include "ctxforge/prompts.hpp"

namespace ctxforge {

RetrievalEngine::RetrievalEngine(std::shared_ptr<EmbeddingProvider> provider)
    : provider_(std::move(provider)) {
  if (!provider_) throw CtxError("retrieval engine requires an embedding provider");
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0;
  std::size_t inter = 0;
  for (const auto& t : a)
    if (b.count(t)) ++inter;
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

std::vector<SearchHit> rank_top_k(std::vector<std::pair<double, std::size_t>> scored,
                                  const ContextSnapshot& snapshot, std::size_t k, MatchKind kind,
                                  bool drop_zero) {
  // Stable by construction: sort on (score desc, position asc).
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<SearchHit> hits;
  for (const auto& [score, idx] : scored) {
    if (hits.size() >= k) break;
    if (drop_zero && score <= 0) continue;
    hits.push_back(SearchHit{snapshot.resources[idx].id, score, kind});
  }
  return hits;
}

}  // namespace

std::vector<SearchHit> RetrievalEngine::keyword_search(const ContextRepository& repo,
                                                       const std::string& query,
                                                       std::size_t k) const {
  if (trim(query).empty()) throw CtxError("empty query");
  std::set<std::string> query_tokens = extract_keywords(query, "");
  const ContextSnapshot& snapshot = repo.working();
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(snapshot.resources.size());
  for (std::size_t i = 0; i < snapshot.resources.size(); ++i)
    scored.emplace_back(jaccard(query_tokens, snapshot.resources[i].keywords), i);
  return rank_top_k(std::move(scored), snapshot, k, MatchKind::Keyword, /*drop_zero=*/true);
}

std::vector<SearchHit> RetrievalEngine::embedding_search(ContextRepository& repo,
                                                         const std::string& query,
                                                         std::size_t k) const {
  if (trim(query).empty()) throw CtxError("empty query");
  const ContextSnapshot& snapshot = repo.working();
  if (snapshot.resources.empty()) return {};
  repo.flush_embeddings(*provider_);
  EmbeddingVector q = provider_->embed(query);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(snapshot.resources.size());
  for (std::size_t i = 0; i < snapshot.resources.size(); ++i) {
    double cos = cosine(q, *snapshot.resources[i].embedding);
    scored.emplace_back((1.0 + cos) / 2.0, i);
  }
  return rank_top_k(std::move(scored), snapshot, k, MatchKind::Embedding, /*drop_zero=*/false);
}

RetrievalEngine::AgentSearchResult RetrievalEngine::agent_search(const ContextRepository& repo,
                                                                 const std::string& query,
                                                                 std::size_t k,
                                                                 ChatBackend& subagent) const {
  if (trim(query).empty()) throw CtxError("empty query");
  const ContextSnapshot& snapshot = repo.working();
  std::string prompt = render_agent_search_prompt(query, repo.render_listing(DetailLevel::Summary));
  std::string reply = subagent.complete({Message{Role::System, prompt}});

  // Expected reply: a JSON array of resource ids; fall back to whitespace-
  // separated tokens. Anything unparseable yields an empty result + warning.
  std::vector<std::string> ranked;
  bool parsed = false;
  try {
    nlohmann::json j = nlohmann::json::parse(reply);
    if (j.is_array()) {
      for (const auto& item : j)
        if (item.is_string()) ranked.push_back(item.get<std::string>());
      parsed = true;
    }
  } catch (const nlohmann::json::exception&) {
  }
  if (!parsed) {
    for (const auto& token : tokenize(reply)) ranked.push_back(token);
  }

  AgentSearchResult result;
  std::set<std::string> seen;
  for (const auto& id : ranked) {
    if (!snapshot.contains(id)) continue;
    if (!seen.insert(id).second) continue;
    result.hits.push_back(
        SearchHit{id, static_cast<double>(ranked.size() - result.hits.size()), MatchKind::Agent});
    if (result.hits.size() >= k) break;
  }
  if (result.hits.empty()) result.warning = true;
  return result;
}

EmbeddingVector RetrievalEngine::embed(const std::string& text) const {
  if (text.empty()) throw CtxError("cannot embed empty text");
  return provider_->embed(text);
}

}  // namespace ctxforge
