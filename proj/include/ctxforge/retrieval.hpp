// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ctxforge/chat_backend.hpp"
#include "ctxforge/embedding.hpp"
#include "ctxforge/repository.hpp"

namespace ctxforge {

enum class MatchKind { Keyword, Embedding, Agent };

struct SearchHit {
  std::string resource_id;
  double score = 0;
  MatchKind kind = MatchKind::Keyword;
};

/// Search paths over the active context. Keyword scoring is Jaccard overlap
/// between query tokens and resource keywords; embedding scoring is cosine
/// mapped to [0,1] via (1+cos)/2; agent scoring is rank-only. All rankings
/// break ties by resource position, earlier first.
class RetrievalEngine {
 public:
  explicit RetrievalEngine(std::shared_ptr<EmbeddingProvider> provider);

  std::vector<SearchHit> keyword_search(const ContextRepository& repo, const std::string& query,
                                        std::size_t k) const;

  /// Flushes stale embeddings first (a store write), then ranks by cosine.
  std::vector<SearchHit> embedding_search(ContextRepository& repo, const std::string& query,
                                          std::size_t k) const;

  struct AgentSearchResult {
    std::vector<SearchHit> hits;
    bool warning = false;  // sub-agent reply had no parseable ranking
  };
  /// Delegates ranking to a sub-agent: it sees the query plus a summary
  /// listing and replies with ordered resource ids. Unknown ids are dropped,
  /// duplicates keep their first occurrence.
  AgentSearchResult agent_search(const ContextRepository& repo, const std::string& query,
                                 std::size_t k, ChatBackend& subagent) const;

  EmbeddingVector embed(const std::string& text) const;
  const EmbeddingProvider& provider() const { return *provider_; }

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
};

/// Jaccard overlap of two token sets.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace ctxforge
