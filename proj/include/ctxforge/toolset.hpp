// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ctxforge/chat_backend.hpp"
#include "ctxforge/retrieval.hpp"
#include "ctxforge/tool_registry.hpp"

namespace ctxforge {

struct WikiPage {
  std::string title;
  std::string extract;
};

/// Encyclopedia lookup adapter. Fixture mode is mandatory for offline runs;
/// live mode is opt-in via configuration.
class WikipediaAdapter {
 public:
  virtual ~WikipediaAdapter() = default;
  virtual std::vector<WikiPage> search(const std::string& query, int max_pages) = 0;
};

/// Serves canned pages from a JSON fixture: {query: [{title, extract}, ...]}.
/// Queries without a fixture entry return zero results (not an error).
class FixtureWikipediaAdapter final : public WikipediaAdapter {
 public:
  explicit FixtureWikipediaAdapter(const std::string& fixture_path);
  FixtureWikipediaAdapter() = default;

  void add_page(const std::string& query, WikiPage page);
  std::vector<WikiPage> search(const std::string& query, int max_pages) override;

 private:
  std::map<std::string, std::vector<WikiPage>> pages_;
};

/// Live adapter against a MediaWiki-style search endpoint.
class LiveWikipediaAdapter final : public WikipediaAdapter {
 public:
  explicit LiveWikipediaAdapter(std::string host = "en.wikipedia.org");
  std::vector<WikiPage> search(const std::string& query, int max_pages) override;

 private:
  std::string host_;
};

/// Web navigation adapter: instruction in, extracted page text out.
/// Throws CtxError on navigation failure.
class BrowserAdapter {
 public:
  virtual ~BrowserAdapter() = default;
  virtual std::string browse(const std::string& instruction) = 0;
};

/// Replays recorded sessions from a JSON fixture: {instruction: payload}.
/// Unrecorded instructions fail (offline mode has no way to navigate).
class FixtureBrowserAdapter final : public BrowserAdapter {
 public:
  explicit FixtureBrowserAdapter(const std::string& fixture_path);
  FixtureBrowserAdapter() = default;

  void add_session(const std::string& instruction, const std::string& payload);
  std::string browse(const std::string& instruction) override;

 private:
  std::map<std::string, std::string> sessions_;
};

/// Minimal live adapter: treats the instruction as a URL, fetches it and
/// strips tags. Anything heavier belongs to an external automation stack.
class LiveBrowserAdapter final : public BrowserAdapter {
 public:
  std::string browse(const std::string& instruction) override;
};

enum class SessionKind { ExecutorTraining, ExecutorInference, Optimizer };

struct ToolsetConfig {
  std::size_t payload_cap = 2000;
  bool information_seeking = false;
  std::size_t default_search_k = 5;
};

/// Wiring for the tool handlers: which store/engine they act on and which
/// adapters and sub-agent backend are available. Raw pointers are non-owning;
/// null adapters disable the corresponding tool.
struct ToolEnvironment {
  ContextStore* store = nullptr;
  RetrievalEngine* retrieval = nullptr;
  ChatBackend* search_subagent = nullptr;
  WikipediaAdapter* wikipedia = nullptr;
  BrowserAdapter* browser = nullptr;
};

/// Builds the registry for one agent session. Executor sessions expose the
/// read-only context actions plus final_answer (and ctx_usage_summary in
/// training); optimizer sessions add the edit actions, planning, and the
/// information-seeking tools when enabled. Version-control actions are never
/// dispatchable from an optimizer session.
ToolRegistry make_registry(SessionKind kind, const ToolEnvironment& env,
                           const ToolsetConfig& config);

/// Action names routed by context_manage_tool, by category.
const std::vector<std::string>& context_edit_actions();
const std::vector<std::string>& context_read_actions();
const std::vector<std::string>& version_control_actions();

}  // namespace ctxforge
