// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/toolset.hpp"

#include <httplib.h>

#include <algorithm>
#include <sstream>

#include "ctxforge/agent.hpp"
#include "ctxforge/prompts.hpp"

namespace ctxforge {

FixtureWikipediaAdapter::FixtureWikipediaAdapter(const std::string& fixture_path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(fixture_path));
  for (const auto& [query, pages] : j.items()) {
    for (const auto& page : pages) {
      pages_[query].push_back(
          WikiPage{page.at("title").get<std::string>(), page.at("extract").get<std::string>()});
    }
  }
}

void FixtureWikipediaAdapter::add_page(const std::string& query, WikiPage page) {
  pages_[query].push_back(std::move(page));
}

std::vector<WikiPage> FixtureWikipediaAdapter::search(const std::string& query, int max_pages) {
  auto it = pages_.find(query);
  if (it == pages_.end()) return {};
  std::vector<WikiPage> out = it->second;
  if (max_pages > 0 && out.size() > static_cast<std::size_t>(max_pages))
    out.resize(static_cast<std::size_t>(max_pages));
  return out;
}

LiveWikipediaAdapter::LiveWikipediaAdapter(std::string host) : host_(std::move(host)) {}

std::vector<WikiPage> LiveWikipediaAdapter::search(const std::string& query, int max_pages) {
  httplib::Client client(host_);
  client.set_connection_timeout(15);
  std::string path = "/w/api.php?action=query&list=search&format=json&srsearch=" +
                     httplib::detail::encode_url(query) +
                     "&srlimit=" + std::to_string(max_pages > 0 ? max_pages : 5);
  auto res = client.Get(path);
  if (!res || res->status != 200)
    throw CtxError("wikipedia search failed: no response from " + host_);
  std::vector<WikiPage> pages;
  nlohmann::json j = nlohmann::json::parse(res->body);
  for (const auto& hit : j.at("query").at("search")) {
    std::string snippet = hit.value("snippet", "");
    // Strip the highlight markup the API embeds in snippets.
    std::string clean;
    bool in_tag = false;
    for (char c : snippet) {
      if (c == '<') in_tag = true;
      else if (c == '>') in_tag = false;
      else if (!in_tag) clean += c;
    }
    pages.push_back(WikiPage{hit.value("title", ""), clean});
  }
  return pages;
}

FixtureBrowserAdapter::FixtureBrowserAdapter(const std::string& fixture_path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(fixture_path));
  for (const auto& [instruction, payload] : j.items())
    sessions_[instruction] = payload.get<std::string>();
}

void FixtureBrowserAdapter::add_session(const std::string& instruction,
                                        const std::string& payload) {
  sessions_[instruction] = payload;
}

std::string FixtureBrowserAdapter::browse(const std::string& instruction) {
  auto it = sessions_.find(instruction);
  if (it == sessions_.end())
    throw CtxError("no fixture recorded for browser instruction: " + instruction);
  return it->second;
}

std::string LiveBrowserAdapter::browse(const std::string& instruction) {
  std::string url = trim(instruction);
  if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0)
    throw CtxError("live browser adapter expects a URL instruction, got: " + instruction);
  std::size_t scheme_end = url.find("://") + 3;
  std::size_t path_start = url.find('/', scheme_end);
  std::string host = url.substr(0, path_start == std::string::npos ? url.size() : path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(host);
  client.set_connection_timeout(15);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res || res->status != 200) throw CtxError("navigation failed for " + url);
  std::string text;
  bool in_tag = false;
  for (char c : res->body) {
    if (c == '<') in_tag = true;
    else if (c == '>') in_tag = false;
    else if (!in_tag) text += c;
  }
  return text;
}

namespace {

std::string arg_string(const nlohmann::json& args, const std::string& key,
                       const std::string& fallback = "") {
  if (!args.contains(key)) return fallback;
  const auto& v = args.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::size_t arg_count(const nlohmann::json& args, const std::string& key, std::size_t fallback) {
  if (!args.contains(key)) return fallback;
  const auto& v = args.at(key);
  if (v.is_number_integer()) {
    auto n = v.get<long long>();
    return n < 0 ? 0 : static_cast<std::size_t>(n);
  }
  if (v.is_string()) {
    try {
      return static_cast<std::size_t>(std::stoull(v.get<std::string>()));
    } catch (...) {
      return fallback;
    }
  }
  return fallback;
}

std::string render_hits(const std::vector<SearchHit>& hits, const ContextRepository& repo) {
  if (hits.empty()) return "(no matching resources)";
  std::ostringstream out;
  for (const auto& hit : hits) {
    out << "[" << hit.resource_id << "] score=" << hit.score << " "
        << repo.get_resource(hit.resource_id).summary << "\n";
  }
  std::string text = out.str();
  text.pop_back();
  return text;
}

ToolResult handle_context_action(SessionKind kind, const ToolEnvironment& env,
                                 const ToolsetConfig& config, const nlohmann::json& args,
                                 ToolRunState& state) {
  std::string action = arg_string(args, "action");
  const auto& vc = version_control_actions();
  bool is_vc = std::find(vc.begin(), vc.end(), action) != vc.end();
  const auto& edits = context_edit_actions();
  bool is_edit = std::find(edits.begin(), edits.end(), action) != edits.end();

  if (kind == SessionKind::Optimizer && is_vc)
    return ToolResult::failure(std::string("action '") + action + "' is not available: " +
                               kEditionOnlyRule);
  if (kind != SessionKind::Optimizer && (is_vc || is_edit))
    return ToolResult::failure("action '" + action +
                               "' is not available in an executor session; use the read actions "
                               "(get_resource, search, embedding_search, llm_search, "
                               "list_resources)");

  ContextStore& store = *env.store;

  if (action == "create") {
    std::string id = store.create_context();
    return ToolResult::success("created empty context " + id + " (now active)");
  }
  if (action == "set_active") {
    std::string id = arg_string(args, "context_id");
    store.set_active(id);
    return ToolResult::success("active context is now " + id);
  }

  ContextRepository& repo = store.active();

  if (action == "add") {
    std::string content = arg_string(args, "content");
    std::string summary = arg_string(args, "summary");
    std::string source = arg_string(args, "source", "optimizer-authored");
    std::string id = repo.add_resource(content, summary, source_from_string(source));
    return ToolResult::success("added resource " + id);
  }
  if (action == "update") {
    repo.update_resource(arg_string(args, "resource_id"), arg_string(args, "field"),
                         arg_string(args, "value"));
    return ToolResult::success("updated " + arg_string(args, "field") + " of " +
                               arg_string(args, "resource_id"));
  }
  if (action == "remove" || action == "delete") {
    std::string id = arg_string(args, "resource_id");
    repo.remove_resource(id);
    return ToolResult::success("removed resource " + id);
  }
  if (action == "swap") {
    repo.swap_resources(arg_string(args, "resource_id_a"), arg_string(args, "resource_id_b"));
    return ToolResult::success("swapped " + arg_string(args, "resource_id_a") + " and " +
                               arg_string(args, "resource_id_b"));
  }
  if (action == "merge") {
    std::string id = repo.merge_resources(arg_string(args, "resource_id_a"),
                                          arg_string(args, "resource_id_b"),
                                          arg_string(args, "summary"));
    return ToolResult::success("merged into resource " + id);
  }
  if (action == "get_resource") {
    const Resource& r = repo.get_resource(arg_string(args, "resource_id"));
    std::ostringstream out;
    out << "[" << r.id << "] " << r.summary << "\nsource: " << to_string(r.source)
        << "\nlength: " << r.length << "\nkeywords:";
    for (const auto& kw : r.keywords) out << " " << kw;
    out << "\ncontent:\n" << r.content;
    return ToolResult::success(out.str());
  }
  if (action == "list_resources") {
    DetailLevel level = detail_level_from_string(arg_string(args, "detail", "summary"));
    return ToolResult::success(repo.render_listing(level, arg_count(args, "limit", 0)));
  }
  if (action == "search") {
    auto hits = env.retrieval->keyword_search(repo, arg_string(args, "query"),
                                              arg_count(args, "k", config.default_search_k));
    return ToolResult::success(render_hits(hits, repo));
  }
  if (action == "embedding_search") {
    auto hits = env.retrieval->embedding_search(repo, arg_string(args, "query"),
                                                arg_count(args, "k", config.default_search_k));
    return ToolResult::success(render_hits(hits, repo));
  }
  if (action == "llm_search") {
    if (!env.search_subagent)
      return ToolResult::failure("llm_search is unavailable: no sub-agent backend configured");
    auto result = env.retrieval->agent_search(repo, arg_string(args, "query"),
                                              arg_count(args, "k", config.default_search_k),
                                              *env.search_subagent);
    std::string text = render_hits(result.hits, repo);
    if (result.warning) text += "\n(warning: sub-agent returned no parseable ranking)";
    return ToolResult::success(text);
  }
  if (action == "create_branch") {
    repo.create_branch(arg_string(args, "name"), arg_string(args, "description"));
    return ToolResult::success("created branch " + arg_string(args, "name"));
  }
  if (action == "checkout") {
    repo.checkout(arg_string(args, "target"));
    return ToolResult::success("checked out " + arg_string(args, "target"));
  }
  if (action == "commit") {
    std::string id = repo.commit(arg_string(args, "message"));
    return ToolResult::success("committed " + id);
  }
  if (action == "merge_branch") {
    std::string id = repo.merge_branch(arg_string(args, "source"), arg_string(args, "target"));
    return ToolResult::success("merge commit " + id);
  }
  if (action == "list_branches") {
    std::ostringstream out;
    for (const auto& b : repo.list_branches()) {
      out << b.name << " -> " << b.head << " (" << b.description << ")";
      for (const auto& [k, v] : b.metadata) out << " " << k << "=" << v;
      out << "\n";
    }
    std::string text = out.str();
    if (!text.empty()) text.pop_back();
    return ToolResult::success(text);
  }
  if (action == "update_branch_info") {
    repo.update_branch_info(arg_string(args, "name"), arg_string(args, "key"),
                            arg_string(args, "value"));
    return ToolResult::success("updated branch " + arg_string(args, "name"));
  }

  std::ostringstream msg;
  msg << "unknown action '" << action << "'; available actions:";
  for (const auto& a : context_edit_actions()) msg << " " << a;
  for (const auto& a : context_read_actions()) msg << " " << a;
  if (kind == SessionKind::Optimizer) msg << " (version-control actions are not available)";
  (void)state;
  return ToolResult::failure(msg.str());
}

}  // namespace

const std::vector<std::string>& context_edit_actions() {
  static const std::vector<std::string> actions = {"create", "add",   "update",    "remove",
                                                   "delete", "swap",  "merge",     "set_active"};
  return actions;
}

const std::vector<std::string>& context_read_actions() {
  static const std::vector<std::string> actions = {"get_resource", "search", "embedding_search",
                                                   "llm_search", "list_resources"};
  return actions;
}

const std::vector<std::string>& version_control_actions() {
  static const std::vector<std::string> actions = {"create_branch", "checkout",
                                                   "commit",        "merge_branch",
                                                   "list_branches", "update_branch_info"};
  return actions;
}

ToolRegistry make_registry(SessionKind kind, const ToolEnvironment& env,
                           const ToolsetConfig& config) {
  if (!env.store || !env.retrieval)
    throw CtxError("tool environment requires a context store and a retrieval engine");
  ToolRegistry registry;
  registry.set_payload_cap(config.payload_cap);

  std::string manage_desc =
      kind == SessionKind::Optimizer
          ? "Manage the structured context. Actions: add, update, remove, delete, swap, merge, "
            "create, set_active, get_resource, search, embedding_search, llm_search, "
            "list_resources."
          : "Read the structured context. Actions: get_resource, search, embedding_search, "
            "llm_search, list_resources.";
  registry.add(ToolSpec{"context_manage_tool", manage_desc,
                        {ParamSpec{"action", "string", true}},
                        "string"},
               [kind, env, config](const nlohmann::json& args, ToolRunState& state) {
                 return handle_context_action(kind, env, config, args, state);
               });

  registry.add(ToolSpec{"final_answer_tool", "Submit the final answer and finish the run.",
                        {ParamSpec{"answer", "any", true}},
                        "string"},
               [](const nlohmann::json& args, ToolRunState& state) {
                 const auto& v = args.at("answer");
                 state.final_answer = v.is_string() ? v.get<std::string>() : v.dump();
                 return ToolResult::success("final answer recorded");
               });

  if (kind == SessionKind::ExecutorTraining || kind == SessionKind::ExecutorInference) {
    registry.add(
        ToolSpec{"ctx_usage_summary_tool",
                 "Report once how the context was used; tag resources with "
                 "\\helpful_resource_id{...} and \\unhelpful_resource_id{...}.",
                 {ParamSpec{"summary", "string", true}},
                 "string"},
        [](const nlohmann::json& args, ToolRunState& state) {
          if (!state.training_mode)
            return ToolResult::failure("ctx_usage_summary_tool is only available in training mode");
          if (state.usage_summary_called)
            return ToolResult::failure(std::string(kUsageSummaryOnceRule) +
                                       " It was already called in this run.");
          state.usage_summary_called = true;
          UsageSummary summary = parse_usage_tags(args.at("summary").get<std::string>());
          if (state.trajectory) state.trajectory->usage_summary = summary;
          return ToolResult::success("usage summary recorded");
        });
  }

  if (kind == SessionKind::Optimizer) {
    registry.add(ToolSpec{"planning_tool", "Record a clear actionable plan for this step.",
                          {ParamSpec{"plan", "string", true}},
                          "string"},
                 [](const nlohmann::json& args, ToolRunState& state) {
                   std::string plan = args.at("plan").get<std::string>();
                   if (state.trajectory) state.trajectory->plans.push_back(plan);
                   if (trim(plan).empty())
                     return ToolResult::success("warning: empty plan recorded");
                   return ToolResult::success("plan recorded: " + plan);
                 });

    if (config.information_seeking) {
      if (env.wikipedia) {
        WikipediaAdapter* wiki = env.wikipedia;
        registry.add(
            ToolSpec{"wikipedia_search_tool",
                     "Search the encyclopedia for declarative knowledge; returns titles and "
                     "extracts.",
                     {ParamSpec{"query", "string", true}, ParamSpec{"max_pages", "int", false}},
                     "string"},
            [wiki](const nlohmann::json& args, ToolRunState&) {
              int max_pages = static_cast<int>(arg_count(args, "max_pages", 3));
              auto pages = wiki->search(args.at("query").get<std::string>(), max_pages);
              if (pages.empty())
                return ToolResult::success("no matches for query: " +
                                           args.at("query").get<std::string>());
              std::ostringstream out;
              for (const auto& page : pages) out << "== " << page.title << " ==\n" << page.extract << "\n";
              std::string text = out.str();
              text.pop_back();
              return ToolResult::success(text);
            });
      }
      if (env.browser) {
        BrowserAdapter* browser = env.browser;
        registry.add(ToolSpec{"browser_use_tool",
                              "Navigate web pages dynamically and extract their text.",
                              {ParamSpec{"instruction", "string", true}},
                              "string"},
                     [browser](const nlohmann::json& args, ToolRunState&) {
                       return ToolResult::success(
                           browser->browse(args.at("instruction").get<std::string>()));
                     });
      }
    }
  }

  return registry;
}

}  // namespace ctxforge
