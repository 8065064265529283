// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/repository.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ctxforge/embedding.hpp"

namespace ctxforge {

namespace fs = std::filesystem;

DetailLevel detail_level_from_string(const std::string& label) {
  if (label == "summary") return DetailLevel::Summary;
  if (label == "preview") return DetailLevel::Preview;
  if (label == "detail") return DetailLevel::Detail;
  throw CtxError("unknown detail level: " + label + " (expected summary|preview|detail)");
}

ContextRepository::ContextRepository(std::string id) : id_(std::move(id)) {
  // Every repository starts with a root commit of the empty snapshot so
  // branch operations are defined from birth.
  std::string snap_id = store_snapshot(working_);
  Commit root;
  root.parents = {};
  root.snapshot_id = snap_id;
  root.message = "init";
  root.timestamp = commit_seq_++;
  root.id = sha256_hex("commit\x1f" + snap_id + "\x1finit\x1f0");
  commits_[root.id] = root;
  branches_["main"] = Branch{"main", root.id, "initial branch", {}};
  active_branch_ = "main";
}

void ContextRepository::require_writable() const {
  if (detached_)
    throw CtxError("detached checkout of commit " + detached_commit_ +
                   " is read-only; checkout a branch to edit");
}

Resource& ContextRepository::writable_resource(const std::string& resource_id) {
  Resource* r = working_.find(resource_id);
  if (!r) throw CtxError("no such resource: " + resource_id);
  return *r;
}

std::string ContextRepository::next_resource_id() {
  return "r" + std::to_string(next_resource_++);
}

std::string ContextRepository::add_resource(const std::string& content, const std::string& summary,
                                            Source source) {
  require_writable();
  if (content.empty()) throw CtxError("empty content: a resource must carry text");
  std::string id = next_resource_id();
  working_.resources.push_back(Resource::make(id, content, summary, source));
  return id;
}

void ContextRepository::update_resource(const std::string& resource_id, const std::string& field,
                                        const std::string& new_value) {
  require_writable();
  Resource& r = writable_resource(resource_id);
  if (field == "content") {
    if (new_value.empty()) throw CtxError("empty content: a resource must carry text");
    r.set_content(new_value);
  } else if (field == "summary") {
    r.set_summary(new_value);
  } else if (field == "keywords") {
    r.keywords = parse_keyword_list(new_value);
  } else if (field == "resource_id" || field == "id") {
    throw CtxError("field resource_id is immutable");
  } else {
    throw CtxError("unknown resource field: " + field + " (expected content|summary|keywords)");
  }
}

void ContextRepository::remove_resource(const std::string& resource_id) {
  require_writable();
  std::size_t idx = working_.index_of(resource_id);
  working_.resources.erase(working_.resources.begin() + static_cast<std::ptrdiff_t>(idx));
}

void ContextRepository::swap_resources(const std::string& id_a, const std::string& id_b) {
  require_writable();
  std::size_t ia = working_.index_of(id_a);
  std::size_t ib = working_.index_of(id_b);
  if (ia != ib) std::swap(working_.resources[ia], working_.resources[ib]);
}

std::string ContextRepository::merge_resources(const std::string& id_a, const std::string& id_b,
                                               const std::string& merged_summary) {
  require_writable();
  if (id_a == id_b) throw CtxError("cannot merge a resource with itself: " + id_a);
  std::size_t ia = working_.index_of(id_a);
  std::size_t ib = working_.index_of(id_b);
  const Resource& a = working_.resources[ia];
  const Resource& b = working_.resources[ib];
  std::string merged_content = a.content + "\n---\n" + b.content;
  Resource merged = Resource::make(next_resource_id(), merged_content, merged_summary, a.source);
  working_.resources[ia] = std::move(merged);
  std::string new_id = working_.resources[ia].id;
  // ib is still valid: only position ia was replaced.
  working_.resources.erase(working_.resources.begin() + static_cast<std::ptrdiff_t>(ib));
  return new_id;
}

const Resource& ContextRepository::get_resource(const std::string& resource_id) const {
  const Resource* r = working_.find(resource_id);
  if (!r) throw CtxError("no such resource: " + resource_id);
  return *r;
}

std::string ContextRepository::render_listing(DetailLevel level, std::size_t limit) const {
  if (working_.resources.empty()) return "(the context is currently empty)";
  std::ostringstream out;
  std::size_t shown = 0;
  for (const auto& r : working_.resources) {
    if (limit > 0 && shown >= limit) break;
    out << "[" << r.id << "] " << r.summary << " (length=" << r.length
        << ", source=" << to_string(r.source) << ")";
    if (level == DetailLevel::Preview) {
      out << "\n    " << truncate_with_marker(r.content, preview_chars_);
    } else if (level == DetailLevel::Detail) {
      out << "\n    " << r.content;
    }
    out << "\n";
    ++shown;
  }
  if (limit > 0 && working_.resources.size() > limit)
    out << "(" << working_.resources.size() - limit << " more resources not shown)\n";
  std::string text = out.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

std::string ContextRepository::store_snapshot(const ContextSnapshot& snapshot) {
  // Stored copies drop transient embeddings; they are a working-set cache.
  ContextSnapshot clean = snapshot;
  for (auto& r : clean.resources) r.embedding.reset();
  std::string snap_id = clean.hash();
  snapshots_.emplace(snap_id, std::move(clean));
  return snap_id;
}

const ContextSnapshot& ContextRepository::stored_snapshot(const std::string& snapshot_id) const {
  auto it = snapshots_.find(snapshot_id);
  if (it == snapshots_.end()) throw CtxError("no such snapshot: " + snapshot_id);
  return it->second;
}

std::string ContextRepository::commit(const std::string& message) {
  require_writable();
  Branch& b = branches_.at(active_branch_);
  std::string snap_id = store_snapshot(working_);
  Commit c;
  c.parents = {b.head};
  c.snapshot_id = snap_id;
  c.message = message;
  c.timestamp = commit_seq_++;
  c.id = sha256_hex("commit\x1f" + b.head + "\x1f" + snap_id + "\x1f" + message + "\x1f" +
                    std::to_string(c.timestamp));
  commits_[c.id] = c;
  b.head = c.id;
  return c.id;
}

void ContextRepository::create_branch(const std::string& name, const std::string& description) {
  if (branches_.count(name)) throw CtxError("branch already exists: " + name);
  if (name.empty()) throw CtxError("branch name must be non-empty");
  std::string head = detached_ ? detached_commit_ : branches_.at(active_branch_).head;
  branches_[name] = Branch{name, head, description, {}};
}

void ContextRepository::checkout(const std::string& target) {
  auto bit = branches_.find(target);
  if (bit != branches_.end()) {
    active_branch_ = target;
    detached_ = false;
    detached_commit_.clear();
    working_ = stored_snapshot(commits_.at(bit->second.head).snapshot_id);
    return;
  }
  auto cit = commits_.find(target);
  if (cit != commits_.end()) {
    detached_ = true;
    detached_commit_ = target;
    working_ = stored_snapshot(cit->second.snapshot_id);
    return;
  }
  throw CtxError("unknown checkout target: " + target);
}

std::string ContextRepository::merge_branch(const std::string& source, const std::string& target) {
  if (source == target) throw CtxError("cannot merge a branch into itself: " + source);
  auto sit = branches_.find(source);
  if (sit == branches_.end()) throw CtxError("unknown branch: " + source);
  auto tit = branches_.find(target);
  if (tit == branches_.end()) throw CtxError("unknown branch: " + target);

  const ContextSnapshot& src = stored_snapshot(commits_.at(sit->second.head).snapshot_id);
  const ContextSnapshot& tgt = stored_snapshot(commits_.at(tit->second.head).snapshot_id);

  // Union: target order first, then source-only resources in source order.
  // On id collision with differing content the target version wins.
  ContextSnapshot merged = tgt;
  std::vector<std::string> conflicts;
  for (const auto& r : src.resources) {
    const Resource* existing = merged.find(r.id);
    if (!existing) {
      merged.resources.push_back(r);
    } else if (existing->content != r.content || existing->summary != r.summary) {
      conflicts.push_back(r.id);
    }
  }

  std::string message = "merge " + source + " into " + target;
  if (!conflicts.empty()) {
    message += " (conflicts, target version kept:";
    for (const auto& id : conflicts) message += " " + id;
    message += ")";
  }

  std::string snap_id = store_snapshot(merged);
  Commit c;
  c.parents = {tit->second.head, sit->second.head};
  c.snapshot_id = snap_id;
  c.message = message;
  c.timestamp = commit_seq_++;
  c.id = sha256_hex("merge\x1f" + c.parents[0] + "\x1f" + c.parents[1] + "\x1f" + snap_id + "\x1f" +
                    message + "\x1f" + std::to_string(c.timestamp));
  commits_[c.id] = c;
  tit->second.head = c.id;
  assert_acyclic();

  if (!detached_ && active_branch_ == target) working_ = merged;
  return c.id;
}

void ContextRepository::assert_acyclic() const {
  // Kahn's algorithm over the parent graph; leftovers mean a cycle.
  std::map<std::string, std::size_t> indegree;
  for (const auto& [id, c] : commits_) indegree.emplace(id, 0);
  for (const auto& [id, c] : commits_)
    for (const auto& p : c.parents) indegree[id]++;
  std::vector<std::string> frontier;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) frontier.push_back(id);
  std::size_t visited = 0;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [id, c] : commits_)
    for (const auto& p : c.parents) children[p].push_back(id);
  while (!frontier.empty()) {
    std::string id = frontier.back();
    frontier.pop_back();
    ++visited;
    for (const auto& child : children[id])
      if (--indegree[child] == 0) frontier.push_back(child);
  }
  if (visited != commits_.size()) throw CtxError("commit graph contains a cycle");
}

void ContextRepository::update_branch_info(const std::string& name, const std::string& key,
                                           const std::string& value) {
  auto it = branches_.find(name);
  if (it == branches_.end()) throw CtxError("unknown branch: " + name);
  it->second.metadata[key] = value;
}

std::vector<Branch> ContextRepository::list_branches() const {
  std::vector<Branch> out;
  out.reserve(branches_.size());
  for (const auto& [name, b] : branches_) out.push_back(b);
  return out;
}

const Branch& ContextRepository::branch(const std::string& name) const {
  auto it = branches_.find(name);
  if (it == branches_.end()) throw CtxError("unknown branch: " + name);
  return it->second;
}

const Commit& ContextRepository::commit_info(const std::string& id) const {
  auto it = commits_.find(id);
  if (it == commits_.end()) throw CtxError("no such commit: " + id);
  return it->second;
}

const ContextSnapshot& ContextRepository::snapshot_of(const std::string& commit_id) const {
  return stored_snapshot(commit_info(commit_id).snapshot_id);
}

std::string ContextRepository::head_of(const std::string& branch_name) const {
  return branch(branch_name).head;
}

std::vector<Commit> ContextRepository::log(const std::string& branch_name) const {
  std::vector<Commit> out;
  std::string cursor = branch(branch_name).head;
  while (!cursor.empty()) {
    const Commit& c = commit_info(cursor);
    out.push_back(c);
    cursor = c.parents.empty() ? "" : c.parents.front();
  }
  return out;
}

void ContextRepository::flush_embeddings(const EmbeddingProvider& provider) {
  require_writable();
  set_embedding_meta(provider.name(), provider.dim());
  for (auto& r : working_.resources) {
    if (!r.embedding.has_value()) r.embedding = provider.embed(r.content);
  }
}

void ContextRepository::set_embedding_meta(const std::string& provider_name, std::size_t dim) {
  if (!embedding_provider_name_.empty() &&
      (embedding_provider_name_ != provider_name || embedding_dim_ != dim)) {
    throw CtxError("embedding provider mismatch: repository was embedded with " +
                   embedding_provider_name_ + "/" + std::to_string(embedding_dim_) +
                   ", got " + provider_name + "/" + std::to_string(dim));
  }
  embedding_provider_name_ = provider_name;
  embedding_dim_ = dim;
}

void ContextRepository::save(const fs::path& dir) const {
  fs::create_directories(dir / "snapshots");

  // Append-only commit log, one record per line in timestamp order.
  std::vector<const Commit*> ordered;
  for (const auto& [id, c] : commits_) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const Commit* a, const Commit* b) { return a->timestamp < b->timestamp; });
  std::ostringstream log_text;
  for (const Commit* c : ordered) {
    nlohmann::json rec;
    rec["id"] = c->id;
    rec["parents"] = c->parents;
    rec["snapshot_id"] = c->snapshot_id;
    rec["message"] = c->message;
    rec["timestamp"] = c->timestamp;
    log_text << rec.dump() << "\n";
  }
  write_text_file((dir / "commits.log").string(), log_text.str());

  for (const auto& [snap_id, snap] : snapshots_)
    write_text_file((dir / "snapshots" / (snap_id + ".json")).string(), snap.canonical_text());

  nlohmann::json branches = nlohmann::json::object();
  for (const auto& [name, b] : branches_) {
    branches[name] = {{"head", b.head},
                      {"description", b.description},
                      {"metadata", b.metadata}};
  }
  nlohmann::json meta;
  meta["id"] = id_;
  meta["branches"] = branches;
  meta["active_branch"] = active_branch_;
  meta["next_resource"] = next_resource_;
  meta["commit_seq"] = commit_seq_;
  meta["preview_chars"] = preview_chars_;
  if (!embedding_provider_name_.empty()) {
    meta["embedding_provider"] = embedding_provider_name_;
    meta["embedding_dim"] = embedding_dim_;
  }
  write_text_file((dir / "meta.json").string(), meta.dump(2) + "\n");
}

ContextRepository ContextRepository::load(const fs::path& dir) {
  if (!fs::exists(dir / "meta.json")) throw CtxError("not a repository: " + dir.string());
  nlohmann::json meta = nlohmann::json::parse(read_text_file((dir / "meta.json").string()));

  ContextRepository repo(meta.at("id").get<std::string>());
  repo.commits_.clear();
  repo.branches_.clear();
  repo.snapshots_.clear();

  std::istringstream log_in(read_text_file((dir / "commits.log").string()));
  std::string line;
  while (std::getline(log_in, line)) {
    if (trim(line).empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    Commit c;
    c.id = rec.at("id").get<std::string>();
    c.parents = rec.at("parents").get<std::vector<std::string>>();
    c.snapshot_id = rec.at("snapshot_id").get<std::string>();
    c.message = rec.at("message").get<std::string>();
    c.timestamp = rec.at("timestamp").get<std::uint64_t>();
    repo.commits_[c.id] = c;
  }

  for (const auto& entry : fs::directory_iterator(dir / "snapshots")) {
    std::string text = read_text_file(entry.path().string());
    nlohmann::json j = nlohmann::json::parse(text);
    ContextSnapshot snap;
    for (const auto& rec : j.at("resources")) {
      Resource r;
      r.id = rec.at("id").get<std::string>();
      r.summary = rec.at("summary").get<std::string>();
      r.content = rec.at("content").get<std::string>();
      r.source = source_from_string(rec.at("source").get<std::string>());
      r.length = utf8_length(r.content);
      for (const auto& kw : rec.at("keywords")) r.keywords.insert(kw.get<std::string>());
      snap.resources.push_back(std::move(r));
    }
    std::string snap_id = entry.path().stem().string();
    if (snap.hash() != snap_id)
      throw CtxError("snapshot file corrupted: " + entry.path().string());
    repo.snapshots_[snap_id] = std::move(snap);
  }

  for (const auto& [name, b] : meta.at("branches").items()) {
    Branch branch;
    branch.name = name;
    branch.head = b.at("head").get<std::string>();
    branch.description = b.at("description").get<std::string>();
    branch.metadata = b.at("metadata").get<std::map<std::string, std::string>>();
    repo.branches_[name] = std::move(branch);
  }
  repo.active_branch_ = meta.at("active_branch").get<std::string>();
  repo.next_resource_ = meta.at("next_resource").get<std::uint64_t>();
  repo.commit_seq_ = meta.at("commit_seq").get<std::uint64_t>();
  repo.preview_chars_ = meta.value("preview_chars", std::size_t{200});
  repo.embedding_provider_name_ = meta.value("embedding_provider", "");
  repo.embedding_dim_ = meta.value("embedding_dim", std::size_t{0});
  repo.detached_ = false;
  repo.working_ =
      repo.stored_snapshot(repo.commits_.at(repo.branches_.at(repo.active_branch_).head).snapshot_id);
  repo.assert_acyclic();
  return repo;
}

// --- ContextStore ---

std::string ContextStore::create_context() {
  std::string id = "ctx-" + std::to_string(next_++);
  contexts_[id] = std::make_unique<ContextRepository>(id);
  active_id_ = id;
  return id;
}

void ContextStore::set_active(const std::string& context_id) {
  if (!contexts_.count(context_id)) throw CtxError("unknown context id: " + context_id);
  active_id_ = context_id;
}

ContextRepository& ContextStore::active() {
  if (active_id_.empty()) throw CtxError("no active context; call create_context first");
  return *contexts_.at(active_id_);
}

const ContextRepository& ContextStore::active() const {
  if (active_id_.empty()) throw CtxError("no active context; call create_context first");
  return *contexts_.at(active_id_);
}

const std::string& ContextStore::active_id() const { return active_id_; }

ContextRepository& ContextStore::get(const std::string& context_id) {
  auto it = contexts_.find(context_id);
  if (it == contexts_.end()) throw CtxError("unknown context id: " + context_id);
  return *it->second;
}

std::vector<std::string> ContextStore::context_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, repo] : contexts_) ids.push_back(id);
  return ids;
}

void ContextStore::adopt(std::unique_ptr<ContextRepository> repo, bool make_active) {
  std::string id = repo->id();
  if (contexts_.count(id)) throw CtxError("context id already registered: " + id);
  contexts_[id] = std::move(repo);
  if (make_active || active_id_.empty()) active_id_ = id;
}

}  // namespace ctxforge
