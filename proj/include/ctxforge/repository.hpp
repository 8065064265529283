// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ctxforge/snapshot.hpp"

namespace ctxforge {

class EmbeddingProvider;

struct Commit {
  std::string id;
  std::vector<std::string> parents;  // empty for root, 2 for merges
  std::string snapshot_id;
  std::string message;
  std::uint64_t timestamp = 0;  // logical sequence number, deterministic
};

struct Branch {
  std::string name;
  std::string head;
  std::string description;
  std::map<std::string, std::string> metadata;
};

enum class DetailLevel { Summary, Preview, Detail };

DetailLevel detail_level_from_string(const std::string& label);

/// Version-controlled repository of context states. The working snapshot is
/// the mutable state all edit operations act on; commits freeze it into the
/// content-addressed snapshot store. Writes are single-writer by contract;
/// committed snapshots are immutable and safe to read concurrently.
class ContextRepository {
 public:
  explicit ContextRepository(std::string id = "ctx-0");

  const std::string& id() const { return id_; }

  // --- resource operations (reject in detached state) ---
  std::string add_resource(const std::string& content, const std::string& summary, Source source);
  void update_resource(const std::string& resource_id, const std::string& field,
                       const std::string& new_value);
  void remove_resource(const std::string& resource_id);
  void swap_resources(const std::string& id_a, const std::string& id_b);
  std::string merge_resources(const std::string& id_a, const std::string& id_b,
                              const std::string& merged_summary);
  const Resource& get_resource(const std::string& resource_id) const;

  const ContextSnapshot& working() const { return working_; }
  std::string working_hash() const { return working_.hash(); }
  std::size_t resource_count() const { return working_.resources.size(); }

  /// Human/agent-readable listing of the working snapshot. limit == 0 lists
  /// everything. Preview shows the first preview_chars() code points of each
  /// content with a truncation marker.
  std::string render_listing(DetailLevel level, std::size_t limit = 0) const;

  std::size_t preview_chars() const { return preview_chars_; }
  void set_preview_chars(std::size_t chars) { preview_chars_ = chars; }

  // --- version control ---
  std::string commit(const std::string& message);
  void create_branch(const std::string& name, const std::string& description);
  void checkout(const std::string& target);  // branch name or commit id
  std::string merge_branch(const std::string& source, const std::string& target);
  void update_branch_info(const std::string& name, const std::string& key,
                          const std::string& value);
  std::vector<Branch> list_branches() const;

  bool detached() const { return detached_; }
  const std::string& active_branch() const { return active_branch_; }
  bool has_branch(const std::string& name) const { return branches_.count(name) > 0; }
  const Branch& branch(const std::string& name) const;
  bool has_commit(const std::string& id) const { return commits_.count(id) > 0; }
  const Commit& commit_info(const std::string& id) const;
  const ContextSnapshot& snapshot_of(const std::string& commit_id) const;
  std::string head_of(const std::string& branch_name) const;
  /// Commits reachable from the branch head via first parents, newest first.
  std::vector<Commit> log(const std::string& branch_name) const;

  // --- embeddings (cache over working resources; write op by contract) ---
  void flush_embeddings(const EmbeddingProvider& provider);

  // --- persistence ---
  void save(const std::filesystem::path& dir) const;
  static ContextRepository load(const std::filesystem::path& dir);

  void set_embedding_meta(const std::string& provider_name, std::size_t dim);
  const std::string& embedding_provider_name() const { return embedding_provider_name_; }
  std::size_t embedding_dim() const { return embedding_dim_; }

 private:
  void require_writable() const;
  Resource& writable_resource(const std::string& resource_id);
  const ContextSnapshot& stored_snapshot(const std::string& snapshot_id) const;
  std::string store_snapshot(const ContextSnapshot& snapshot);
  void assert_acyclic() const;
  std::string next_resource_id();

  std::string id_;
  ContextSnapshot working_;
  std::map<std::string, Commit> commits_;
  std::map<std::string, ContextSnapshot> snapshots_;  // content-addressed
  std::map<std::string, Branch> branches_;
  std::string active_branch_ = "main";
  bool detached_ = false;
  std::string detached_commit_;
  std::uint64_t next_resource_ = 0;
  std::uint64_t commit_seq_ = 0;
  std::size_t preview_chars_ = 200;
  std::string embedding_provider_name_;
  std::size_t embedding_dim_ = 0;
};

/// Session registry: several independent repositories, one active at a time.
class ContextStore {
 public:
  /// Creates a fresh empty repository and makes it active.
  std::string create_context();
  void set_active(const std::string& context_id);
  ContextRepository& active();
  const ContextRepository& active() const;
  const std::string& active_id() const;
  ContextRepository& get(const std::string& context_id);
  bool has(const std::string& context_id) const { return contexts_.count(context_id) > 0; }
  std::vector<std::string> context_ids() const;
  /// Registers an externally constructed repository (e.g. loaded from disk).
  void adopt(std::unique_ptr<ContextRepository> repo, bool make_active = true);

 private:
  std::map<std::string, std::unique_ptr<ContextRepository>> contexts_;
  std::string active_id_;
  std::uint64_t next_ = 0;
};

}  // namespace ctxforge
