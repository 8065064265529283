// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ctxforge/resource.hpp"

namespace ctxforge {

/// Ordered, duplicate-free set of resources. Identity is the content hash of
/// the canonical serialization, so reordering or editing any hashed field
/// yields a different snapshot id.
struct ContextSnapshot {
  std::vector<Resource> resources;

  const Resource* find(const std::string& id) const;
  Resource* find(const std::string& id);
  std::size_t index_of(const std::string& id) const;  // throws if absent
  bool contains(const std::string& id) const;

  /// Canonical serialization: resource list in order, each with sorted field
  /// keys; excludes derived fields (length) and transient ones (embedding).
  std::string canonical_text() const;

  /// snapshot_id: SHA-256 of canonical_text().
  std::string hash() const;

  /// Full document form used by export/import (adds length per resource).
  std::string export_text() const;
  static ContextSnapshot import_text(const std::string& text);
};

}  // namespace ctxforge
