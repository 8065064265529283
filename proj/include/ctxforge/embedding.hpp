// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "ctxforge/resource.hpp"

namespace ctxforge {

/// Contract for text-embedding backends: fixed dimension per provider
/// session, deterministic output for equal inputs. The provider name and
/// dimension are recorded in repository metadata so mixed-provider contexts
/// are rejected on load.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  /// Embeds nonempty text; throws CtxError on empty input.
  virtual EmbeddingVector embed(const std::string& text) const = 0;
};

/// Offline provider: seeded feature hashing of tokens into a fixed-dimension
/// vector with L2 normalization. Token overlap between texts translates into
/// cosine similarity, which is all the ranking paths need.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dim = 64, std::uint64_t seed = 0x5eed);

  std::string name() const override;
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const std::string& text) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace ctxforge
