// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/embedding.hpp"

#include <cmath>

namespace ctxforge {

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw CtxError("embedding dimension must be positive");
}

std::string HashingEmbeddingProvider::name() const {
  return "feature-hashing-" + std::to_string(dim_) + "-" + std::to_string(seed_);
}

EmbeddingVector HashingEmbeddingProvider::embed(const std::string& text) const {
  if (text.empty()) throw CtxError("cannot embed empty text");
  EmbeddingVector v;
  v.values.assign(dim_, 0.0);
  for (const auto& token : tokenize(text)) {
    std::uint64_t h = fnv1a64(token, seed_ ^ 0x9e3779b97f4a7c15ULL);
    std::size_t idx = static_cast<std::size_t>(h % dim_);
    double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
    v.values[idx] += sign;
  }
  double norm = 0;
  for (double x : v.values) norm += x * x;
  if (norm == 0) {
    v.values[0] = 1.0;  // tokenless text (punctuation only) gets a fixed unit vector
    return v;
  }
  norm = std::sqrt(norm);
  for (double& x : v.values) x /= norm;
  return v;
}

}  // namespace ctxforge
