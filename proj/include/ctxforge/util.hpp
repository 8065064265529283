// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxforge {

/// Error type for all store/retrieval/agent failures that are surfaced
/// to callers (and converted to tool errors at the dispatch boundary).
struct CtxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number of Unicode code points in a UTF-8 string. Invalid bytes count
/// as one code point each, so the function is total.
std::size_t utf8_length(std::string_view text);

/// First `n` code points of `text` (whole string if shorter).
std::string utf8_prefix(std::string_view text, std::size_t n);

/// Lowercased tokens: maximal runs of [A-Za-z0-9] or non-ASCII bytes.
std::vector<std::string> tokenize(std::string_view text);

/// Keyword set for a resource: lowercase tokens of length >= 3 drawn from
/// content + summary, deduplicated. Falls back to shorter tokens when the
/// text has no token of length 3.
std::set<std::string> extract_keywords(std::string_view content, std::string_view summary);

/// Parse a user-supplied keyword list (whitespace/comma separated).
std::set<std::string> parse_keyword_list(std::string_view text);

/// SHA-256 of `data` as a lowercase hex string.
std::string sha256_hex(std::string_view data);

/// FNV-1a 64-bit hash, seedable.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);

/// Replace every {{key}} in `tmpl` with values.at(key). Throws CtxError if a
/// placeholder has no value.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

/// Truncate to `cap` code points, appending `marker` when cut. The marker is
/// budgeted inside the cap so the result never exceeds it.
std::string truncate_with_marker(std::string_view text, std::size_t cap,
                                 std::string_view marker = "...[truncated]");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

}  // namespace ctxforge
