// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/util.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ctxforge {

namespace {

bool is_utf8_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

std::size_t codepoint_bytes(std::string_view text, std::size_t pos) {
  unsigned char c = static_cast<unsigned char>(text[pos]);
  std::size_t len = 1;
  if ((c & 0xE0) == 0xC0) len = 2;
  else if ((c & 0xF0) == 0xE0) len = 3;
  else if ((c & 0xF8) == 0xF0) len = 4;
  // Clamp to the actual continuation run so malformed input stays total.
  std::size_t avail = 1;
  while (avail < len && pos + avail < text.size() &&
         is_utf8_continuation(static_cast<unsigned char>(text[pos + avail]))) {
    ++avail;
  }
  return avail;
}

bool is_token_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

std::size_t utf8_length(std::string_view text) {
  std::size_t count = 0;
  for (std::size_t pos = 0; pos < text.size(); pos += codepoint_bytes(text, pos)) ++count;
  return count;
}

std::string utf8_prefix(std::string_view text, std::size_t n) {
  std::size_t pos = 0, count = 0;
  while (pos < text.size() && count < n) {
    pos += codepoint_bytes(text, pos);
    ++count;
  }
  return std::string(text.substr(0, pos));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::set<std::string> extract_keywords(std::string_view content, std::string_view summary) {
  std::set<std::string> keywords;
  std::set<std::string> short_tokens;
  for (std::string_view part : {content, summary}) {
    for (auto& token : tokenize(part)) {
      if (utf8_length(token) >= 3) {
        keywords.insert(std::move(token));
      } else {
        short_tokens.insert(std::move(token));
      }
    }
  }
  if (keywords.empty()) return short_tokens;
  return keywords;
}

std::set<std::string> parse_keyword_list(std::string_view text) {
  std::set<std::string> keywords;
  for (auto& token : tokenize(text)) keywords.insert(std::move(token));
  return keywords;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw CtxError("unterminated placeholder in template");
    std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) throw CtxError("missing template placeholder value: " + key);
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::string truncate_with_marker(std::string_view text, std::size_t cap, std::string_view marker) {
  if (utf8_length(text) <= cap) return std::string(text);
  std::size_t marker_len = utf8_length(marker);
  std::size_t keep = cap > marker_len ? cap - marker_len : 0;
  return utf8_prefix(text, keep) + std::string(marker);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CtxError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CtxError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

}  // namespace ctxforge
