// SPDX-License-Identifier: Apache-2.0
// Test-only reference implementations, kept independent of the library code
// paths they check. Everything here is written in the most literal way
// possible: explicit maps, quadratic scans, no shared helpers with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// --- UTF-8 code points, spelled out byte by byte -------------------------

inline std::vector<std::string> codepoints(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    std::size_t actual = 1;
    while (actual < len && i + actual < text.size() &&
           (static_cast<unsigned char>(text[i + actual]) & 0xC0) == 0x80) {
      ++actual;
    }
    out.push_back(text.substr(i, actual));
    i += actual;
  }
  return out;
}

inline std::size_t count_codepoints(const std::string& text) { return codepoints(text).size(); }

// --- ChrF++ by brute-force n-gram counting -------------------------------
// Convention under test: character n-grams n=1..6 over the code points of
// the whitespace-stripped string, word n-grams n=1..2 over whitespace
// tokens, clipped matches, per-order precision/recall averaged over orders
// where either side has n-grams, F-score with beta=2, scaled to [0,100].

inline std::vector<std::string> strip_whitespace_chars(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& cp : codepoints(text)) {
    if (cp == " " || cp == "\t" || cp == "\n" || cp == "\r" || cp == "\f" || cp == "\v") continue;
    out.push_back(cp);
  }
  return out;
}

inline std::vector<std::string> whitespace_words(const std::string& text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!current.empty()) {
        words.push_back(current);
        current.clear();
      }
    } else {
      current += c;
    }
  }
  if (!current.empty()) words.push_back(current);
  return words;
}

inline std::map<std::string, long> ngram_counts(const std::vector<std::string>& units,
                                                std::size_t n) {
  std::map<std::string, long> counts;
  if (units.size() < n) return counts;
  for (std::size_t i = 0; i + n <= units.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) key += units[i + j] + "\x1f";
    counts[key] += 1;
  }
  return counts;
}

inline double chrf_pp_oracle(const std::string& hypothesis, const std::string& reference,
                             std::size_t char_order = 6, std::size_t word_order = 2,
                             double beta = 2.0) {
  std::vector<std::string> hyp_chars = strip_whitespace_chars(hypothesis);
  std::vector<std::string> ref_chars = strip_whitespace_chars(reference);
  std::vector<std::string> hyp_words = whitespace_words(hypothesis);
  std::vector<std::string> ref_words = whitespace_words(reference);

  double precision_sum = 0, recall_sum = 0;
  std::size_t effective_orders = 0;

  auto accumulate = [&](const std::vector<std::string>& hyp_units,
                        const std::vector<std::string>& ref_units, std::size_t max_order) {
    for (std::size_t n = 1; n <= max_order; ++n) {
      std::map<std::string, long> hyp_counts = ngram_counts(hyp_units, n);
      std::map<std::string, long> ref_counts = ngram_counts(ref_units, n);
      long hyp_total = 0, ref_total = 0, matches = 0;
      for (const auto& [key, count] : hyp_counts) hyp_total += count;
      for (const auto& [key, count] : ref_counts) ref_total += count;
      for (const auto& [key, count] : hyp_counts) {
        auto it = ref_counts.find(key);
        if (it != ref_counts.end()) matches += std::min(count, it->second);
      }
      if (hyp_total == 0 && ref_total == 0) continue;
      ++effective_orders;
      precision_sum += hyp_total > 0 ? static_cast<double>(matches) / hyp_total : 0.0;
      recall_sum += ref_total > 0 ? static_cast<double>(matches) / ref_total : 0.0;
    }
  };

  accumulate(hyp_chars, ref_chars, char_order);
  accumulate(hyp_words, ref_words, word_order);

  if (effective_orders == 0) return 0.0;
  double precision = precision_sum / static_cast<double>(effective_orders);
  double recall = recall_sum / static_cast<double>(effective_orders);
  double denom = beta * beta * precision + recall;
  if (denom <= 0) return 0.0;
  return 100.0 * (1.0 + beta * beta) * precision * recall / denom;
}

// --- Brute-force retrieval rankings --------------------------------------

inline double jaccard_oracle(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::vector<std::string> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
  if (uni.empty()) return 0.0;
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

inline double dot_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

inline double norm_oracle(const std::vector<double>& a) {
  return std::sqrt(dot_oracle(a, a));
}

// Rank (score, position) pairs exactly the way the spec's tie rule reads:
// higher score first, earlier position wins ties; returns positions.
inline std::vector<std::size_t> rank_positions_oracle(const std::vector<double>& scores,
                                                      std::size_t k, bool drop_zero) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<std::size_t> out;
  for (std::size_t idx : order) {
    if (out.size() >= k) break;
    if (drop_zero && scores[idx] <= 0) continue;
    out.push_back(idx);
  }
  return out;
}

}  // namespace oracle
