#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patkg/pos_tagging.hpp"

namespace patkg {

// Characters rewritten to spaces during cleaning and term normalization.
inline constexpr std::string_view kPunctuationChars = ".,;:()/\\-\"'";

struct CleaningConfig {
  std::vector<std::string> boilerplate_phrases;  // removed case-insensitively
  std::vector<std::string> noise_tokens;
  std::set<std::string> stop_words;
  bool drop_digit_tokens = true;

  static CleaningConfig standard();

  // Parses {"boilerplate_phrases": [...], "noise_tokens": [...],
  // "stop_words": [...], "drop_digit_tokens": bool}; missing keys keep the
  // shipped defaults. Validates against the lexicon.
  static CleaningConfig from_json(const std::string& text,
                                  const HierarchyLexicon& lexicon);

  // Throws std::invalid_argument if the stoplist intersects the hierarchy
  // lexicon. Relationship verbs must survive cleaning.
  void validate(const HierarchyLexicon& lexicon) const;
};

// The fixed cleaning sequence for one raw claim: strip newline artifacts,
// delete boilerplate phrases, lowercase, rewrite punctuation to spaces, drop
// digit-bearing tokens, drop noise and stop words, collapse whitespace.
// Idempotent; may return an empty string.
std::string clean_text(std::string_view raw,
                       const CleaningConfig& config = CleaningConfig::standard());

// Keeps only tokens in the working tag set (drops OTHER); relative order and
// original positions are preserved, so the result is a subsequence.
std::vector<TaggedToken> filter_tags(const std::vector<TaggedToken>& tagged);

}  // namespace patkg
