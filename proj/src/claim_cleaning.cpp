#include "patkg/claim_cleaning.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "patkg/text_util.hpp"

namespace patkg {

namespace {

// Function words that carry no entity or relationship evidence. Verb forms
// and every hierarchy-lexicon word are deliberately absent: copulas like "is"
// become relation labels downstream. Determiners (a/an/the, each, every),
// the wh-words which/that, and the number words one..ten are markers and
// must survive.
const std::set<std::string>& standard_stop_words() {
  static const std::set<std::string> words = {
      "about",   "above",      "across",  "after",   "against", "along",
      "also",    "although",   "among",   "and",     "any",     "around",
      "as",      "at",         "because", "before",  "behind",  "below",
      "beneath", "beside",     "between", "beyond",  "both",    "but",
      "by",      "during",     "either",  "for",     "from",    "if",
      "in",      "inside",     "into",    "it",      "its",     "near",
      "neither", "nor",        "not",     "of",      "on",      "onto",
      "only",    "or",         "outside", "over",    "per",     "so",
      "such",    "than",       "then",    "thereby", "therefrom", "thereof",
      "therein", "thereto",    "these",   "they",    "this",    "those",
      "through", "throughout", "thus",    "to",      "toward",  "towards",
      "under",   "unless",     "until",   "unto",    "upon",    "via",
      "when",    "where",      "whether", "while",   "with",    "within",
      "without", "yet",
  };
  return words;
}

bool iequals_at(std::string_view text, std::size_t pos, std::string_view phrase) {
  if (pos + phrase.size() > text.size()) return false;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    char a = text[pos + i];
    char b = phrase[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
    if (a != b) return false;
  }
  return true;
}

// Case-insensitive phrase deletion; each hit becomes a single space.
std::string erase_phrase(const std::string& text, const std::string& phrase) {
  if (phrase.empty()) return text;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (iequals_at(text, i, phrase)) {
      out += ' ';
      i += phrase.size();
    } else {
      out += text[i++];
    }
  }
  return out;
}

}  // namespace

CleaningConfig CleaningConfig::standard() {
  CleaningConfig config;
  config.boilerplate_phrases = {"as claimed in claim"};
  config.noise_tokens = {"claim", "said", "wherein", "further"};
  config.stop_words = standard_stop_words();
  config.drop_digit_tokens = true;
  return config;
}

CleaningConfig CleaningConfig::from_json(const std::string& text,
                                         const HierarchyLexicon& lexicon) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("cleaning config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("cleaning config: top level must be an object");
  }
  CleaningConfig config = standard();
  if (doc.contains("boilerplate_phrases")) {
    config.boilerplate_phrases =
        doc.at("boilerplate_phrases").get<std::vector<std::string>>();
  }
  if (doc.contains("noise_tokens")) {
    config.noise_tokens = doc.at("noise_tokens").get<std::vector<std::string>>();
  }
  if (doc.contains("stop_words")) {
    auto list = doc.at("stop_words").get<std::vector<std::string>>();
    config.stop_words = std::set<std::string>(list.begin(), list.end());
  }
  if (doc.contains("drop_digit_tokens")) {
    config.drop_digit_tokens = doc.at("drop_digit_tokens").get<bool>();
  }
  config.validate(lexicon);
  return config;
}

void CleaningConfig::validate(const HierarchyLexicon& lexicon) const {
  for (const std::string& word : lexicon.words()) {
    if (stop_words.count(word) > 0) {
      throw std::invalid_argument(
          "cleaning config: stop word '" + word +
          "' collides with the hierarchy lexicon");
    }
  }
}

std::string clean_text(std::string_view raw, const CleaningConfig& config) {
  std::string text(raw);

  // Literal "\n" sequences left over from markup, plus real control chars.
  std::string no_newlines;
  no_newlines.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == 'n') {
      no_newlines += ' ';
      ++i;
    } else if (text[i] == '\n' || text[i] == '\r' || text[i] == '\t') {
      no_newlines += ' ';
    } else {
      no_newlines += text[i];
    }
  }
  text = std::move(no_newlines);

  for (const std::string& phrase : config.boilerplate_phrases) {
    text = erase_phrase(text, phrase);
  }

  text = ascii_lower(text);

  for (char& c : text) {
    if (kPunctuationChars.find(c) != std::string_view::npos) c = ' ';
  }

  std::vector<std::string> kept;
  for (std::string& token : split_whitespace(text)) {
    if (config.drop_digit_tokens && contains_digit(token)) continue;
    if (std::find(config.noise_tokens.begin(), config.noise_tokens.end(),
                  token) != config.noise_tokens.end()) {
      continue;
    }
    if (config.stop_words.count(token) > 0) continue;
    kept.push_back(std::move(token));
  }
  return join(kept, " ");
}

std::vector<TaggedToken> filter_tags(const std::vector<TaggedToken>& tagged) {
  std::vector<TaggedToken> kept;
  kept.reserve(tagged.size());
  for (const TaggedToken& token : tagged) {
    if (token.tag != Tag::OTHER) kept.push_back(token);
  }
  return kept;
}

}  // namespace patkg
