#include "patkg/pos_tagging.hpp"

#include <array>
#include <istream>
#include <map>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "patkg/text_util.hpp"

namespace patkg {

namespace {

constexpr std::array<std::pair<Tag, const char*>, 17> kTagNames = {{
    {Tag::NN, "NN"},
    {Tag::NNS, "NNS"},
    {Tag::NNP, "NNP"},
    {Tag::NNPS, "NNPS"},
    {Tag::DT, "DT"},
    {Tag::CD, "CD"},
    {Tag::JJ, "JJ"},
    {Tag::JJR, "JJR"},
    {Tag::JJS, "JJS"},
    {Tag::VB, "VB"},
    {Tag::VBD, "VBD"},
    {Tag::VBG, "VBG"},
    {Tag::VBN, "VBN"},
    {Tag::VBP, "VBP"},
    {Tag::VBZ, "VBZ"},
    {Tag::WDT, "WDT"},
    {Tag::OTHER, "OTHER"},
}};

const std::map<std::string, Tag, std::less<>>& tag_by_name() {
  static const std::map<std::string, Tag, std::less<>> index = [] {
    std::map<std::string, Tag, std::less<>> m;
    for (const auto& [tag, name] : kTagNames) m.emplace(name, tag);
    return m;
  }();
  return index;
}

const std::map<std::string, Tag, std::less<>>& closed_class_words() {
  static const std::map<std::string, Tag, std::less<>> words = {
      {"a", Tag::DT},      {"an", Tag::DT},     {"the", Tag::DT},
      {"each", Tag::DT},   {"every", Tag::DT},
      {"which", Tag::WDT}, {"that", Tag::WDT},
      {"one", Tag::CD},    {"two", Tag::CD},    {"three", Tag::CD},
      {"four", Tag::CD},   {"five", Tag::CD},   {"six", Tag::CD},
      {"seven", Tag::CD},  {"eight", Tag::CD},  {"nine", Tag::CD},
      {"ten", Tag::CD},
      {"is", Tag::VBZ},    {"are", Tag::VBP},   {"was", Tag::VBD},
      {"were", Tag::VBD},  {"be", Tag::VB},     {"been", Tag::VBN},
      {"being", Tag::VBG}, {"am", Tag::VBP},    {"have", Tag::VBP},
      {"had", Tag::VBD},
      // Modals fall outside the working tag set.
      {"can", Tag::OTHER}, {"could", Tag::OTHER}, {"may", Tag::OTHER},
      {"might", Tag::OTHER}, {"must", Tag::OTHER}, {"shall", Tag::OTHER},
      {"should", Tag::OTHER}, {"will", Tag::OTHER}, {"would", Tag::OTHER},
  };
  return words;
}

// Comparatives and superlatives that actually occur in claim language. The
// -er/-est suffix alone is useless here: lever, member, heater all end in -er.
const std::set<std::string>& adjectival_forms() {
  static const std::set<std::string> forms = {
      "greater",  "lesser",   "larger",   "smaller",  "higher",   "lower",
      "longer",   "shorter",  "wider",    "narrower", "thicker",  "thinner",
      "deeper",   "broader",  "bigger",   "closer",   "nearer",   "lighter",
      "heavier",  "stronger", "weaker",   "faster",   "slower",   "upper",
      "outer",    "inner",    "greatest", "largest",  "smallest", "highest",
      "lowest",   "longest",  "shortest", "widest",   "narrowest",
      "thickest", "thinnest", "deepest",  "broadest", "biggest",  "closest",
      "nearest",  "lightest", "heaviest", "strongest", "weakest", "fastest",
      "slowest",
  };
  return forms;
}

bool all_digits(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool ends_with(std::string_view token, std::string_view suffix) {
  return token.size() >= suffix.size() &&
         token.substr(token.size() - suffix.size()) == suffix;
}

enum class VerbSuffix { None, Ing, Ed, S };

VerbSuffix verb_suffix(std::string_view token) {
  if (ends_with(token, "ing") && token.size() >= 5) return VerbSuffix::Ing;
  if (ends_with(token, "ed") && token.size() >= 4) return VerbSuffix::Ed;
  if (ends_with(token, "s") && token.size() >= 4 && !ends_with(token, "ss") &&
      !ends_with(token, "us") && !ends_with(token, "is")) {
    return VerbSuffix::S;
  }
  return VerbSuffix::None;
}

Tag verb_tag_for(VerbSuffix suffix) {
  switch (suffix) {
    case VerbSuffix::Ing: return Tag::VBG;
    case VerbSuffix::Ed: return Tag::VBN;
    case VerbSuffix::S: return Tag::VBZ;
    case VerbSuffix::None: break;
  }
  return Tag::NN;
}

Tag noun_tag_for(VerbSuffix suffix) {
  return suffix == VerbSuffix::S ? Tag::NNS : Tag::NN;
}

}  // namespace

const char* tag_name(Tag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

std::optional<Tag> tag_from_name(std::string_view name) {
  auto it = tag_by_name().find(name);
  if (it == tag_by_name().end()) return std::nullopt;
  return it->second;
}

bool is_verb(Tag tag) {
  switch (tag) {
    case Tag::VB:
    case Tag::VBD:
    case Tag::VBG:
    case Tag::VBN:
    case Tag::VBP:
    case Tag::VBZ:
      return true;
    default:
      return false;
  }
}

bool is_noun_or_adjective(Tag tag) {
  switch (tag) {
    case Tag::NN:
    case Tag::NNS:
    case Tag::NNP:
    case Tag::NNPS:
    case Tag::JJ:
    case Tag::JJR:
    case Tag::JJS:
      return true;
    default:
      return false;
  }
}

HierarchyLexicon::HierarchyLexicon(std::set<std::string> words)
    : words_(std::move(words)) {}

const HierarchyLexicon& HierarchyLexicon::standard() {
  static const HierarchyLexicon lexicon(std::set<std::string>{
      "comprising", "comprises", "comprise", "comprised",
      "include", "including", "includes", "included",
      "consist", "consists", "consisted", "consisting",
      "has", "having"});
  return lexicon;
}

HierarchyLexicon HierarchyLexicon::with_extra(
    const std::vector<std::string>& words) const {
  std::set<std::string> merged(words_);
  for (const std::string& word : words) merged.insert(ascii_lower(word));
  return HierarchyLexicon(std::move(merged));
}

bool HierarchyLexicon::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

std::vector<std::string> tokenize(std::string_view cleaned) {
  return split_whitespace(cleaned);
}

Tagger::Tagger(HierarchyLexicon lexicon) : lexicon_(std::move(lexicon)) {}

std::vector<TaggedToken> Tagger::tag(const std::vector<std::string>& tokens) const {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    Tag tag;

    if (auto it = closed_class_words().find(token);
        it != closed_class_words().end()) {
      tag = it->second;
    } else if (lexicon_.contains(token)) {
      tag = Tag::VB;
    } else if (all_digits(token)) {
      tag = Tag::CD;
    } else if (adjectival_forms().count(token) > 0) {
      tag = ends_with(token, "est") ? Tag::JJS : Tag::JJR;
    } else {
      VerbSuffix suffix = verb_suffix(token);
      Tag prev = tagged.empty() ? Tag::OTHER : tagged.back().tag;
      if (suffix == VerbSuffix::None) {
        tag = Tag::NN;
      } else if (prev == Tag::DT || prev == Tag::CD) {
        // A determiner or count word anchors a noun phrase; the word right
        // after it cannot be the claim's verb.
        tag = noun_tag_for(suffix);
      } else if (prev == Tag::WDT) {
        // "that"/"which" re-introduce the previous entity; what follows is
        // the relative clause's verb.
        tag = verb_tag_for(suffix);
      } else if (i + 1 < tokens.size()) {
        // Claim verbs precede the next entity's marker: "comprises a",
        // "connected the". Suffix candidates elsewhere read as nouns
        // ("heating element", "curved lever").
        const std::string& next = tokens[i + 1];
        auto next_closed = closed_class_words().find(next);
        bool next_is_marker =
            (next_closed != closed_class_words().end() &&
             (next_closed->second == Tag::DT || next_closed->second == Tag::CD)) ||
            all_digits(next);
        tag = next_is_marker ? verb_tag_for(suffix) : noun_tag_for(suffix);
      } else {
        tag = noun_tag_for(suffix);
      }
    }

    tagged.push_back(TaggedToken{token, tag, static_cast<int>(i)});
  }
  return tagged;
}

std::vector<TaggedToken> apply_overrides(std::vector<TaggedToken> tagged,
                                         const HierarchyLexicon& lexicon) {
  for (TaggedToken& token : tagged) {
    if (lexicon.contains(token.surface)) token.tag = Tag::VB;
  }
  return tagged;
}

PretaggedLoad load_pretagged(std::istream& in) {
  PretaggedLoad result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("pretagged line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
    PretaggedClaim claim;
    claim.patent_id = doc.value("patent_id", std::string{});
    claim.claim_index = doc.value("claim_index", 0);
    const auto& tokens = doc.at("tokens");
    int position = 0;
    for (const auto& pair : tokens) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("pretagged line " + std::to_string(line_no) +
                                    ": token entries must be [surface, tag]");
      }
      std::string surface = ascii_lower(pair.at(0).get<std::string>());
      std::string tag_text = pair.at(1).get<std::string>();
      std::optional<Tag> tag = tag_from_name(tag_text);
      if (!tag) {
        result.warnings.push_back("line " + std::to_string(line_no) +
                                  ": unknown tag '" + tag_text + "' for '" +
                                  surface + "', mapped to OTHER");
        tag = Tag::OTHER;
      }
      claim.tokens.push_back(TaggedToken{std::move(surface), *tag, position++});
    }
    result.claims.push_back(std::move(claim));
  }
  return result;
}

HierarchyLexicon TaggingConfig::lexicon() const {
  return HierarchyLexicon::standard().with_extra(lexicon_extra);
}

TaggingConfig TaggingConfig::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("tagging config: ") + e.what());
  }
  TaggingConfig config;
  if (doc.contains("lexicon_extra")) {
    config.lexicon_extra = doc.at("lexicon_extra").get<std::vector<std::string>>();
  }
  if (doc.contains("backend")) {
    config.backend = doc.at("backend").get<std::string>();
    if (config.backend != "baseline" && config.backend != "pretagged") {
      throw std::invalid_argument("tagging config: unknown backend '" +
                                  config.backend + "'");
    }
  }
  return config;
}

}  // namespace patkg
