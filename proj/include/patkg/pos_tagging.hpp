#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace patkg {

// Penn-Treebank tags the pipeline works with. Everything outside the working
// set collapses to OTHER and is discarded by filter_tags.
enum class Tag {
  NN,
  NNS,
  NNP,
  NNPS,
  DT,
  CD,
  JJ,
  JJR,
  JJS,
  VB,
  VBD,
  VBG,
  VBN,
  VBP,
  VBZ,
  WDT,
  OTHER,
};

const char* tag_name(Tag tag);
std::optional<Tag> tag_from_name(std::string_view name);

bool is_verb(Tag tag);               // VB, VBD, VBG, VBN, VBP, VBZ
bool is_noun_or_adjective(Tag tag);  // NN, NNS, NNP, NNPS, JJ, JJR, JJS

struct TaggedToken {
  std::string surface;  // lowercase token
  Tag tag = Tag::OTHER;
  int position = 0;  // index in the claim's token stream, source order

  bool operator==(const TaggedToken&) const = default;
};

// The fixed verb set that marks system-subsystem containment. The default set
// is immutable; extension happens only through an explicit config.
class HierarchyLexicon {
 public:
  static const HierarchyLexicon& standard();

  HierarchyLexicon with_extra(const std::vector<std::string>& words) const;

  bool contains(std::string_view word) const;
  const std::set<std::string>& words() const { return words_; }

 private:
  explicit HierarchyLexicon(std::set<std::string> words);

  std::set<std::string> words_;
};

// Whitespace split of already-cleaned text. Empty tokens are dropped, order
// is preserved.
std::vector<std::string> tokenize(std::string_view cleaned);

// Deterministic baseline tagger. Closed-class words (determiners, wh-words,
// number words, copulas) get fixed tags; suffix heuristics propose verb
// candidates that a local context check resolves; everything else is NN.
class Tagger {
 public:
  explicit Tagger(HierarchyLexicon lexicon = HierarchyLexicon::standard());

  std::vector<TaggedToken> tag(const std::vector<std::string>& tokens) const;

 private:
  HierarchyLexicon lexicon_;
};

// Force every hierarchy-lexicon word to VB, whatever the backend said.
// Idempotent; all other tokens pass through unchanged.
std::vector<TaggedToken> apply_overrides(std::vector<TaggedToken> tagged,
                                         const HierarchyLexicon& lexicon);

// Externally tagged claims, bypassing tokenize/tag. One JSONL object per
// claim: {"patent_id": ..., "claim_index": ..., "tokens": [["the","DT"],...]}.
struct PretaggedClaim {
  std::string patent_id;
  int claim_index = 0;
  std::vector<TaggedToken> tokens;
};

struct PretaggedLoad {
  std::vector<PretaggedClaim> claims;
  std::vector<std::string> warnings;  // e.g. unknown tag strings mapped to OTHER
};

PretaggedLoad load_pretagged(std::istream& in);

// Tagging-side config: lexicon extension plus backend selection.
struct TaggingConfig {
  std::vector<std::string> lexicon_extra;
  std::string backend = "baseline";  // "baseline" | "pretagged"

  HierarchyLexicon lexicon() const;

  static TaggingConfig from_json(const std::string& text);
};

}  // namespace patkg
