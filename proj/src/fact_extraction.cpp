#include "patkg/fact_extraction.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_set>
#include <utility>

#include "patkg/text_util.hpp"

namespace patkg {

const char* fact_kind_name(FactKind kind) {
  return kind == FactKind::Hierarchical ? "hierarchical" : "nonhierarchical";
}

std::optional<FactKind> fact_kind_from_name(std::string_view name) {
  if (name == "hierarchical") return FactKind::Hierarchical;
  if (name == "nonhierarchical") return FactKind::NonHierarchical;
  return std::nullopt;
}

std::vector<Segment> segment_claim(const std::vector<TaggedToken>& tagged) {
  std::vector<Segment> segments;
  Segment current;

  for (const TaggedToken& token : tagged) {
    if (token.tag != Tag::WDT) {
      current.push_back(token);
      continue;
    }
    // Boundary: the entity the WDT refers back to is the last mention in the
    // running segment. It stays at the end of the closed segment and a copy
    // seeds the next one, so both sides of the split can see it.
    std::vector<EntityMention> mentions = extract_entities(current);
    if (mentions.empty()) {
      continue;  // nothing to refer back to; drop the WDT, no split
    }
    Segment seed = mentions.back().raw_tokens;
    segments.push_back(std::move(current));
    current = std::move(seed);
  }
  if (!current.empty()) segments.push_back(std::move(current));
  return segments;
}

std::vector<EntityMention> extract_entities(const Segment& segment) {
  std::vector<EntityMention> mentions;
  std::size_t i = 0;
  while (i < segment.size()) {
    Tag marker = segment[i].tag;
    if (marker != Tag::DT && marker != Tag::CD) {
      ++i;
      continue;
    }
    std::size_t run_end = i + 1;
    while (run_end < segment.size() &&
           is_noun_or_adjective(segment[run_end].tag)) {
      ++run_end;
    }
    if (run_end == i + 1) {
      // Bare marker with no span after it; the stopping token may itself be
      // the next candidate's marker, so only step past the bare one.
      ++i;
      continue;
    }
    EntityMention mention;
    mention.marker = marker;
    mention.begin = i;
    mention.end = run_end;
    mention.raw_tokens.assign(segment.begin() + i, segment.begin() + run_end);
    // Articles vanish from the surface; a count word is part of it.
    std::vector<std::string> surface_parts;
    for (std::size_t k = (marker == Tag::DT ? i + 1 : i); k < run_end; ++k) {
      surface_parts.push_back(segment[k].surface);
    }
    mention.surface = join(surface_parts, " ");
    mentions.push_back(std::move(mention));
    i = run_end;
  }
  return mentions;
}

std::vector<Fact> extract_relations(const Segment& segment,
                                    const std::vector<EntityMention>& mentions,
                                    const HierarchyLexicon& lexicon) {
  std::vector<Fact> facts;
  if (mentions.size() < 2) return facts;

  // Verb tokens of the gap before each mention (gap k sits between mention
  // k-1 and mention k), gathered once so the fan-out scan below is cheap.
  std::vector<std::vector<std::string>> gap_verbs(mentions.size());
  for (std::size_t k = 1; k < mentions.size(); ++k) {
    for (std::size_t t = mentions[k - 1].end; t < mentions[k].begin; ++t) {
      if (is_verb(segment[t].tag)) gap_verbs[k].push_back(segment[t].surface);
    }
  }

  for (std::size_t k = 1; k < mentions.size(); ++k) {
    if (gap_verbs[k].empty()) continue;
    std::string relation = join(gap_verbs[k], " ");
    bool hierarchical = std::any_of(
        gap_verbs[k].begin(), gap_verbs[k].end(),
        [&](const std::string& verb) { return lexicon.contains(verb); });
    FactKind kind =
        hierarchical ? FactKind::Hierarchical : FactKind::NonHierarchical;

    facts.push_back(Fact{mentions[k - 1].surface, relation,
                         mentions[k].surface, kind, false, {}});
    if (!hierarchical) continue;
    // "X comprises A, B and C": the parts after A are separated from it only
    // by verb-free gaps, and they all belong to X, not to each other.
    for (std::size_t j = k + 1; j < mentions.size() && gap_verbs[j].empty();
         ++j) {
      facts.push_back(Fact{mentions[k - 1].surface, relation,
                           mentions[j].surface, kind, false, {}});
    }
  }
  return facts;
}

namespace {

ClaimExtraction run_segment_stage(const std::vector<TaggedToken>& filtered,
                                  const std::string& patent_id, int claim_index,
                                  const HierarchyLexicon& lexicon) {
  ClaimExtraction result;
  std::unordered_set<std::string> seen;
  for (const Segment& segment : segment_claim(filtered)) {
    std::vector<EntityMention> mentions = extract_entities(segment);
    for (const EntityMention& mention : mentions) {
      if (seen.insert(mention.surface).second) {
        result.entities.push_back(mention.surface);
      }
    }
    for (Fact& fact : extract_relations(segment, mentions, lexicon)) {
      fact.provenance.push_back(Provenance{patent_id, claim_index});
      result.facts.push_back(std::move(fact));
    }
  }
  return result;
}

}  // namespace

ClaimExtraction extract_claim_facts(std::string_view raw_claim,
                                    const std::string& patent_id,
                                    int claim_index,
                                    const ExtractionConfig& config) {
  std::string cleaned = clean_text(raw_claim, config.cleaning);
  Tagger tagger(config.lexicon);
  std::vector<TaggedToken> tagged = tagger.tag(tokenize(cleaned));
  tagged = apply_overrides(std::move(tagged), config.lexicon);
  return run_segment_stage(filter_tags(tagged), patent_id, claim_index,
                           config.lexicon);
}

ClaimExtraction extract_tagged_claim(const std::vector<TaggedToken>& tagged,
                                     const std::string& patent_id,
                                     int claim_index,
                                     const HierarchyLexicon& lexicon) {
  std::vector<TaggedToken> overridden = apply_overrides(tagged, lexicon);
  return run_segment_stage(filter_tags(overridden), patent_id, claim_index,
                           lexicon);
}

PatentGraph aggregate_patent(const ClaimRecord& record,
                             const ExtractionConfig& config) {
  PatentGraph graph;
  graph.patent_id = record.patent_id;
  graph.year = record.year;

  std::unordered_set<std::string> seen_entities;
  // Duplicate facts across claims collapse into one row whose provenance
  // lists every claim that produced it.
  std::map<std::tuple<std::string, std::string, std::string, FactKind>,
           std::size_t>
      fact_index;

  for (std::size_t c = 0; c < record.claims.size(); ++c) {
    int claim_index = static_cast<int>(c) + 1;  // patents number claims from 1
    ClaimExtraction extraction = extract_claim_facts(
        record.claims[c], record.patent_id, claim_index, config);
    for (std::string& entity : extraction.entities) {
      if (seen_entities.insert(entity).second) {
        graph.entities.push_back(std::move(entity));
      }
    }
    for (Fact& fact : extraction.facts) {
      auto key = std::make_tuple(fact.head, fact.relation, fact.tail, fact.kind);
      auto [it, inserted] = fact_index.emplace(key, graph.facts.size());
      if (inserted) {
        graph.facts.push_back(std::move(fact));
        continue;
      }
      std::vector<Provenance>& existing = graph.facts[it->second].provenance;
      for (Provenance& prov : fact.provenance) {
        if (std::find(existing.begin(), existing.end(), prov) ==
            existing.end()) {
          existing.push_back(std::move(prov));
        }
      }
    }
  }
  return graph;
}

}  // namespace patkg
