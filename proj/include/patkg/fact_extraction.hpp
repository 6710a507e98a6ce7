#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patkg/claim_cleaning.hpp"
#include "patkg/claim_ingest.hpp"
#include "patkg/pos_tagging.hpp"

namespace patkg {

// A WDT-free run of tagged tokens. Segments after a boundary start with a
// copy of the entity that preceded the boundary marker.
using Segment = std::vector<TaggedToken>;

// A determiner- or count-anchored noun/adjective span inside one segment.
struct EntityMention {
  std::string surface;  // space-joined; a/an/the dropped, CD word retained
  Tag marker = Tag::DT;
  std::size_t begin = 0;  // marker index in the segment
  std::size_t end = 0;    // one past the last accumulated token
  std::vector<TaggedToken> raw_tokens;  // marker plus the accumulated run
};

enum class FactKind { Hierarchical, NonHierarchical };

const char* fact_kind_name(FactKind kind);  // "hierarchical" | "nonhierarchical"
std::optional<FactKind> fact_kind_from_name(std::string_view name);

// Where a fact came from: normally (patent id, claim index); inference stamps
// a rule id instead of a patent.
struct Provenance {
  std::string source_id;
  int claim_index = 0;

  auto operator<=>(const Provenance&) const = default;
};

struct Fact {
  std::string head;
  std::string relation;  // space-joined verb tokens, never empty
  std::string tail;
  FactKind kind = FactKind::NonHierarchical;
  bool inferred = false;
  std::vector<Provenance> provenance;

  bool operator==(const Fact&) const = default;
};

// Splits a tagged claim at WDT tokens. The most recent entity span before a
// boundary closes the current segment and re-opens the next one; the WDT
// itself is dropped. A WDT with no preceding entity is deleted in place with
// no split. Claims without WDT yield a single segment; empty input yields no
// segments.
std::vector<Segment> segment_claim(const std::vector<TaggedToken>& tagged);

// Left-to-right scan: each DT or CD starts a candidate that accumulates
// noun/adjective tokens until the next DT/CD/verb or the segment end.
// Candidates with nothing accumulated produce no mention.
std::vector<EntityMention> extract_entities(const Segment& segment);

// Walks the gaps between consecutive mentions. A gap's relation is its verb
// tokens joined by spaces; non-verb gap tokens are discarded. A hierarchical
// relation fans out across following verb-free gaps; a non-hierarchical one
// links only the adjacent pair.
std::vector<Fact> extract_relations(
    const Segment& segment, const std::vector<EntityMention>& mentions,
    const HierarchyLexicon& lexicon = HierarchyLexicon::standard());

struct ExtractionConfig {
  CleaningConfig cleaning = CleaningConfig::standard();
  HierarchyLexicon lexicon = HierarchyLexicon::standard();

  static ExtractionConfig standard() { return {}; }
};

struct ClaimExtraction {
  std::vector<std::string> entities;  // unique surfaces, first occurrence order
  std::vector<Fact> facts;            // extraction order, not de-duplicated
};

// Full path for one raw claim: clean, tokenize, tag, apply overrides, filter,
// segment, then per-segment entity and relation extraction. Facts carry
// (patent_id, claim_index) provenance.
ClaimExtraction extract_claim_facts(std::string_view raw_claim,
                                    const std::string& patent_id,
                                    int claim_index,
                                    const ExtractionConfig& config =
                                        ExtractionConfig::standard());

// Same tail of the pipeline for externally tagged tokens: overrides and tag
// filtering still run, tokenization and tagging are skipped.
ClaimExtraction extract_tagged_claim(const std::vector<TaggedToken>& tagged,
                                     const std::string& patent_id,
                                     int claim_index,
                                     const HierarchyLexicon& lexicon =
                                         HierarchyLexicon::standard());

struct PatentGraph {
  std::string patent_id;
  std::optional<int> year;  // carried for shard routing, not serialized
  std::vector<std::string> entities;  // first occurrence order, unique
  std::vector<Fact> facts;            // unique on (head, relation, tail, kind)

  bool operator==(const PatentGraph&) const = default;
};

// Runs extract_claim_facts over every claim of a record and merges the
// results: entities keep first-occurrence order, duplicate facts collapse
// with their claim-index provenance lists merged.
PatentGraph aggregate_patent(const ClaimRecord& record,
                             const ExtractionConfig& config =
                                 ExtractionConfig::standard());

}  // namespace patkg
