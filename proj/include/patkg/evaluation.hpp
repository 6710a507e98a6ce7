#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patkg/graph_store.hpp"

namespace patkg {

enum class TermField { Civil, Material, Mech, Mining, Nuclear, Software, Other };

const char* term_field_name(TermField field);
std::optional<TermField> term_field_from_name(std::string_view name);

struct TermEntry {
  std::string term;
  TermField field = TermField::Other;
};

struct TermDictionary {
  std::vector<TermEntry> entries;

  // CSV lines `term,field`; whitespace-trimmed, blank lines skipped. A bad
  // field label or empty term throws ParseError with the line number.
  static TermDictionary from_csv(std::istream& in);
};

// Lexical normalization applied when a term is absent verbatim: split
// camel-case joints, lowercase, rewrite punctuation and operators to spaces,
// drop digit-bearing tokens, drop prepositions. Idempotent; may return "".
std::string normalize_term(std::string_view term);

struct CoverageCounts {
  std::size_t checked = 0;
  std::size_t raw_found = 0;
  std::size_t adjusted_found = 0;

  double raw_fraction() const;
  double adjusted_fraction() const;
};

struct CoverageMiss {
  std::string term;
  std::string normalized;
  TermField field = TermField::Other;
};

struct CoverageReport {
  bool adjusted = false;
  std::map<TermField, CoverageCounts> per_field;
  CoverageCounts total;
  std::vector<CoverageMiss> misses;  // terms still absent after matching
};

// Raw match: the term equals an entity surface exactly. Adjusted match adds
// normalize_term on either side (empty normalizations never match). The
// adjusted found-set contains the raw one by construction. An empty
// dictionary throws std::invalid_argument.
CoverageReport coverage(const TermDictionary& dict, const MergedGraph& graph,
                        bool adjusted);

std::string coverage_report_json(const CoverageReport& report);
// Aligned columns, one field per column plus a total; raw and adjusted rows.
std::string coverage_report_table(const CoverageReport& report);

struct GraphStats {
  std::size_t entity_count = 0;
  std::size_t extracted_fact_count = 0;
  std::size_t inferred_fact_count = 0;
  // extracted facts per entity, rounded to 3 decimals; unset for empty graphs
  std::optional<double> facts_per_entity;
  std::map<std::size_t, std::size_t> out_degree_histogram;  // extracted facts
};

GraphStats graph_stats(const MergedGraph& graph);

std::string graph_stats_json(const GraphStats& stats);

}  // namespace patkg
