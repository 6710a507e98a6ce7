#include "patkg/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "patkg/claim_ingest.hpp"
#include "patkg/text_util.hpp"

namespace patkg {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<TermField, const char*>, 7> kFieldNames = {{
    {TermField::Civil, "civil"},
    {TermField::Material, "material"},
    {TermField::Mech, "mech"},
    {TermField::Mining, "mining"},
    {TermField::Nuclear, "nuclear"},
    {TermField::Software, "software"},
    {TermField::Other, "other"},
}};

// Dropped during normalization: they carry no content in a term like
// "center of gravity".
const std::unordered_set<std::string>& term_prepositions() {
  static const std::unordered_set<std::string> words = {
      "of",   "for",  "in",   "on",   "at",   "to",    "by",
      "with", "from", "into", "onto", "over", "under",
  };
  return words;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alnum(char c) {
  return is_upper(c) || is_lower(c) || (c >= '0' && c <= '9');
}

// "ObjectWorks" -> "Object Works" but "DoD" stays whole: a split needs a
// genuine lowercase run before the capital, not a single sandwiched letter.
// The all-caps rule handles "XMLHttp" -> "XML Http".
std::string split_camel(std::string_view term) {
  std::string result;
  result.reserve(term.size() + 4);
  for (std::size_t i = 0; i < term.size(); ++i) {
    if (i >= 2 && is_upper(term[i]) && is_lower(term[i - 1]) &&
        is_lower(term[i - 2])) {
      result.push_back(' ');
    } else if (i >= 1 && i + 1 < term.size() && is_upper(term[i]) &&
               is_upper(term[i - 1]) && is_lower(term[i + 1])) {
      result.push_back(' ');
    }
    result.push_back(term[i]);
  }
  return result;
}

double round3(double value) { return std::round(value * 1000.0) / 1000.0; }

std::string percent(double fraction) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << fraction * 100.0 << "%";
  return out.str();
}

json counts_to_json(const CoverageCounts& counts) {
  return json{{"checked", counts.checked},
              {"raw_found", counts.raw_found},
              {"raw_fraction", round3(counts.raw_fraction())},
              {"adjusted_found", counts.adjusted_found},
              {"adjusted_fraction", round3(counts.adjusted_fraction())}};
}

}  // namespace

const char* term_field_name(TermField field) {
  for (const auto& [f, name] : kFieldNames) {
    if (f == field) return name;
  }
  return "other";
}

std::optional<TermField> term_field_from_name(std::string_view name) {
  for (const auto& [field, field_name] : kFieldNames) {
    if (name == field_name) return field;
  }
  return std::nullopt;
}

TermDictionary TermDictionary::from_csv(std::istream& in) {
  TermDictionary dict;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    // Split at the last comma so a term may itself contain commas.
    std::size_t comma = trimmed.rfind(',');
    if (comma == std::string::npos) {
      throw ParseError(line_no, "expected term,field");
    }
    std::string term = trim(trimmed.substr(0, comma));
    std::string field_text = ascii_lower(trim(trimmed.substr(comma + 1)));
    if (line_no == 1 && ascii_lower(term) == "term" && field_text == "field") {
      continue;  // optional header row
    }
    if (term.empty()) {
      throw ParseError(line_no, "empty term");
    }
    std::optional<TermField> field = term_field_from_name(field_text);
    if (!field) {
      throw ParseError(line_no, "unknown field '" + field_text + "'");
    }
    dict.entries.push_back(TermEntry{std::move(term), *field});
  }
  return dict;
}

std::string normalize_term(std::string_view term) {
  std::string spaced = split_camel(term);
  for (char& c : spaced) {
    c = is_alnum(c) ? c : ' ';
  }
  spaced = ascii_lower(spaced);

  std::vector<std::string> kept;
  for (std::string& token : split_whitespace(spaced)) {
    if (contains_digit(token)) continue;
    if (term_prepositions().count(token) > 0) continue;
    kept.push_back(std::move(token));
  }
  return join(kept, " ");
}

double CoverageCounts::raw_fraction() const {
  return checked == 0 ? 0.0 : static_cast<double>(raw_found) / checked;
}

double CoverageCounts::adjusted_fraction() const {
  return checked == 0 ? 0.0 : static_cast<double>(adjusted_found) / checked;
}

CoverageReport coverage(const TermDictionary& dict, const MergedGraph& graph,
                        bool adjusted) {
  if (dict.entries.empty()) {
    throw std::invalid_argument("term dictionary is empty");
  }

  std::unordered_set<std::string> surfaces(graph.entities().begin(),
                                           graph.entities().end());
  std::unordered_set<std::string> normalized_surfaces;
  for (const std::string& entity : graph.entities()) {
    std::string normalized = normalize_term(entity);
    if (!normalized.empty()) normalized_surfaces.insert(std::move(normalized));
  }

  CoverageReport report;
  report.adjusted = adjusted;
  for (const TermEntry& entry : dict.entries) {
    bool raw_hit = surfaces.count(entry.term) > 0;
    std::string normalized = normalize_term(entry.term);
    // Both counters are always filled in; `adjusted` only decides which
    // matching rule defines a miss.
    bool adjusted_hit =
        raw_hit ||
        (!normalized.empty() && normalized_surfaces.count(normalized) > 0);

    for (CoverageCounts* counts :
         {&report.total, &report.per_field[entry.field]}) {
      counts->checked += 1;
      counts->raw_found += raw_hit ? 1 : 0;
      counts->adjusted_found += adjusted_hit ? 1 : 0;
    }
    if (adjusted ? !adjusted_hit : !raw_hit) {
      report.misses.push_back(
          CoverageMiss{entry.term, std::move(normalized), entry.field});
    }
  }
  return report;
}

std::string coverage_report_json(const CoverageReport& report) {
  json fields = json::object();
  for (const auto& [field, counts] : report.per_field) {
    fields[term_field_name(field)] = counts_to_json(counts);
  }
  json misses = json::array();
  for (const CoverageMiss& miss : report.misses) {
    misses.push_back(json{{"term", miss.term},
                          {"normalized", miss.normalized},
                          {"field", term_field_name(miss.field)}});
  }
  json doc;
  doc["adjusted"] = report.adjusted;
  doc["total"] = counts_to_json(report.total);
  doc["fields"] = std::move(fields);
  doc["misses"] = std::move(misses);
  return doc.dump();
}

std::string coverage_report_table(const CoverageReport& report) {
  std::vector<std::string> headers;
  std::vector<const CoverageCounts*> columns;
  for (const auto& [field, counts] : report.per_field) {
    headers.push_back(term_field_name(field));
    columns.push_back(&counts);
  }
  headers.push_back("total");
  columns.push_back(&report.total);

  auto raw_cell = [](const CoverageCounts& c) {
    return std::to_string(c.raw_found) + " (" + percent(c.raw_fraction()) + ")";
  };
  auto adjusted_cell = [](const CoverageCounts& c) {
    return std::to_string(c.adjusted_found) + " (" +
           percent(c.adjusted_fraction()) + ")";
  };

  std::vector<std::size_t> widths(headers.size());
  for (std::size_t i = 0; i < headers.size(); ++i) {
    widths[i] = std::max({headers[i].size(),
                          std::to_string(columns[i]->checked).size(),
                          raw_cell(*columns[i]).size(),
                          adjusted_cell(*columns[i]).size()});
  }

  std::ostringstream out;
  auto emit_row = [&](const std::string& label, auto&& cell) {
    out << std::left << std::setw(10) << label;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << "  " << std::right << std::setw(static_cast<int>(widths[i]))
          << cell(i);
    }
    out << "\n";
  };

  emit_row("", [&](std::size_t i) { return headers[i]; });
  emit_row("checked",
           [&](std::size_t i) { return std::to_string(columns[i]->checked); });
  emit_row("raw", [&](std::size_t i) { return raw_cell(*columns[i]); });
  emit_row("adjusted",
           [&](std::size_t i) { return adjusted_cell(*columns[i]); });
  return out.str();
}

GraphStats graph_stats(const MergedGraph& graph) {
  GraphStats stats;
  stats.entity_count = graph.entity_count();

  std::vector<std::size_t> out_degree(graph.entity_count(), 0);
  for (const MergedFact& fact : graph.facts()) {
    if (fact.inferred) {
      stats.inferred_fact_count += 1;
    } else {
      stats.extracted_fact_count += 1;
      out_degree[fact.head] += 1;
    }
  }
  if (stats.entity_count > 0) {
    stats.facts_per_entity =
        round3(static_cast<double>(stats.extracted_fact_count) /
               static_cast<double>(stats.entity_count));
  }
  for (std::size_t degree : out_degree) {
    stats.out_degree_histogram[degree] += 1;
  }
  return stats;
}

std::string graph_stats_json(const GraphStats& stats) {
  // Histogram rows as [degree, count] pairs: a JSON object would sort the
  // degree keys as strings and put 10 before 2.
  json histogram = json::array();
  for (const auto& [degree, count] : stats.out_degree_histogram) {
    histogram.push_back(json::array({degree, count}));
  }
  json doc;
  doc["entity_count"] = stats.entity_count;
  doc["extracted_fact_count"] = stats.extracted_fact_count;
  doc["inferred_fact_count"] = stats.inferred_fact_count;
  doc["facts_per_entity"] =
      stats.facts_per_entity ? json(*stats.facts_per_entity) : json();
  doc["out_degree_histogram"] = std::move(histogram);
  return doc.dump();
}

}  // namespace patkg
