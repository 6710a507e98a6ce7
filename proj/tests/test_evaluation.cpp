#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "patkg/claim_ingest.hpp"
#include "patkg/evaluation.hpp"

using namespace patkg;

namespace {

MergedGraph graph_with(const std::vector<std::string>& entities) {
  MergedGraph graph;
  for (const std::string& entity : entities) graph.intern_entity(entity);
  return graph;
}

TermDictionary dict_from(const std::string& csv) {
  std::istringstream in(csv);
  return TermDictionary::from_csv(in);
}

}  // namespace

TEST_CASE("term field names round-trip") {
  for (TermField field :
       {TermField::Civil, TermField::Material, TermField::Mech,
        TermField::Mining, TermField::Nuclear, TermField::Software,
        TermField::Other}) {
    CHECK(term_field_from_name(term_field_name(field)) == field);
  }
  CHECK(term_field_from_name("biology") == std::nullopt);
}

TEST_CASE("dictionary CSV parsing") {
  TermDictionary dict = dict_from(
      "term,field\n"
      "ground plane,civil\n"
      "  drill string , mining \n"
      "\n"
      "1,3-butadiene,material\n"
      "kalman filter,SOFTWARE\r\n");
  REQUIRE(dict.entries.size() == 4);
  CHECK(dict.entries[0].term == "ground plane");
  CHECK(dict.entries[1].term == "drill string");
  CHECK(dict.entries[1].field == TermField::Mining);
  // The split happens at the last comma, so terms may contain commas.
  CHECK(dict.entries[2].term == "1,3-butadiene");
  CHECK(dict.entries[2].field == TermField::Material);
  CHECK(dict.entries[3].field == TermField::Software);
}

TEST_CASE("dictionary CSV without a header row") {
  TermDictionary dict = dict_from("valve seat,mech\n");
  REQUIRE(dict.entries.size() == 1);
  CHECK(dict.entries[0].term == "valve seat");
}

TEST_CASE("dictionary CSV errors carry line numbers") {
  auto line_of = [](const std::string& csv) {
    try {
      dict_from(csv);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("term,field\njust a term\n") == 2);
  CHECK(line_of("ok,mech\n,civil\n") == 2);
  CHECK(line_of("ok,mech\nok2,mech\nthing,biology\n") == 3);
}

TEST_CASE("normalize_term reference pairs") {
  CHECK(normalize_term("Center-of-gravity") == "center gravity");
  CHECK(normalize_term("TCP/IP") == "tcp ip");
  CHECK(normalize_term("ObjectWorks") == "object works");
  CHECK(normalize_term("DoD-STD-2167A") == "dod std");
  CHECK(normalize_term("X.225") == "x");
  CHECK(normalize_term("Clean coal") == "clean coal");
  CHECK(normalize_term("XMLHttp") == "xml http");
}

TEST_CASE("normalize_term drops digit tokens and prepositions") {
  CHECK(normalize_term("drill bit assembly 7") == "drill bit assembly");
  CHECK(normalize_term("plurality of teeth") == "plurality teeth");
  CHECK(normalize_term("method for bonding to a substrate") ==
        "method bonding a substrate");
  CHECK(normalize_term("12 45") == "");
  CHECK(normalize_term("of") == "");
  CHECK(normalize_term("") == "");
}

TEST_CASE("normalize_term is idempotent") {
  for (const char* term :
       {"Center-of-gravity", "TCP/IP", "ObjectWorks", "DoD-STD-2167A", "X.225",
        "Clean coal", "drill bit assembly 7", "LaminatedCore"}) {
    std::string once = normalize_term(term);
    CHECK(normalize_term(once) == once);
  }
}

TEST_CASE("coverage counts raw and adjusted matches") {
  MergedGraph graph =
      graph_with({"ground plane", "heat transfer fluid", "gear"});
  TermDictionary dict = dict_from(
      "ground plane,civil\n"
      "Heat-Transfer Fluid,civil\n"
      "retaining wall,civil\n"
      "zeolite catalyst,material\n");

  CoverageReport raw = coverage(dict, graph, false);
  CHECK(!raw.adjusted);
  CHECK(raw.total.checked == 4);
  CHECK(raw.total.raw_found == 1);
  CHECK(raw.total.adjusted_found == 2);
  CHECK(raw.per_field.at(TermField::Civil).checked == 3);
  CHECK(raw.per_field.at(TermField::Civil).raw_found == 1);
  CHECK(raw.per_field.at(TermField::Civil).adjusted_found == 2);
  CHECK(raw.per_field.at(TermField::Material).adjusted_found == 0);
  // In raw mode the normalized-only match still counts as a miss.
  REQUIRE(raw.misses.size() == 3);
  CHECK(raw.misses[0].term == "Heat-Transfer Fluid");
  CHECK(raw.misses[0].normalized == "heat transfer fluid");

  CoverageReport adjusted = coverage(dict, graph, true);
  CHECK(adjusted.adjusted);
  CHECK(adjusted.total.raw_found == 1);      // counters identical in both modes
  CHECK(adjusted.total.adjusted_found == 2);
  REQUIRE(adjusted.misses.size() == 2);
  CHECK(adjusted.misses[0].term == "retaining wall");
  CHECK(adjusted.misses[1].term == "zeolite catalyst");
  CHECK(adjusted.misses[1].field == TermField::Material);
}

TEST_CASE("adjusted matches contain raw matches") {
  MergedGraph graph = graph_with({"valve seat", "scraper blade"});
  TermDictionary dict = dict_from("valve seat,mech\nValve-Seat,mech\nxx,mech\n");
  CoverageReport report = coverage(dict, graph, true);
  CHECK(report.total.adjusted_found >= report.total.raw_found);
  for (const auto& [field, counts] : report.per_field) {
    CHECK(counts.adjusted_found >= counts.raw_found);
  }
}

TEST_CASE("terms that normalize to nothing never match") {
  // Entity "999" also normalizes to "", which must not create an accidental
  // empty-to-empty match.
  MergedGraph graph = graph_with({"999"});
  TermDictionary dict = dict_from("888,other\n");
  CoverageReport report = coverage(dict, graph, true);
  CHECK(report.total.adjusted_found == 0);
  REQUIRE(report.misses.size() == 1);
  CHECK(report.misses[0].normalized == "");
}

TEST_CASE("coverage rejects an empty dictionary") {
  MergedGraph graph = graph_with({"gear"});
  TermDictionary empty;
  CHECK_THROWS_AS(coverage(empty, graph, false), std::invalid_argument);
}

TEST_CASE("coverage fractions") {
  CoverageCounts counts;
  CHECK(counts.raw_fraction() == 0.0);
  CHECK(counts.adjusted_fraction() == 0.0);
  counts.checked = 4;
  counts.raw_found = 1;
  counts.adjusted_found = 3;
  CHECK(counts.raw_fraction() == doctest::Approx(0.25));
  CHECK(counts.adjusted_fraction() == doctest::Approx(0.75));
}

TEST_CASE("coverage report JSON shape") {
  MergedGraph graph = graph_with({"ground plane"});
  TermDictionary dict = dict_from("ground plane,civil\nretaining wall,civil\n");
  nlohmann::json doc =
      nlohmann::json::parse(coverage_report_json(coverage(dict, graph, true)));
  CHECK(doc.at("adjusted") == true);
  CHECK(doc.at("total").at("checked") == 2);
  CHECK(doc.at("total").at("raw_found") == 1);
  CHECK(doc.at("total").at("raw_fraction") == 0.5);
  CHECK(doc.at("fields").at("civil").at("adjusted_found") == 1);
  REQUIRE(doc.at("misses").size() == 1);
  CHECK(doc.at("misses")[0].at("term") == "retaining wall");
  CHECK(doc.at("misses")[0].at("field") == "civil");
}

TEST_CASE("coverage report table shape") {
  MergedGraph graph = graph_with({"ground plane"});
  TermDictionary dict = dict_from("ground plane,civil\ndrill string,mining\n");
  std::string table = coverage_report_table(coverage(dict, graph, false));
  CHECK(table.find("civil") != std::string::npos);
  CHECK(table.find("mining") != std::string::npos);
  CHECK(table.find("total") != std::string::npos);
  CHECK(table.find("checked") != std::string::npos);
  CHECK(table.find("raw") != std::string::npos);
  CHECK(table.find("adjusted") != std::string::npos);
  CHECK(table.find("100.0%") != std::string::npos);  // civil raw hit
  CHECK(table.find("50.0%") != std::string::npos);   // total raw fraction
  // Four lines: header, checked, raw, adjusted.
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
}

TEST_CASE("graph stats count extracted and inferred separately") {
  MergedGraph graph;
  graph.add_fact("a", "comprising", "b", FactKind::Hierarchical, false, {});
  graph.add_fact("a", "comprising", "c", FactKind::Hierarchical, false, {});
  graph.add_fact("b", "engages", "c", FactKind::NonHierarchical, false, {});
  graph.add_fact("a", "comprises", "d", FactKind::Hierarchical, true,
                 {{"rule:eq1", 0}});

  GraphStats stats = graph_stats(graph);
  CHECK(stats.entity_count == 4);
  CHECK(stats.extracted_fact_count == 3);
  CHECK(stats.inferred_fact_count == 1);
  CHECK(stats.facts_per_entity == 0.75);
  // Degrees count extracted facts only: a has 2 (not 3), c and d have 0.
  CHECK(stats.out_degree_histogram ==
        std::map<std::size_t, std::size_t>{{0, 2}, {1, 1}, {2, 1}});
}

TEST_CASE("facts per entity is rounded to three decimals") {
  MergedGraph graph;
  graph.add_fact("x", "comprising", "y", FactKind::Hierarchical, false, {});
  graph.add_fact("y", "comprising", "z", FactKind::Hierarchical, false, {});
  CHECK(graph_stats(graph).facts_per_entity == 0.667);
}

TEST_CASE("empty graph stats") {
  GraphStats stats = graph_stats(MergedGraph{});
  CHECK(stats.entity_count == 0);
  CHECK(!stats.facts_per_entity.has_value());
  CHECK(stats.out_degree_histogram.empty());

  nlohmann::json doc = nlohmann::json::parse(graph_stats_json(stats));
  CHECK(doc.at("facts_per_entity").is_null());
  CHECK(doc.at("out_degree_histogram").empty());
}

TEST_CASE("graph stats JSON keeps numeric histogram ordering") {
  MergedGraph graph;
  for (int i = 0; i < 11; ++i) {
    graph.add_fact("hub", "comprising", "leaf" + std::to_string(i),
                   FactKind::Hierarchical, false, {});
  }
  nlohmann::json doc = nlohmann::json::parse(graph_stats_json(graph_stats(graph)));
  auto histogram = doc.at("out_degree_histogram");
  // [degree, count] rows in ascending numeric order: 0 then 11.
  REQUIRE(histogram.size() == 2);
  CHECK(histogram[0] == nlohmann::json::array({0, 11}));
  CHECK(histogram[1] == nlohmann::json::array({11, 1}));
}
