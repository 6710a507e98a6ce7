#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "patkg/graph_store.hpp"

using namespace patkg;
namespace fs = std::filesystem;

namespace {

PatentGraph widget_graph() {
  PatentGraph graph;
  graph.patent_id = "P1";
  graph.year = 1999;
  graph.entities = {"widget", "gear", "lever"};
  graph.facts = {
      {"widget", "comprising", "gear", FactKind::Hierarchical, false,
       {{"P1", 1}}},
      {"widget", "comprising", "lever", FactKind::Hierarchical, false,
       {{"P1", 1}, {"P1", 2}}},
      {"gear", "engages", "lever", FactKind::NonHierarchical, false,
       {{"P1", 2}}},
  };
  return graph;
}

PatentGraph apparatus_graph() {
  PatentGraph graph;
  graph.patent_id = "P2";
  graph.entities = {"apparatus", "frame", "gear"};
  graph.facts = {
      {"apparatus", "having", "frame", FactKind::Hierarchical, false,
       {{"P2", 1}}},
      {"frame", "includes", "gear", FactKind::Hierarchical, false, {{"P2", 1}}},
  };
  return graph;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("patkg_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("patent graph JSON round-trips") {
  PatentGraph graph = widget_graph();
  std::string text = patent_graph_to_json(graph);
  PatentGraph back = patent_graph_from_json(text);
  CHECK(back.patent_id == graph.patent_id);
  CHECK(back.entities == graph.entities);
  REQUIRE(back.facts.size() == 3);
  CHECK(back.facts[1].provenance ==
        std::vector<Provenance>{{"P1", 1}, {"P1", 2}});
  CHECK(back.facts[2].kind == FactKind::NonHierarchical);
  // The year travels outside the JSON body.
  CHECK(!back.year.has_value());
}

TEST_CASE("patent graph schema violations throw SchemaError") {
  auto path_of = [](const std::string& text) {
    try {
      patent_graph_from_json(text);
    } catch (const SchemaError& e) {
      return e.json_path();
    }
    return std::string("no error");
  };

  CHECK(path_of("[1, 2]") == "$");
  CHECK(path_of(R"({"A": {}, "B": {}})") == "$");
  CHECK(path_of(R"({"P": []})") == "$.P");
  CHECK(path_of(R"({"P": {"relationships": []}})") == "$.P.entities");
  CHECK(path_of(R"({"P": {"entities": [1], "relationships": []}})") ==
        "$.P.entities[0]");
  CHECK(path_of(R"({"P": {"entities": []}})") == "$.P.relationships");
  CHECK(path_of(R"({"P": {"entities": [], "relationships": [["a", "b"]]}})") ==
        "$.P.relationships[0]");
  CHECK(path_of(
            R"({"P": {"entities": [], "relationships": [["a", "r", "b", "odd", []]]}})") ==
        "$.P.relationships[0][3]");
  CHECK(path_of(
            R"({"P": {"entities": [], "relationships": [["a", "r", "b", "hierarchical", ["x"]]]}})") ==
        "$.P.relationships[0][4]");
  CHECK_THROWS_AS(patent_graph_from_json("{"), SchemaError);
}

TEST_CASE("MergedGraph interns entities on exact string identity") {
  MergedGraph graph;
  std::uint32_t a = graph.intern_entity("gear");
  std::uint32_t b = graph.intern_entity("gear");
  std::uint32_t c = graph.intern_entity("Gear");  // different byte string
  CHECK(a == b);
  CHECK(a != c);
  CHECK(graph.entity_count() == 2);
  CHECK(graph.entity(a) == "gear");
  CHECK(graph.find_entity("gear") == a);
  CHECK(!graph.find_entity("lever").has_value());
}

TEST_CASE("add_fact merges duplicates and unions provenance") {
  MergedGraph graph;
  graph.add_fact("a", "comprises", "b", FactKind::Hierarchical, false,
                 {{"P2", 3}});
  graph.add_fact("a", "comprises", "b", FactKind::Hierarchical, false,
                 {{"P1", 1}, {"P2", 3}});
  REQUIRE(graph.fact_count() == 1);
  CHECK(graph.facts()[0].provenance ==
        std::vector<Provenance>{{"P1", 1}, {"P2", 3}});

  // Same triple with a different kind is a different fact.
  graph.add_fact("a", "comprises", "b", FactKind::NonHierarchical, false, {});
  CHECK(graph.fact_count() == 2);
}

TEST_CASE("an extracted duplicate clears the inferred flag, both orders") {
  MergedGraph first_inferred;
  first_inferred.add_fact("a", "comprises", "b", FactKind::Hierarchical, true,
                          {{"rule:eq1", 0}});
  first_inferred.add_fact("a", "comprises", "b", FactKind::Hierarchical, false,
                          {{"P1", 1}});
  REQUIRE(first_inferred.fact_count() == 1);
  CHECK(!first_inferred.facts()[0].inferred);

  MergedGraph first_extracted;
  first_extracted.add_fact("a", "comprises", "b", FactKind::Hierarchical, false,
                           {{"P1", 1}});
  first_extracted.add_fact("a", "comprises", "b", FactKind::Hierarchical, true,
                           {{"rule:eq1", 0}});
  REQUIRE(first_extracted.fact_count() == 1);
  CHECK(!first_extracted.facts()[0].inferred);
}

TEST_CASE("outgoing and incoming indices are consistent") {
  MergedGraph graph = MergedGraph::merge({widget_graph(), apparatus_graph()});
  std::uint32_t widget = *graph.find_entity("widget");
  std::uint32_t gear = *graph.find_entity("gear");
  CHECK(graph.outgoing(widget).size() == 2);
  CHECK(graph.incoming(widget).empty());
  // "gear" appears in both patents: one outgoing edge, two incoming.
  CHECK(graph.outgoing(gear).size() == 1);
  CHECK(graph.incoming(gear).size() == 2);
  CHECK_THROWS_AS(graph.outgoing(999), std::out_of_range);
}

TEST_CASE("merge keeps isolated entities and patent years") {
  PatentGraph lone;
  lone.patent_id = "P3";
  lone.entities = {"orphan"};
  MergedGraph graph = MergedGraph::merge({widget_graph(), lone});
  CHECK(graph.find_entity("orphan").has_value());
  CHECK(graph.patent_years().at("P1") == 1999);
  CHECK(!graph.patent_years().at("P3").has_value());
}

TEST_CASE("patent year conflicts resolve order-independently") {
  MergedGraph graph;
  graph.set_patent_year("P1", std::nullopt);
  graph.set_patent_year("P1", 1999);
  CHECK(graph.patent_years().at("P1") == 1999);
  graph.set_patent_year("P1", 1998);
  CHECK(graph.patent_years().at("P1") == 1998);
  graph.set_patent_year("P1", 2001);
  CHECK(graph.patent_years().at("P1") == 1998);
  graph.set_patent_year("P1", std::nullopt);
  CHECK(graph.patent_years().at("P1") == 1998);
}

TEST_CASE("canonical JSON is merge-order independent") {
  std::vector<PatentGraph> graphs = {widget_graph(), apparatus_graph()};
  std::string forward = MergedGraph::merge(graphs).canonical_json();
  std::reverse(graphs.begin(), graphs.end());
  std::string reversed = MergedGraph::merge(graphs).canonical_json();
  CHECK(forward == reversed);
}

TEST_CASE("canonical JSON round-trips") {
  MergedGraph graph = MergedGraph::merge({widget_graph(), apparatus_graph()});
  MergedGraph back = MergedGraph::from_canonical_json(graph.canonical_json());
  CHECK(back.canonical_json() == graph.canonical_json());
  CHECK(back.entity_count() == graph.entity_count());
  CHECK(back.patent_years() == graph.patent_years());
}

TEST_CASE("neighborhood: absent entity is found=false, not an error") {
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  NeighborhoodQuery query;
  query.entity = "no such thing";
  Subgraph result = neighborhood(graph, query);
  CHECK(!result.found);
  CHECK(result.center == "no such thing");
  CHECK(result.nodes.empty());
  CHECK(result.facts.empty());
  CHECK(result.depth_reached == 0);
}

TEST_CASE("neighborhood depth and direction") {
  MergedGraph graph = MergedGraph::merge({widget_graph(), apparatus_graph()});

  NeighborhoodQuery query;
  query.entity = "apparatus";
  query.depth = 1;
  Subgraph one = neighborhood(graph, query);
  CHECK(one.found);
  CHECK(one.nodes == std::vector<std::string>{"apparatus", "frame"});
  REQUIRE(one.facts.size() == 1);
  CHECK(one.depth_reached == 1);

  query.depth = 2;
  Subgraph two = neighborhood(graph, query);
  CHECK(two.nodes == std::vector<std::string>{"apparatus", "frame", "gear"});
  CHECK(two.facts.size() == 2);
  CHECK(two.depth_reached == 2);

  query.entity = "lever";
  query.direction = Direction::In;
  query.depth = 1;
  Subgraph in = neighborhood(graph, query);
  CHECK(in.facts.size() == 2);
  CHECK(in.nodes == std::vector<std::string>{"lever", "widget", "gear"});

  query.entity = "gear";
  query.direction = Direction::Both;
  Subgraph both = neighborhood(graph, query);
  CHECK(both.facts.size() == 3);
}

TEST_CASE("neighborhood kind and inferred filters") {
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  graph.add_fact("widget", "comprises", "bolt", FactKind::Hierarchical, true,
                 {{"rule:eq1", 0}});

  NeighborhoodQuery query;
  query.entity = "widget";
  query.depth = 2;

  Subgraph all = neighborhood(graph, query);
  CHECK(all.facts.size() == 4);

  query.include_inferred = false;
  Subgraph extracted_only = neighborhood(graph, query);
  CHECK(extracted_only.facts.size() == 3);
  for (const Fact& fact : extracted_only.facts) CHECK(!fact.inferred);

  query.include_inferred = true;
  query.kind = KindFilter::Hierarchical;
  Subgraph hier = neighborhood(graph, query);
  CHECK(hier.facts.size() == 3);

  query.kind = KindFilter::NonHierarchical;
  Subgraph nonhier = neighborhood(graph, query);
  REQUIRE(nonhier.facts.size() == 0);
  query.depth = 1;
  query.entity = "gear";
  CHECK(neighborhood(graph, query).facts.size() == 1);
}

TEST_CASE("neighborhood limit truncates deterministically") {
  MergedGraph graph = MergedGraph::merge({widget_graph(), apparatus_graph()});
  NeighborhoodQuery query;
  query.entity = "widget";
  query.depth = 3;
  query.limit = 2;
  Subgraph first = neighborhood(graph, query);
  CHECK(first.truncated);
  CHECK(first.facts.size() == 2);
  Subgraph second = neighborhood(graph, query);
  CHECK(subgraph_to_json(first) == subgraph_to_json(second));

  query.limit = 100;
  CHECK(!neighborhood(graph, query).truncated);
}

TEST_CASE("subgraph JSON carries all result fields") {
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  NeighborhoodQuery query;
  query.entity = "widget";
  std::string text = subgraph_to_json(neighborhood(graph, query));
  CHECK(text.find("\"center\":\"widget\"") != std::string::npos);
  CHECK(text.find("\"found\":true") != std::string::npos);
  CHECK(text.find("\"depth_reached\":1") != std::string::npos);
  CHECK(text.find("\"truncated\":false") != std::string::npos);
  CHECK(text.find("\"nodes\"") != std::string::npos);
  CHECK(text.find("comprising") != std::string::npos);
}

TEST_CASE("export_dot renders the display classes") {
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  graph.add_fact("widget", "comprises", "bolt", FactKind::Hierarchical, true,
                 {{"rule:eq1", 0}});
  NeighborhoodQuery query;
  query.entity = "widget";
  query.depth = 2;
  std::string dot = export_dot(neighborhood(graph, query));

  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.rfind("}\n") == dot.size() - 2);
  // Center node gets its own fill; inferred edges are dashed.
  CHECK(dot.find("\"widget\" [fillcolor=") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  // Hierarchical and plain edges use different colors.
  CHECK(dot.find("#2b6e4f") != std::string::npos);
  CHECK(dot.find("#8a8a8a") != std::string::npos);
  CHECK(dot.find("label=\"engages\"") != std::string::npos);
}

TEST_CASE("export_dot escapes quotes in labels") {
  MergedGraph graph;
  graph.add_fact("a \"quoted\" part", "holds", "plain part",
                 FactKind::NonHierarchical, false, {});
  NeighborhoodQuery query;
  query.entity = "a \"quoted\" part";
  std::string dot = export_dot(neighborhood(graph, query));
  CHECK(dot.find("a \\\"quoted\\\" part") != std::string::npos);
}

TEST_CASE("shard store round-trips and verifies hashes") {
  TempDir dir;
  MergedGraph graph = MergedGraph::merge({widget_graph(), apparatus_graph()});
  save_shards(graph, dir.path, 2);

  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "entities.jsonl"));
  CHECK(fs::exists(dir.path / "patents.jsonl"));
  CHECK(fs::exists(dir.path / "1999" / "0.jsonl"));
  CHECK(fs::exists(dir.path / "unknown" / "0.jsonl"));

  MergedGraph back = load_shards(dir.path);
  CHECK(back.canonical_json() == graph.canonical_json());
}

TEST_CASE("shard shard_size chunks fact files") {
  TempDir dir;
  MergedGraph graph;
  graph.set_patent_year("P1", 1990);
  for (int i = 0; i < 5; ++i) {
    graph.add_fact("e" + std::to_string(i), "comprises",
                   "e" + std::to_string(i + 1), FactKind::Hierarchical, false,
                   {{"P1", 1}});
  }
  save_shards(graph, dir.path, 2);
  CHECK(fs::exists(dir.path / "1990" / "0.jsonl"));
  CHECK(fs::exists(dir.path / "1990" / "1.jsonl"));
  CHECK(fs::exists(dir.path / "1990" / "2.jsonl"));
  CHECK(!fs::exists(dir.path / "1990" / "3.jsonl"));
  CHECK(load_shards(dir.path).canonical_json() == graph.canonical_json());
}

TEST_CASE("a flipped byte is reported as corruption naming the file") {
  TempDir dir;
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  save_shards(graph, dir.path);

  fs::path victim = dir.path / "entities.jsonl";
  std::string content;
  {
    std::ifstream in(victim, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    content = buffer.str();
  }
  content[1] = content[1] == 'x' ? 'y' : 'x';
  std::ofstream(victim, std::ios::binary | std::ios::trunc) << content;

  try {
    load_shards(dir.path);
    FAIL("expected CorruptionError");
  } catch (const CorruptionError& e) {
    CHECK(std::string(e.what()).find("entities.jsonl") != std::string::npos);
  }
}

TEST_CASE("a missing shard file is corruption") {
  TempDir dir;
  MergedGraph graph = MergedGraph::merge({widget_graph()});
  save_shards(graph, dir.path);
  fs::remove(dir.path / "1999" / "0.jsonl");
  CHECK_THROWS_AS(load_shards(dir.path), CorruptionError);
}

TEST_CASE("a missing manifest is corruption") {
  TempDir dir;
  CHECK_THROWS_AS(load_shards(dir.path), CorruptionError);
}

TEST_CASE("fnv1a64 matches reference vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
