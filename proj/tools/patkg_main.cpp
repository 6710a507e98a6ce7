// Command line front end for the patkg pipeline:
//   ingest      validate a corpus and write year-partitioned record shards
//   extract     run fact extraction and write per-patent graph shards
//   merge       combine per-patent graphs into one corpus graph
//   infer       add transitive containment facts to a merged graph
//   query       print the neighborhood subgraph of an entity
//   coverage    score a term dictionary against the entity set
//   stats       print corpus graph statistics
//   export-dot  render a neighborhood as Graphviz DOT
//
// Exit codes: 0 clean, 1 finished but rows were skipped, 2 fatal.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patkg/claim_ingest.hpp"
#include "patkg/evaluation.hpp"
#include "patkg/graph_store.hpp"
#include "patkg/inference.hpp"
#include "patkg/pipeline.hpp"

namespace {

using namespace patkg;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// Corpus input shared by ingest and extract.
struct CorpusInput {
  std::string path;
  std::string format = "tsv";
  bool header = false;
  bool fail_fast = false;
};

void add_corpus_options(CLI::App* cmd, CorpusInput& input) {
  cmd->add_option("-i,--input", input.path, "Corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", input.format, "Input format")
      ->check(CLI::IsMember({"tsv", "jsonl"}))
      ->capture_default_str();
  cmd->add_flag("--header", input.header, "Skip a TSV header row");
  cmd->add_flag("--fail-fast", input.fail_fast,
                "Stop at the first bad row instead of skipping it");
}

ParseResult read_corpus(const CorpusInput& input) {
  ParseOptions options;
  options.format =
      input.format == "jsonl" ? CorpusFormat::Jsonl : CorpusFormat::Tsv;
  options.has_header = input.header;
  options.fail_fast = input.fail_fast;
  std::ifstream in(input.path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + input.path);
  ParseResult result = parse_corpus(in, options);
  for (const RowError& error : result.errors) {
    std::cerr << "skipped line " << error.line << ": " << error.message << "\n";
  }
  return result;
}

void check_output_dir(const std::string& out_dir, const std::string& input) {
  namespace fs = std::filesystem;
  fs::path out = fs::weakly_canonical(out_dir);
  fs::path in = fs::weakly_canonical(input);
  if (out == in) {
    throw std::runtime_error("output directory equals the input path");
  }
}

ExtractionConfig load_extraction_config(const std::string& path) {
  if (path.empty()) return ExtractionConfig::standard();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  TaggingConfig tagging;
  if (doc.contains("tagging")) {
    tagging = TaggingConfig::from_json(doc.at("tagging").dump());
  }
  ExtractionConfig config;
  config.lexicon = tagging.lexicon();
  config.cleaning =
      doc.contains("cleaning")
          ? CleaningConfig::from_json(doc.at("cleaning").dump(), config.lexicon)
          : CleaningConfig::standard();
  return config;
}

// Merged graph input shared by the read-side commands.
struct GraphSource {
  std::string graph_file;
  std::string shards_dir;
};

void add_graph_source(CLI::App* cmd, GraphSource& source) {
  auto* file = cmd->add_option("-g,--graph", source.graph_file,
                               "Merged graph JSON file");
  auto* dir = cmd->add_option("--shards", source.shards_dir,
                              "Sharded graph store directory");
  file->excludes(dir);
  dir->excludes(file);
}

MergedGraph load_graph(const GraphSource& source) {
  if (!source.graph_file.empty()) {
    return MergedGraph::from_canonical_json(read_file(source.graph_file));
  }
  if (!source.shards_dir.empty()) {
    return load_shards(source.shards_dir);
  }
  throw std::runtime_error("provide --graph or --shards");
}

// Neighborhood parameters shared by query and export-dot.
struct QueryParams {
  std::string entity;
  int depth = 1;
  std::string direction = "out";
  std::string kind = "all";
  std::optional<std::size_t> limit;
  bool no_inferred = false;
};

void add_query_options(CLI::App* cmd, QueryParams& params, bool entity_required) {
  auto* entity = cmd->add_option("-e,--entity", params.entity,
                                 "Entity surface to look up");
  if (entity_required) entity->required();
  cmd->add_option("-d,--depth", params.depth, "Traversal depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--direction", params.direction, "Edge direction")
      ->check(CLI::IsMember({"out", "in", "both"}))
      ->capture_default_str();
  cmd->add_option("--kind", params.kind, "Fact kind filter")
      ->check(CLI::IsMember({"all", "hierarchical", "nonhierarchical"}))
      ->capture_default_str();
  cmd->add_option("--limit", params.limit, "Stop after this many facts");
  cmd->add_flag("--no-inferred", params.no_inferred,
                "Traverse extracted facts only");
}

NeighborhoodQuery to_query(const QueryParams& params) {
  NeighborhoodQuery query;
  query.entity = params.entity;
  query.depth = params.depth;
  query.direction = params.direction == "in"    ? Direction::In
                    : params.direction == "both" ? Direction::Both
                                                 : Direction::Out;
  query.kind = params.kind == "hierarchical"      ? KindFilter::Hierarchical
               : params.kind == "nonhierarchical" ? KindFilter::NonHierarchical
                                                   : KindFilter::All;
  query.limit = params.limit;
  query.include_inferred = !params.no_inferred;
  return query;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patent claim knowledge graph pipeline"};
  app.set_version_flag("--version", "patkg 0.1.0");
  app.require_subcommand(1);
  int exit_code = 0;

  // --- ingest ---------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Validate and shard a corpus");
  CorpusInput ingest_input;
  std::string ingest_out;
  std::size_t ingest_shard_size = 10000;
  add_corpus_options(ingest, ingest_input);
  ingest->add_option("-o,--out", ingest_out, "Output directory")->required();
  ingest->add_option("--shard-size", ingest_shard_size, "Records per shard")
      ->capture_default_str();
  ingest->callback([&] {
    check_output_dir(ingest_out, ingest_input.path);
    ParseResult result = read_corpus(ingest_input);
    std::size_t files =
        write_record_shards(result.records, ingest_out, ingest_shard_size);
    std::cerr << "ingest: " << result.records.size() << " records, "
              << result.errors.size() << " skipped, " << files
              << " shard files -> " << ingest_out << "\n";
    if (!result.errors.empty()) exit_code = 1;
  });

  // --- extract --------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "Extract per-patent graphs");
  CorpusInput extract_input;
  std::string extract_out;
  std::string extract_config;
  PipelineOptions pipeline_options;
  add_corpus_options(extract, extract_input);
  extract->add_option("-o,--out", extract_out, "Output directory")->required();
  extract->add_option("-j,--jobs", pipeline_options.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  extract
      ->add_option("--shard-size", pipeline_options.shard_size,
                   "Patents per shard")
      ->capture_default_str();
  extract->add_option("--config", extract_config,
                      "JSON file with cleaning/tagging settings")
      ->check(CLI::ExistingFile);
  extract->callback([&] {
    check_output_dir(extract_out, extract_input.path);
    pipeline_options.extraction = load_extraction_config(extract_config);
    ParseResult result = read_corpus(extract_input);
    ExtractSummary summary =
        run_extract(result.records, extract_out, pipeline_options);
    std::cerr << "extract: " << summary.patents << " patents, "
              << summary.claims << " claims, " << summary.facts << " facts, "
              << summary.shard_files << " shard files -> " << extract_out
              << "\n";
    if (!result.errors.empty()) exit_code = 1;
  });

  // --- merge ----------------------------------------------------------
  auto* merge = app.add_subcommand("merge", "Merge per-patent graph shards");
  std::string merge_in;
  std::string merge_out;
  std::string merge_store;
  std::size_t merge_shard_size = 10000;
  merge->add_option("--in", merge_in, "Extract output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  merge->add_option("-o,--out", merge_out,
                    "Write the merged graph as one JSON file ('-' = stdout)");
  merge->add_option("--store", merge_store,
                    "Write the merged graph as a sharded store");
  merge->add_option("--shard-size", merge_shard_size, "Facts per store shard")
      ->capture_default_str();
  merge->callback([&] {
    if (merge_out.empty() && merge_store.empty()) {
      throw std::runtime_error("provide --out and/or --store");
    }
    MergedGraph graph = merge_patent_shards(merge_in);
    if (!merge_out.empty()) {
      write_output(merge_out, graph.canonical_json() + "\n");
    }
    if (!merge_store.empty()) {
      save_shards(graph, merge_store, merge_shard_size);
    }
    std::cerr << "merge: " << graph.entity_count() << " entities, "
              << graph.fact_count() << " facts\n";
  });

  // --- infer ----------------------------------------------------------
  auto* infer = app.add_subcommand("infer", "Apply the containment rule");
  GraphSource infer_source;
  std::string infer_out;
  std::optional<int> infer_max_depth;
  std::vector<std::string> infer_scope;
  std::string infer_emit = "comprises";
  add_graph_source(infer, infer_source);
  infer->add_option("-o,--out", infer_out,
                    "Output graph JSON file ('-' = stdout)");
  infer->add_option("--max-depth", infer_max_depth,
                    "Cap on contributing path length");
  infer->add_option("--scope-label", infer_scope,
                    "Restrict the rule to these relation labels");
  infer->add_option("--emit-label", infer_emit, "Label for inferred facts")
      ->capture_default_str();
  infer->callback([&] {
    MergedGraph graph = load_graph(infer_source);
    RuleSpec spec;
    spec.max_depth = infer_max_depth;
    spec.emit_label = infer_emit;
    if (!infer_scope.empty()) {
      spec.relation_labels.emplace(infer_scope.begin(), infer_scope.end());
    }
    std::vector<Fact> inferred = transitive_closure(graph, spec);
    MergedGraph enriched = apply_inferred(graph, inferred);
    write_output(infer_out, enriched.canonical_json() + "\n");
    std::cerr << "infer: " << inferred.size() << " new facts, "
              << enriched.fact_count() << " total\n";
  });

  // --- query ----------------------------------------------------------
  auto* query = app.add_subcommand("query", "Neighborhood of an entity");
  GraphSource query_source;
  QueryParams query_params;
  std::optional<std::size_t> query_sample;
  std::optional<unsigned> query_seed;
  add_graph_source(query, query_source);
  add_query_options(query, query_params, /*entity_required=*/false);
  query->add_option("--sample", query_sample,
                    "Query this many randomly chosen entities instead");
  query->add_option("--seed", query_seed, "Random seed for --sample");
  query->callback([&] {
    MergedGraph graph = load_graph(query_source);
    std::vector<std::string> targets;
    if (query_sample) {
      if (!query_seed) {
        throw std::runtime_error("--sample requires --seed");
      }
      if (!query_params.entity.empty()) {
        throw std::runtime_error("--sample and --entity are exclusive");
      }
      std::vector<std::string> sorted = graph.entities();
      std::sort(sorted.begin(), sorted.end());
      std::mt19937 rng(*query_seed);
      std::sample(sorted.begin(), sorted.end(), std::back_inserter(targets),
                  *query_sample, rng);
    } else {
      if (query_params.entity.empty()) {
        throw std::runtime_error("provide --entity or --sample");
      }
      targets.push_back(query_params.entity);
    }
    for (const std::string& target : targets) {
      QueryParams params = query_params;
      params.entity = target;
      Subgraph subgraph = neighborhood(graph, to_query(params));
      std::cout << subgraph_to_json(subgraph) << "\n";
    }
  });

  // --- coverage -------------------------------------------------------
  auto* coverage_cmd = app.add_subcommand("coverage", "Score a term dictionary");
  GraphSource coverage_source;
  std::string coverage_terms;
  bool coverage_adjusted = false;
  bool coverage_json = false;
  add_graph_source(coverage_cmd, coverage_source);
  coverage_cmd->add_option("-t,--terms", coverage_terms, "CSV term,field file")
      ->required()
      ->check(CLI::ExistingFile);
  coverage_cmd->add_flag("--adjusted", coverage_adjusted,
                         "Match normalized terms too");
  coverage_cmd->add_flag("--json", coverage_json, "Emit JSON instead of a table");
  coverage_cmd->callback([&] {
    MergedGraph graph = load_graph(coverage_source);
    std::ifstream in(coverage_terms, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + coverage_terms);
    TermDictionary dict = TermDictionary::from_csv(in);
    CoverageReport report = coverage(dict, graph, coverage_adjusted);
    std::cout << (coverage_json ? coverage_report_json(report) + "\n"
                                : coverage_report_table(report));
    std::cerr << "coverage: " << report.total.checked << " terms, raw "
              << report.total.raw_found << ", adjusted "
              << report.total.adjusted_found << "\n";
  });

  // --- stats ----------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "Corpus graph statistics");
  GraphSource stats_source;
  add_graph_source(stats_cmd, stats_source);
  stats_cmd->callback([&] {
    std::cout << graph_stats_json(graph_stats(load_graph(stats_source))) << "\n";
  });

  // --- export-dot -----------------------------------------------------
  auto* dot = app.add_subcommand("export-dot", "Render a neighborhood as DOT");
  GraphSource dot_source;
  QueryParams dot_params;
  std::string dot_out;
  add_graph_source(dot, dot_source);
  add_query_options(dot, dot_params, /*entity_required=*/true);
  dot->add_option("-o,--out", dot_out, "Output file ('-' = stdout)");
  dot->callback([&] {
    MergedGraph graph = load_graph(dot_source);
    Subgraph subgraph = neighborhood(graph, to_query(dot_params));
    write_output(dot_out, export_dot(subgraph));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
