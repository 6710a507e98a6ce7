#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "patkg/fact_extraction.hpp"

namespace patkg {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& json_path, const std::string& message);
  const std::string& json_path() const { return json_path_; }

 private:
  std::string json_path_;
};

class CorruptionError : public std::runtime_error {
 public:
  explicit CorruptionError(const std::string& message);
};

// Canonical per-patent layout:
//   {"<patent_id>": {"entities": [...],
//                    "relationships": [[head, relation, tail,
//                                       "hierarchical"|"nonhierarchical",
//                                       [claim indices]], ...]}}
// Entities keep first-occurrence order, facts keep extraction order.
std::string patent_graph_to_json(const PatentGraph& graph);
PatentGraph patent_graph_from_json(std::string_view text);  // throws SchemaError

// A fact over interned entity ids.
struct MergedFact {
  std::uint32_t head = 0;
  std::uint32_t tail = 0;
  std::string relation;
  FactKind kind = FactKind::NonHierarchical;
  bool inferred = false;
  std::vector<Provenance> provenance;  // sorted, unique
};

// Corpus-level graph: entities merge on exact string identity, facts on
// (head, relation, tail, kind). Built once, then immutable for queries.
class MergedGraph {
 public:
  MergedGraph() = default;

  static MergedGraph merge(const std::vector<PatentGraph>& graphs);

  void add_patent(const PatentGraph& graph);
  std::uint32_t intern_entity(std::string_view surface);
  // Merges provenance into an existing fact when the key already exists.
  // An extracted duplicate clears the inferred flag.
  void add_fact(std::string_view head, std::string_view relation,
                std::string_view tail, FactKind kind, bool inferred,
                const std::vector<Provenance>& provenance);
  void set_patent_year(const std::string& patent_id, std::optional<int> year);

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t fact_count() const { return facts_.size(); }
  const std::string& entity(std::uint32_t id) const { return entities_[id]; }
  const std::vector<std::string>& entities() const { return entities_; }
  std::optional<std::uint32_t> find_entity(std::string_view surface) const;
  const std::vector<MergedFact>& facts() const { return facts_; }
  const std::vector<std::uint32_t>& outgoing(std::uint32_t id) const;
  const std::vector<std::uint32_t>& incoming(std::uint32_t id) const;
  const std::map<std::string, std::optional<int>>& patent_years() const {
    return patent_years_;
  }

  // Order-independent serialization: entities sorted lexicographically, facts
  // sorted by (head, relation, tail, kind, inferred), provenance sorted.
  // Byte-identical for graphs that are equal as sets.
  std::string canonical_json() const;
  static MergedGraph from_canonical_json(std::string_view text);

 private:
  std::vector<std::string> entities_;
  std::unordered_map<std::string, std::uint32_t> entity_ids_;
  std::vector<MergedFact> facts_;
  std::map<std::tuple<std::uint32_t, std::string, std::uint32_t, FactKind>,
           std::size_t>
      fact_index_;
  std::vector<std::vector<std::uint32_t>> out_;  // entity id -> fact indices
  std::vector<std::vector<std::uint32_t>> in_;
  std::map<std::string, std::optional<int>> patent_years_;
};

enum class Direction { Out, In, Both };
enum class KindFilter { All, Hierarchical, NonHierarchical };

struct NeighborhoodQuery {
  std::string entity;
  int depth = 1;
  Direction direction = Direction::Out;
  KindFilter kind = KindFilter::All;
  std::optional<std::size_t> limit;
  bool include_inferred = true;
};

struct Subgraph {
  std::string center;
  bool found = false;
  int depth_reached = 0;
  bool truncated = false;
  std::vector<std::string> nodes;  // center first, then discovery order
  std::vector<Fact> facts;
};

// Breadth-first expansion from the exact-match node. Absence of the query
// string is a result (found=false), not an error. Fully deterministic,
// including under a limit.
Subgraph neighborhood(const MergedGraph& graph, const NeighborhoodQuery& query);

std::string subgraph_to_json(const Subgraph& subgraph);

// DOT digraph with the four display roles: center node, entity node,
// hierarchical edge, non-hierarchical edge. Inferred edges are dashed.
std::string export_dot(const Subgraph& subgraph);

// Sharded persistence under a directory:
//   manifest.json          file list with content hashes
//   entities.jsonl         every entity surface, sorted
//   patents.jsonl          [patent_id, year|null] pairs, sorted
//   <year>/<index>.jsonl   fact rows, grouped by provenance year
// Round-trips losslessly; load verifies hashes and throws CorruptionError
// naming the damaged file.
void save_shards(const MergedGraph& graph, const std::filesystem::path& dir,
                 std::size_t shard_size = 10000);
MergedGraph load_shards(const std::filesystem::path& dir);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace patkg
