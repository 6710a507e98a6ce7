#include "patkg/graph_store.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace patkg {

namespace {

using nlohmann::json;

json provenance_to_json(const std::vector<Provenance>& provenance) {
  json rows = json::array();
  for (const Provenance& prov : provenance) {
    rows.push_back(json::array({prov.source_id, prov.claim_index}));
  }
  return rows;
}

std::vector<Provenance> provenance_from_json(const json& rows,
                                             const std::string& json_path) {
  if (!rows.is_array()) {
    throw SchemaError(json_path, "provenance must be an array");
  }
  std::vector<Provenance> provenance;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_string() ||
        !row[1].is_number_integer()) {
      throw SchemaError(json_path, "provenance entries must be [source, claim]");
    }
    provenance.push_back(Provenance{row[0].get<std::string>(), row[1].get<int>()});
  }
  return provenance;
}

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CorruptionError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_bytes(const std::filesystem::path& path,
                      const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

std::string hash_hex(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

std::string dot_escape(std::string_view text) {
  std::string escaped;
  escaped.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') escaped.push_back('\\');
    escaped.push_back(c);
  }
  return escaped;
}

}  // namespace

SchemaError::SchemaError(const std::string& json_path, const std::string& message)
    : std::runtime_error(json_path + ": " + message), json_path_(json_path) {}

CorruptionError::CorruptionError(const std::string& message)
    : std::runtime_error(message) {}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string patent_graph_to_json(const PatentGraph& graph) {
  json relationships = json::array();
  for (const Fact& fact : graph.facts) {
    // Only the claim numbers are stored; the patent id is the outer key.
    std::vector<int> claims;
    for (const Provenance& prov : fact.provenance) {
      claims.push_back(prov.claim_index);
    }
    std::sort(claims.begin(), claims.end());
    claims.erase(std::unique(claims.begin(), claims.end()), claims.end());
    relationships.push_back(json::array({fact.head, fact.relation, fact.tail,
                                         fact_kind_name(fact.kind), claims}));
  }
  json body;
  body["entities"] = graph.entities;
  body["relationships"] = std::move(relationships);
  json doc;
  doc[graph.patent_id] = std::move(body);
  return doc.dump();
}

PatentGraph patent_graph_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!doc.is_object() || doc.size() != 1) {
    throw SchemaError("$", "expected one object keyed by patent id");
  }
  PatentGraph graph;
  auto item = doc.begin();
  graph.patent_id = item.key();
  const json& body = item.value();
  const std::string base = "$." + graph.patent_id;
  if (!body.is_object()) {
    throw SchemaError(base, "patent body must be an object");
  }
  if (!body.contains("entities") || !body.at("entities").is_array()) {
    throw SchemaError(base + ".entities", "missing or not an array");
  }
  for (std::size_t i = 0; i < body.at("entities").size(); ++i) {
    const json& entity = body.at("entities")[i];
    if (!entity.is_string()) {
      throw SchemaError(base + ".entities[" + std::to_string(i) + "]",
                        "entity must be a string");
    }
    graph.entities.push_back(entity.get<std::string>());
  }
  if (!body.contains("relationships") || !body.at("relationships").is_array()) {
    throw SchemaError(base + ".relationships", "missing or not an array");
  }
  for (std::size_t i = 0; i < body.at("relationships").size(); ++i) {
    const std::string path = base + ".relationships[" + std::to_string(i) + "]";
    const json& row = body.at("relationships")[i];
    if (!row.is_array() || row.size() != 5 || !row[0].is_string() ||
        !row[1].is_string() || !row[2].is_string() || !row[3].is_string() ||
        !row[4].is_array()) {
      throw SchemaError(path,
                        "expected [head, relation, tail, kind, claim list]");
    }
    std::optional<FactKind> kind = fact_kind_from_name(row[3].get<std::string>());
    if (!kind) {
      throw SchemaError(path + "[3]",
                        "unknown kind '" + row[3].get<std::string>() + "'");
    }
    Fact fact;
    fact.head = row[0].get<std::string>();
    fact.relation = row[1].get<std::string>();
    fact.tail = row[2].get<std::string>();
    fact.kind = *kind;
    for (const json& claim : row[4]) {
      if (!claim.is_number_integer()) {
        throw SchemaError(path + "[4]", "claim indices must be integers");
      }
      fact.provenance.push_back(Provenance{graph.patent_id, claim.get<int>()});
    }
    graph.facts.push_back(std::move(fact));
  }
  return graph;
}

MergedGraph MergedGraph::merge(const std::vector<PatentGraph>& graphs) {
  MergedGraph merged;
  for (const PatentGraph& graph : graphs) {
    merged.add_patent(graph);
  }
  return merged;
}

void MergedGraph::add_patent(const PatentGraph& graph) {
  set_patent_year(graph.patent_id, graph.year);
  // Entities are interned even when no fact touches them, so isolated
  // entities survive the merge.
  for (const std::string& entity : graph.entities) {
    intern_entity(entity);
  }
  for (const Fact& fact : graph.facts) {
    add_fact(fact.head, fact.relation, fact.tail, fact.kind, fact.inferred,
             fact.provenance);
  }
}

std::uint32_t MergedGraph::intern_entity(std::string_view surface) {
  auto it = entity_ids_.find(std::string(surface));
  if (it != entity_ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(entities_.size());
  entities_.emplace_back(surface);
  entity_ids_.emplace(entities_.back(), id);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

void MergedGraph::add_fact(std::string_view head, std::string_view relation,
                           std::string_view tail, FactKind kind, bool inferred,
                           const std::vector<Provenance>& provenance) {
  std::uint32_t head_id = intern_entity(head);
  std::uint32_t tail_id = intern_entity(tail);
  auto key = std::make_tuple(head_id, std::string(relation), tail_id, kind);
  auto it = fact_index_.find(key);
  if (it == fact_index_.end()) {
    MergedFact fact;
    fact.head = head_id;
    fact.tail = tail_id;
    fact.relation = relation;
    fact.kind = kind;
    fact.inferred = inferred;
    fact.provenance = provenance;
    std::sort(fact.provenance.begin(), fact.provenance.end());
    fact.provenance.erase(
        std::unique(fact.provenance.begin(), fact.provenance.end()),
        fact.provenance.end());
    auto index = static_cast<std::uint32_t>(facts_.size());
    facts_.push_back(std::move(fact));
    out_[head_id].push_back(index);
    in_[tail_id].push_back(index);
    fact_index_.emplace(std::move(key), index);
    return;
  }
  MergedFact& existing = facts_[it->second];
  // Extraction evidence outranks an inference of the same triple.
  if (!inferred) existing.inferred = false;
  existing.provenance.insert(existing.provenance.end(), provenance.begin(),
                             provenance.end());
  std::sort(existing.provenance.begin(), existing.provenance.end());
  existing.provenance.erase(
      std::unique(existing.provenance.begin(), existing.provenance.end()),
      existing.provenance.end());
}

void MergedGraph::set_patent_year(const std::string& patent_id,
                                  std::optional<int> year) {
  auto [it, inserted] = patent_years_.emplace(patent_id, year);
  if (inserted) return;
  // Keep a known year over an unknown one; on conflict keep the smaller so
  // the outcome does not depend on merge order.
  if (!it->second) {
    it->second = year;
  } else if (year && *year < *it->second) {
    it->second = year;
  }
}

std::optional<std::uint32_t> MergedGraph::find_entity(
    std::string_view surface) const {
  auto it = entity_ids_.find(std::string(surface));
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::uint32_t>& MergedGraph::outgoing(std::uint32_t id) const {
  return out_.at(id);
}

const std::vector<std::uint32_t>& MergedGraph::incoming(std::uint32_t id) const {
  return in_.at(id);
}

namespace {

// Shared by canonical_json and save_shards so both emit facts in one order.
std::vector<std::size_t> canonical_fact_order(const MergedGraph& graph) {
  std::vector<std::size_t> order(graph.fact_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& facts = graph.facts();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const MergedFact& fa = facts[a];
    const MergedFact& fb = facts[b];
    return std::tie(graph.entity(fa.head), fa.relation, graph.entity(fa.tail),
                    fa.kind, fa.inferred) <
           std::tie(graph.entity(fb.head), fb.relation, graph.entity(fb.tail),
                    fb.kind, fb.inferred);
  });
  return order;
}

json merged_fact_to_json(const MergedGraph& graph, const MergedFact& fact) {
  return json::array({graph.entity(fact.head), fact.relation,
                      graph.entity(fact.tail), fact_kind_name(fact.kind),
                      fact.inferred, provenance_to_json(fact.provenance)});
}

void add_fact_row(MergedGraph& graph, const json& row,
                  const std::string& context) {
  if (!row.is_array() || row.size() != 6 || !row[0].is_string() ||
      !row[1].is_string() || !row[2].is_string() || !row[3].is_string() ||
      !row[4].is_boolean()) {
    throw SchemaError(context,
                      "expected [head, relation, tail, kind, inferred, prov]");
  }
  std::optional<FactKind> kind = fact_kind_from_name(row[3].get<std::string>());
  if (!kind) {
    throw SchemaError(context, "unknown kind '" + row[3].get<std::string>() + "'");
  }
  graph.add_fact(row[0].get<std::string>(), row[1].get<std::string>(),
                 row[2].get<std::string>(), *kind, row[4].get<bool>(),
                 provenance_from_json(row[5], context));
}

}  // namespace

std::string MergedGraph::canonical_json() const {
  std::vector<std::string> sorted_entities = entities_;
  std::sort(sorted_entities.begin(), sorted_entities.end());

  json facts = json::array();
  for (std::size_t index : canonical_fact_order(*this)) {
    facts.push_back(merged_fact_to_json(*this, facts_[index]));
  }

  json patents = json::array();
  for (const auto& [patent_id, year] : patent_years_) {
    patents.push_back(json::array({patent_id, year ? json(*year) : json()}));
  }

  json doc;
  doc["entities"] = std::move(sorted_entities);
  doc["facts"] = std::move(facts);
  doc["patents"] = std::move(patents);
  return doc.dump();
}

MergedGraph MergedGraph::from_canonical_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  MergedGraph graph;
  if (doc.contains("entities")) {
    for (const json& entity : doc.at("entities")) {
      if (!entity.is_string()) {
        throw SchemaError("$.entities", "entity must be a string");
      }
      graph.intern_entity(entity.get<std::string>());
    }
  }
  if (doc.contains("patents")) {
    for (const json& row : doc.at("patents")) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_string()) {
        throw SchemaError("$.patents", "expected [patent_id, year|null]");
      }
      std::optional<int> year;
      if (!row[1].is_null()) {
        if (!row[1].is_number_integer()) {
          throw SchemaError("$.patents", "year must be an integer or null");
        }
        year = row[1].get<int>();
      }
      graph.set_patent_year(row[0].get<std::string>(), year);
    }
  }
  if (doc.contains("facts")) {
    const json& rows = doc.at("facts");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      add_fact_row(graph, rows[i], "$.facts[" + std::to_string(i) + "]");
    }
  }
  return graph;
}

Subgraph neighborhood(const MergedGraph& graph, const NeighborhoodQuery& query) {
  Subgraph result;
  result.center = query.entity;

  std::optional<std::uint32_t> center = graph.find_entity(query.entity);
  if (!center) return result;
  result.found = true;
  result.nodes.push_back(graph.entity(*center));

  std::vector<bool> seen_node(graph.entity_count(), false);
  std::vector<bool> seen_fact(graph.fact_count(), false);
  seen_node[*center] = true;

  auto kind_passes = [&](const MergedFact& fact) {
    switch (query.kind) {
      case KindFilter::Hierarchical:
        return fact.kind == FactKind::Hierarchical;
      case KindFilter::NonHierarchical:
        return fact.kind == FactKind::NonHierarchical;
      case KindFilter::All:
        break;
    }
    return true;
  };

  std::vector<std::uint32_t> frontier{*center};
  for (int level = 0; level < query.depth && !frontier.empty(); ++level) {
    std::vector<std::uint32_t> next;
    bool added_this_level = false;
    for (std::uint32_t node : frontier) {
      std::vector<std::uint32_t> fact_ids;
      if (query.direction != Direction::In) {
        const auto& out = graph.outgoing(node);
        fact_ids.insert(fact_ids.end(), out.begin(), out.end());
      }
      if (query.direction != Direction::Out) {
        const auto& in = graph.incoming(node);
        fact_ids.insert(fact_ids.end(), in.begin(), in.end());
      }
      for (std::uint32_t fact_id : fact_ids) {
        if (seen_fact[fact_id]) continue;
        const MergedFact& fact = graph.facts()[fact_id];
        if (!kind_passes(fact)) continue;
        if (!query.include_inferred && fact.inferred) continue;
        if (query.limit && result.facts.size() >= *query.limit) {
          result.truncated = true;
          return result;
        }
        seen_fact[fact_id] = true;
        result.facts.push_back(Fact{graph.entity(fact.head), fact.relation,
                                    graph.entity(fact.tail), fact.kind,
                                    fact.inferred, fact.provenance});
        added_this_level = true;
        for (std::uint32_t endpoint : {fact.head, fact.tail}) {
          if (!seen_node[endpoint]) {
            seen_node[endpoint] = true;
            result.nodes.push_back(graph.entity(endpoint));
            next.push_back(endpoint);
          }
        }
      }
    }
    if (added_this_level) result.depth_reached = level + 1;
    frontier = std::move(next);
  }
  return result;
}

std::string subgraph_to_json(const Subgraph& subgraph) {
  json facts = json::array();
  for (const Fact& fact : subgraph.facts) {
    facts.push_back(json::array({fact.head, fact.relation, fact.tail,
                                 fact_kind_name(fact.kind), fact.inferred,
                                 provenance_to_json(fact.provenance)}));
  }
  json doc;
  doc["center"] = subgraph.center;
  doc["found"] = subgraph.found;
  doc["depth_reached"] = subgraph.depth_reached;
  doc["truncated"] = subgraph.truncated;
  doc["nodes"] = subgraph.nodes;
  doc["facts"] = std::move(facts);
  return doc.dump();
}

std::string export_dot(const Subgraph& subgraph) {
  std::ostringstream out;
  out << "// neighborhood of \"" << subgraph.center << "\"\n";
  out << "// depth reached " << subgraph.depth_reached
      << (subgraph.truncated ? ", truncated" : "") << "\n";
  out << "digraph neighborhood {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=filled, fillcolor=\"#e8eef7\"];\n";
  for (const std::string& node : subgraph.nodes) {
    out << "  \"" << dot_escape(node) << "\"";
    if (subgraph.found && node == subgraph.center) {
      out << " [fillcolor=\"#f7c873\"]";  // center stands out
    }
    out << ";\n";
  }
  for (const Fact& fact : subgraph.facts) {
    out << "  \"" << dot_escape(fact.head) << "\" -> \""
        << dot_escape(fact.tail) << "\" [label=\"" << dot_escape(fact.relation)
        << "\", color=\""
        << (fact.kind == FactKind::Hierarchical ? "#2b6e4f" : "#8a8a8a")
        << "\"";
    if (fact.inferred) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

void save_shards(const MergedGraph& graph, const std::filesystem::path& dir,
                 std::size_t shard_size) {
  if (shard_size == 0) shard_size = 1;
  std::filesystem::create_directories(dir);

  // Facts are routed to the earliest application year among their provenance
  // patents; facts with no dated provenance go under "unknown".
  const auto& years = graph.patent_years();
  auto year_key_for = [&](const MergedFact& fact) -> std::string {
    std::optional<int> best;
    for (const Provenance& prov : fact.provenance) {
      auto it = years.find(prov.source_id);
      if (it == years.end() || !it->second) continue;
      if (!best || *it->second < *best) best = *it->second;
    }
    return best ? std::to_string(*best) : std::string("unknown");
  };

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t index : canonical_fact_order(graph)) {
    groups[year_key_for(graph.facts()[index])].push_back(index);
  }

  std::map<std::string, std::string> files;  // relative path -> content

  {
    std::vector<std::string> sorted_entities = graph.entities();
    std::sort(sorted_entities.begin(), sorted_entities.end());
    std::ostringstream lines;
    for (const std::string& entity : sorted_entities) {
      lines << json(entity).dump() << "\n";
    }
    files["entities.jsonl"] = lines.str();
  }
  {
    std::ostringstream lines;
    for (const auto& [patent_id, year] : years) {
      lines << json::array({patent_id, year ? json(*year) : json()}).dump()
            << "\n";
    }
    files["patents.jsonl"] = lines.str();
  }
  for (const auto& [year_key, fact_indices] : groups) {
    int chunk = 0;
    for (std::size_t start = 0; start < fact_indices.size();
         start += shard_size, ++chunk) {
      std::size_t stop = std::min(start + shard_size, fact_indices.size());
      std::ostringstream lines;
      for (std::size_t i = start; i < stop; ++i) {
        lines << merged_fact_to_json(graph, graph.facts()[fact_indices[i]]).dump()
              << "\n";
      }
      files[year_key + "/" + std::to_string(chunk) + ".jsonl"] = lines.str();
    }
  }

  json manifest;
  manifest["version"] = 1;
  manifest["shard_size"] = shard_size;
  manifest["entity_count"] = graph.entity_count();
  manifest["fact_count"] = graph.fact_count();
  json file_list = json::array();
  for (const auto& [relative, content] : files) {
    std::filesystem::path path = dir / relative;
    std::filesystem::create_directories(path.parent_path());
    write_file_bytes(path, content);
    file_list.push_back(
        json{{"path", relative}, {"hash", hash_hex(fnv1a64(content))}});
  }
  manifest["files"] = std::move(file_list);
  write_file_bytes(dir / "manifest.json", manifest.dump(2) + "\n");
}

MergedGraph load_shards(const std::filesystem::path& dir) {
  std::filesystem::path manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw CorruptionError("missing " + manifest_path.string());
  }
  json manifest;
  try {
    manifest = json::parse(read_file_bytes(manifest_path));
  } catch (const json::parse_error& e) {
    throw CorruptionError(manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("files") || !manifest.at("files").is_array()) {
    throw CorruptionError(manifest_path.string() + ": missing file list");
  }

  std::map<std::string, std::string> files;
  for (const json& entry : manifest.at("files")) {
    if (!entry.is_object() || !entry.contains("path") ||
        !entry.contains("hash")) {
      throw CorruptionError(manifest_path.string() + ": malformed file entry");
    }
    std::string relative = entry.at("path").get<std::string>();
    std::filesystem::path path = dir / relative;
    if (!std::filesystem::exists(path)) {
      throw CorruptionError("missing " + path.string());
    }
    std::string content = read_file_bytes(path);
    if (hash_hex(fnv1a64(content)) != entry.at("hash").get<std::string>()) {
      throw CorruptionError("hash mismatch in " + path.string());
    }
    files.emplace(std::move(relative), std::move(content));
  }

  MergedGraph graph;
  auto for_each_line = [](const std::string& content, auto&& handle) {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) handle(line, line_no);
    }
  };

  if (auto it = files.find("entities.jsonl"); it != files.end()) {
    for_each_line(it->second, [&](const std::string& line, std::size_t n) {
      json value = json::parse(line);
      if (!value.is_string()) {
        throw SchemaError("entities.jsonl:" + std::to_string(n),
                          "entity must be a string");
      }
      graph.intern_entity(value.get<std::string>());
    });
  }
  if (auto it = files.find("patents.jsonl"); it != files.end()) {
    for_each_line(it->second, [&](const std::string& line, std::size_t n) {
      json row = json::parse(line);
      if (!row.is_array() || row.size() != 2 || !row[0].is_string()) {
        throw SchemaError("patents.jsonl:" + std::to_string(n),
                          "expected [patent_id, year|null]");
      }
      std::optional<int> year;
      if (!row[1].is_null()) year = row[1].get<int>();
      graph.set_patent_year(row[0].get<std::string>(), year);
    });
  }
  for (const auto& [relative, content] : files) {
    if (relative == "entities.jsonl" || relative == "patents.jsonl") continue;
    for_each_line(content, [&](const std::string& line, std::size_t n) {
      add_fact_row(graph, json::parse(line),
                   relative + ":" + std::to_string(n));
    });
  }
  return graph;
}

}  // namespace patkg
