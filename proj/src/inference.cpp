#include "patkg/inference.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <tuple>

#include "patkg/text_util.hpp"

namespace patkg {

namespace {

bool fact_in_scope(const MergedFact& fact, const RuleSpec& spec,
                   const HierarchyLexicon& lexicon) {
  if (spec.relation_labels) {
    return spec.relation_labels->count(fact.relation) > 0 ||
           fact.relation == spec.emit_label;
  }
  if (fact.kind == FactKind::Hierarchical) return true;
  if (fact.relation == spec.emit_label) return true;
  // Multi-verb labels like "is comprising" count when any token is a
  // hierarchy word, mirroring how extraction classifies them.
  for (const std::string& token : split_whitespace(fact.relation)) {
    if (lexicon.contains(token)) return true;
  }
  return false;
}

}  // namespace

std::vector<Fact> transitive_closure(const MergedGraph& graph,
                                     const RuleSpec& spec,
                                     const HierarchyLexicon& lexicon) {
  std::vector<Fact> inferred;
  if (spec.max_depth && *spec.max_depth < 2) return inferred;

  const std::size_t n = graph.entity_count();
  std::vector<std::vector<std::uint32_t>> succ(n);
  for (const MergedFact& fact : graph.facts()) {
    if (fact_in_scope(fact, spec, lexicon)) {
      succ[fact.head].push_back(fact.tail);
    }
  }
  for (auto& list : succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  // Per-source BFS over the scoped edges. A target qualifies when its
  // shortest scoped distance is at least 2: pairs joined by a direct edge
  // are subtracted by the rule anyway, and the source itself never qualifies.
  std::vector<int> dist(n);
  std::deque<std::uint32_t> queue;
  const int cap = spec.max_depth ? *spec.max_depth : -1;

  for (std::uint32_t source = 0; source < n; ++source) {
    if (succ[source].empty()) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[source] = 0;
    queue.assign(1, source);
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      if (cap >= 0 && dist[u] >= cap) continue;
      for (std::uint32_t v : succ[u]) {
        if (dist[v] == -1) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::uint32_t target = 0; target < n; ++target) {
      if (dist[target] >= 2) {
        inferred.push_back(Fact{graph.entity(source), spec.emit_label,
                                graph.entity(target), FactKind::Hierarchical,
                                true,
                                {Provenance{kInferenceRuleId, 0}}});
      }
    }
  }

  std::sort(inferred.begin(), inferred.end(),
            [](const Fact& a, const Fact& b) {
              return std::tie(a.head, a.tail) < std::tie(b.head, b.tail);
            });
  return inferred;
}

MergedGraph apply_inferred(const MergedGraph& graph,
                           const std::vector<Fact>& inferred) {
  MergedGraph result = graph;
  for (const Fact& fact : inferred) {
    if (!result.find_entity(fact.head)) {
      throw std::invalid_argument("inferred fact names unknown entity '" +
                                  fact.head + "'");
    }
    if (!result.find_entity(fact.tail)) {
      throw std::invalid_argument("inferred fact names unknown entity '" +
                                  fact.tail + "'");
    }
    result.add_fact(fact.head, fact.relation, fact.tail, fact.kind,
                    fact.inferred, fact.provenance);
  }
  return result;
}

}  // namespace patkg
