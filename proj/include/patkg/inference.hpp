#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "patkg/graph_store.hpp"

namespace patkg {

// Scope and output shape of the transitive containment rule.
struct RuleSpec {
  // When unset, scope is every hierarchical-kind fact. When set, scope is the
  // listed relation labels; the emit label is always treated as in scope so
  // that re-running the rule on its own output is a fixed point.
  std::optional<std::set<std::string>> relation_labels;
  std::optional<int> max_depth;  // cap on contributing path length
  std::string emit_label = "comprises";
};

inline constexpr const char* kInferenceRuleId = "rule:eq1";

// Facts in the least fixed point of the containment rule that are not already
// present: exactly the (x, z) pairs joined by a scoped path of length >= 2,
// minus existing scoped edges and reflexive pairs. Results carry
// inferred=true, the emit label, and rule provenance; sorted by (head, tail).
std::vector<Fact> transitive_closure(
    const MergedGraph& graph, const RuleSpec& spec = {},
    const HierarchyLexicon& lexicon = HierarchyLexicon::standard());

// Base graph plus the given inferred facts. Base facts are untouched;
// a fact naming an entity absent from the graph is rejected with
// std::invalid_argument. Applying a closure then re-closing yields nothing.
MergedGraph apply_inferred(const MergedGraph& graph,
                           const std::vector<Fact>& inferred);

}  // namespace patkg
