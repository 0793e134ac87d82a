#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tifsem/graph.hpp"
#include "tifsem/ontology.hpp"

namespace tifsem {

enum class MappingRelation { EquivalentClass, SubClassOf, EquivalentProperty, SubPropertyOf };

std::string_view to_string(MappingRelation relation);
// Exact, case-sensitive names only.
std::optional<MappingRelation> relation_from_string(std::string_view name);
bool is_class_relation(MappingRelation relation);

// One alignment edge from a TIFSem term to a Schema.org term. IRIs are
// absolute.
struct MappingRule {
  std::string source;
  std::string target;
  MappingRelation relation;

  friend auto operator<=>(const MappingRule&, const MappingRule&) = default;
};

struct MappingReport {
  std::size_t inferred_triples = 0;
  // TIFSem classes used as node types, and TIFSem predicates, that no rule
  // has as source.
  std::set<std::string> unmapped_sources;
  std::vector<std::string> inconsistencies;  // check_consistency(rules)
};

// The granule-to-Schema.org alignment table plus the geolocation property
// alignments.
std::vector<MappingRule> builtin_rules();

// Every type a node of class `source` acquires under `rules` (following
// equivalences both ways and chains), excluding `source` itself.
std::set<std::string> target_classes(std::string_view source,
                                     const std::vector<MappingRule>& rules = builtin_rules());

// JSON array of {"source", "target", "relation"}. IRIs may be absolute or
// compact ("tifsem:Prices", "schema:Offer") and must be known to `snapshot`.
// Throws RuleError naming the offending entry.
std::vector<MappingRule> load_rules(std::string_view json_text,
                                    const OntologySnapshot& snapshot = load_core_ontology());
// Compact IRIs, one object per rule, in the given order.
std::string save_rules(const std::vector<MappingRule>& rules);

// `base` followed by the rules of `extra` that are not already in it.
std::vector<MappingRule> merge_rules(std::vector<MappingRule> base, const std::vector<MappingRule>& extra);

// Writes every type and property triple implied by the rules, to a fixed
// point. Equivalences apply in both directions; subclass and subproperty
// rules only from source to target.
MappingReport materialize(Graph& graph, const std::vector<MappingRule>& rules);

// Entries, each on one line:
//   "mismatch: <relation> <source> -> <target>: <reason>"
//   "no granule: <source>"   (source is not a granule class or field property)
//   "lacking: <GranuleKind>"  (granule kinds no class rule starts from)
std::vector<std::string> check_consistency(const std::vector<MappingRule>& rules,
                                           const OntologySnapshot& snapshot = load_core_ontology());

// Granule kinds without a class rule whose source is their class.
std::vector<GranuleKind> lacking_granules(const std::vector<MappingRule>& rules);

}  // namespace tifsem
