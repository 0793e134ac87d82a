#include "tifsem/mapping.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <nlohmann/json.hpp>

#include "tifsem/errors.hpp"
#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

std::string compact(const std::string& iri) {
  if (iri.starts_with(vocab::kTifsemNs)) return "tifsem:" + iri.substr(vocab::kTifsemNs.size());
  if (iri.starts_with(vocab::kSchemaNs)) return "schema:" + iri.substr(vocab::kSchemaNs.size());
  return iri;
}

std::string expand(const std::string& name) {
  if (name.starts_with("tifsem:")) return vocab::tifsem(std::string_view(name).substr(7));
  if (name.starts_with("schema:")) return vocab::schema(std::string_view(name).substr(7));
  return name;
}

// source -> targets, with equivalences mirrored.
using Edges = std::map<std::string, std::vector<std::string>, std::less<>>;

void add_edge(Edges& edges, const std::string& from, const std::string& to) {
  auto& list = edges[from];
  if (std::find(list.begin(), list.end(), to) == list.end()) list.push_back(to);
}

std::pair<Edges, Edges> edges_of(const std::vector<MappingRule>& rules) {
  Edges classes;
  Edges properties;
  for (const auto& r : rules) {
    Edges& e = is_class_relation(r.relation) ? classes : properties;
    add_edge(e, r.source, r.target);
    if (r.relation == MappingRelation::EquivalentClass || r.relation == MappingRelation::EquivalentProperty) {
      add_edge(e, r.target, r.source);
    }
  }
  return {std::move(classes), std::move(properties)};
}

}  // namespace

std::string_view to_string(MappingRelation relation) {
  switch (relation) {
    case MappingRelation::EquivalentClass: return "EquivalentClass";
    case MappingRelation::SubClassOf: return "SubClassOf";
    case MappingRelation::EquivalentProperty: return "EquivalentProperty";
    case MappingRelation::SubPropertyOf: return "SubPropertyOf";
  }
  return "?";
}

std::optional<MappingRelation> relation_from_string(std::string_view name) {
  for (auto r : {MappingRelation::EquivalentClass, MappingRelation::SubClassOf, MappingRelation::EquivalentProperty,
                 MappingRelation::SubPropertyOf}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

bool is_class_relation(MappingRelation relation) {
  return relation == MappingRelation::EquivalentClass || relation == MappingRelation::SubClassOf;
}

std::vector<MappingRule> builtin_rules() {
  using R = MappingRelation;
  auto cls = [](GranuleKind k, std::string_view target, R rel) {
    return MappingRule{class_of(k), vocab::schema(target), rel};
  };
  return {
      cls(GranuleKind::Multimedia, "MediaObject", R::EquivalentClass),
      cls(GranuleKind::Classifications, "Rating", R::EquivalentClass),
      cls(GranuleKind::Contacts, "ContactPoint", R::EquivalentClass),
      cls(GranuleKind::LegalInformation, "Organization", R::EquivalentClass),
      cls(GranuleKind::Languages, "Language", R::EquivalentClass),
      cls(GranuleKind::Geolocations, "Place", R::EquivalentClass),
      cls(GranuleKind::ReservationModes, "Reservation", R::EquivalentClass),
      cls(GranuleKind::ReservationModes, "LodgingReservation", R::SubClassOf),
      cls(GranuleKind::Prices, "Offer", R::EquivalentClass),
      cls(GranuleKind::Prices, "PriceSpecification", R::SubClassOf),
      {vocab::tifsem("addressLine1"), vocab::schema("address"), R::SubPropertyOf},
      {vocab::kLatitude, vocab::kSchemaLatitude, R::EquivalentProperty},
      {vocab::kLongitude, vocab::kSchemaLongitude, R::EquivalentProperty},
  };
}

std::set<std::string> target_classes(std::string_view source, const std::vector<MappingRule>& rules) {
  const Edges classes = edges_of(rules).first;
  std::set<std::string> seen{std::string(source)};
  std::deque<std::string> todo{std::string(source)};
  while (!todo.empty()) {
    const std::string c = todo.front();
    todo.pop_front();
    if (auto it = classes.find(c); it != classes.end()) {
      for (const auto& t : it->second) {
        if (seen.insert(t).second) todo.push_back(t);
      }
    }
  }
  seen.erase(std::string(source));
  return seen;
}

std::vector<MappingRule> load_rules(std::string_view json_text, const OntologySnapshot& snapshot) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleError(std::string("rules document is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RuleError("rules document must be a JSON array");
  std::vector<MappingRule> rules;
  std::set<MappingRule> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    const std::string where = "rule " + std::to_string(i + 1);
    if (!entry.is_object()) throw RuleError(where + ": expected an object");
    for (const auto& [key, value] : entry.items()) {
      if (key != "source" && key != "target" && key != "relation") {
        throw RuleError(where + ": unknown key '" + key + "'");
      }
      if (!value.is_string()) throw RuleError(where + ": '" + key + "' must be a string");
    }
    for (const char* key : {"source", "target", "relation"}) {
      if (!entry.contains(key)) throw RuleError(where + ": missing '" + key + "'");
    }
    const std::string relation_name = entry["relation"].get<std::string>();
    const auto relation = relation_from_string(relation_name);
    if (!relation) {
      throw RuleError(where + ": unknown relation '" + relation_name +
                      "' (expected EquivalentClass, SubClassOf, EquivalentProperty or SubPropertyOf)");
    }
    MappingRule rule{expand(entry["source"].get<std::string>()), expand(entry["target"].get<std::string>()),
                     *relation};
    for (const std::string* iri : {&rule.source, &rule.target}) {
      if (!snapshot.has_class(*iri) && !snapshot.has_property(*iri)) {
        throw RuleError(where + ": '" + *iri + "' is not a known class or property");
      }
    }
    if (!seen.insert(rule).second) {
      throw RuleError(where + ": duplicate rule " + compact(rule.source) + " " + relation_name + " " +
                      compact(rule.target));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string save_rules(const std::vector<MappingRule>& rules) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json entry;
    entry["source"] = compact(r.source);
    entry["target"] = compact(r.target);
    entry["relation"] = std::string(to_string(r.relation));
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::vector<MappingRule> merge_rules(std::vector<MappingRule> base, const std::vector<MappingRule>& extra) {
  std::set<MappingRule> seen(base.begin(), base.end());
  for (const auto& r : extra) {
    if (seen.insert(r).second) base.push_back(r);
  }
  return base;
}

MappingReport materialize(Graph& graph, const std::vector<MappingRule>& rules) {
  MappingReport report;
  report.inconsistencies = check_consistency(rules);
  const auto [class_edges, property_edges] = edges_of(rules);
  const Term type = Term::iri(vocab::kRdfType);

  std::deque<Triple> todo;
  for (auto& t : graph.triples()) todo.push_back(std::move(t));
  for (const auto& t : todo) {
    const std::string& p = t.predicate().value();
    if (p == vocab::kRdfType && t.object().is_iri()) {
      const std::string& c = t.object().value();
      if (c.starts_with(vocab::kTifsemNs) && !class_edges.contains(c)) report.unmapped_sources.insert(c);
    } else if (p.starts_with(vocab::kTifsemNs) && !property_edges.contains(p)) {
      report.unmapped_sources.insert(p);
    }
  }

  while (!todo.empty()) {
    const Triple t = std::move(todo.front());
    todo.pop_front();
    auto emit = [&](Triple derived) {
      if (graph.insert(derived)) {
        ++report.inferred_triples;
        todo.push_back(std::move(derived));
      }
    };
    if (t.predicate() == type && t.object().is_iri()) {
      if (auto it = class_edges.find(t.object().value()); it != class_edges.end()) {
        for (const auto& target : it->second) emit(Triple(t.subject(), type, Term::iri(target)));
      }
    }
    if (auto it = property_edges.find(t.predicate().value()); it != property_edges.end()) {
      for (const auto& target : it->second) emit(Triple(t.subject(), Term::iri(target), t.object()));
    }
  }
  return report;
}

std::vector<std::string> check_consistency(const std::vector<MappingRule>& rules, const OntologySnapshot& snapshot) {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    const std::string head =
        std::string(to_string(r.relation)) + " " + compact(r.source) + " -> " + compact(r.target) + ": ";
    if (is_class_relation(r.relation)) {
      for (const std::string* iri : {&r.source, &r.target}) {
        if (!snapshot.has_class(*iri)) out.push_back("mismatch: " + head + compact(*iri) + " is not a class");
      }
      if (snapshot.has_class(r.source) && !snapshot.granule_by_class(r.source)) {
        out.push_back("no granule: " + compact(r.source));
      }
    } else {
      for (const std::string* iri : {&r.source, &r.target}) {
        if (!snapshot.has_property(*iri)) out.push_back("mismatch: " + head + compact(*iri) + " is not a property");
      }
      if (snapshot.has_property(r.source) && snapshot.field_by_predicate(r.source) == nullptr) {
        out.push_back("no granule: " + compact(r.source));
      }
    }
  }
  for (GranuleKind k : lacking_granules(rules)) out.push_back("lacking: " + std::string(to_string(k)));
  return out;
}

std::vector<GranuleKind> lacking_granules(const std::vector<MappingRule>& rules) {
  std::vector<GranuleKind> out;
  for (GranuleKind k : kAllGranuleKinds) {
    const std::string c = class_of(k);
    const bool covered = std::any_of(rules.begin(), rules.end(), [&](const MappingRule& r) {
      return is_class_relation(r.relation) && r.source == c;
    });
    if (!covered) out.push_back(k);
  }
  return out;
}

}  // namespace tifsem
