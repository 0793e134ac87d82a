#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tifsem/graph.hpp"
#include "tifsem/ontology.hpp"

namespace tifsem {

// Ordered (prefix, namespace IRI) pairs used for Turtle and JSON-LD compaction.
using PrefixMap = std::vector<std::pair<std::string, std::string>>;

// rdf, rdfs, xsd, owl, schema, tifsem.
PrefixMap default_prefixes();

struct NTriplesOptions {
  // Escape every non-ASCII code point as \uXXXX / \UXXXXXXXX.
  bool ascii = false;
};

std::string term_to_ntriples(const Term& term, const NTriplesOptions& options = {});

// One triple per line, "\n" endings, sorted by the serialized subject, then
// predicate, then object. Equal graphs yield byte-identical text.
std::string to_ntriples(const Graph& graph, const NTriplesOptions& options = {});

// Parses N-Triples text. Comments and blank lines are skipped; duplicate
// lines collapse. Throws ParseError naming the offending line.
Graph from_ntriples(std::string_view text);

// Parses a single N-Triples term (IRI, blank node or literal).
Term parse_ntriples_term(std::string_view text);

// Turtle with prefix declarations and subject grouping. Write-only.
std::string to_turtle(const Graph& graph, const PrefixMap& prefixes = default_prefixes());

// Compact JSON-LD view of one node and every blank node reachable from it.
struct JsonLdDocument {
  std::map<std::string, std::string> context;  // prefix -> namespace IRI
  nlohmann::json body;                          // the root node object

  // The document as embedded in a page: body plus "@context".
  nlohmann::json to_json() const;
  std::string dump(int indent = 2) const;
};

// Throws Error when `root` is not the subject of any triple in `graph`.
JsonLdDocument to_jsonld(const Graph& graph, const Term& root,
                         const PrefixMap& prefixes = default_prefixes());

// Class declarations, labels and subclass links of an ontology snapshot.
Graph ontology_to_graph(const OntologySnapshot& snapshot);

}  // namespace tifsem
