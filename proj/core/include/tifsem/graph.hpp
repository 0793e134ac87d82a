#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tifsem/ontology.hpp"

namespace tifsem {

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

// An RDF term. IRIs carry no whitespace or IRIREF-forbidden characters, and
// a literal has a language tag exactly when its datatype is rdf:langString.
// Factories throw std::invalid_argument when those invariants do not hold.
class Term {
 public:
  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string datatype);
  static Term literal(std::string lexical);  // xsd:string
  static Term lang_literal(std::string lexical, std::string language);

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::Iri; }
  bool is_blank() const noexcept { return kind_ == TermKind::BlankNode; }
  bool is_literal() const noexcept { return kind_ == TermKind::Literal; }

  // IRI text, blank-node label (without "_:") or literal lexical form.
  const std::string& value() const noexcept { return value_; }
  const std::string& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }

  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string value, std::string datatype, std::string language)
      : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)),
        language_(std::move(language)) {}

  TermKind kind_;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

bool is_valid_iri(std::string_view iri) noexcept;
bool is_valid_blank_label(std::string_view label) noexcept;

// Subject is an IRI or blank node, predicate an IRI. The constructor throws
// std::invalid_argument otherwise.
class Triple {
 public:
  Triple(Term subject, Term predicate, Term object);

  const Term& subject() const noexcept { return subject_; }
  const Term& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  friend auto operator<=>(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Term predicate_;
  Term object_;
};

using TermId = std::uint32_t;

// A set of triples over a term dictionary, indexed three ways (SPO, POS,
// OSP) so that any combination of bound positions resolves to a range scan.
//
// Build phase (insert/assert/materialize) needs exclusive access. Once built,
// const member functions may be called concurrently.
class Graph {
 public:
  using IdTriple = std::array<TermId, 3>;  // always stored as (s, p, o)

  // Returns true if the triple was not present before.
  bool insert(const Triple& triple);
  bool contains(const Triple& triple) const;
  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }

  // Triples agreeing with every bound position; nullopt is a wildcard.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;

  // Id-level matching for evaluators. The callback returns false to stop.
  void match_ids(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                 const std::function<bool(const IdTriple&)>& callback) const;

  std::optional<TermId> lookup(const Term& term) const;
  const Term& term(TermId id) const { return terms_.at(id); }
  Triple triple(const IdTriple& ids) const;

  // Every triple, sorted by term order.
  std::vector<Triple> triples() const;
  // Subjects and objects occurring in at least one triple.
  std::vector<Term> nodes() const;

  // True when the three indexes hold the same triple set.
  bool indexes_consistent() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.triples() == b.triples(); }

 private:
  TermId intern(const Term& term);

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::set<IdTriple> spo_;  // (s, p, o)
  std::set<IdTriple> pos_;  // (p, o, s)
  std::set<IdTriple> osp_;  // (o, s, p)
};

// IRI minted for an IO: <base>/io/<percent-encoded id>.
std::string io_iri(std::string_view base, std::string_view io_id);
// Blank-node label of the ordinal-th granule of the given kind in an IO.
std::string granule_label(std::string_view io_id, GranuleKind kind, std::size_t ordinal);

// Writes an InformationObject into the graph. Returns the number of triples
// that were not already present. Throws AssertionError for IOs that carry an
// empty id or out-of-range coordinates.
std::size_t assert_io(Graph& graph, const InformationObject& io,
                      std::string_view base = "http://example.org/tifsem");

}  // namespace tifsem
