#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tifsem/graph.hpp"

namespace tifsem {

// A query variable, stored without the leading '?'.
struct Variable {
  std::string name;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

// Scalar expression inside a filter.
//   Variable: the term bound to `name`
//   Constant: `constant`
//   Distance: geo:distance(args[0], args[1]) in meters
//   Point:    geo:point(args[0], args[1]), latitude then longitude
// A point operand is either a Point, or a Variable/Constant naming a node
// whose tifsem:latitude/tifsem:longitude (or schema:latitude/longitude)
// values give its coordinates.
struct ValueExpr {
  enum class Kind { Variable, Constant, Distance, Point };

  Kind kind = Kind::Constant;
  std::string name;
  std::optional<Term> constant;
  std::vector<ValueExpr> args;

  static ValueExpr variable(std::string name);
  static ValueExpr constant_term(Term term);
  static ValueExpr distance(ValueExpr a, ValueExpr b);
  static ValueExpr point(ValueExpr latitude, ValueExpr longitude);
};

enum class CompareOp { Less, LessEqual, Equal, NotEqual, GreaterEqual, Greater };

std::string_view to_string(CompareOp op);

struct FilterExpr {
  enum class Kind { Compare, DistanceWithin, And, Or, Not };

  Kind kind = Kind::Compare;
  CompareOp op = CompareOp::Equal;
  // Compare: {left, right}. DistanceWithin: {point a, point b}.
  std::vector<ValueExpr> operands;
  double threshold_meters = 0;  // DistanceWithin only; finite and > 0
  std::vector<FilterExpr> children;

  static FilterExpr compare(ValueExpr left, CompareOp op, ValueExpr right);
  static FilterExpr distance_within(ValueExpr a, ValueExpr b, double threshold_meters);
  static FilterExpr all_of(std::vector<FilterExpr> children);
  static FilterExpr any_of(std::vector<FilterExpr> children);
  static FilterExpr negate(FilterExpr child);
};

struct OrderKey {
  std::string variable;
  bool ascending = true;
};

// GROUP-COUNT(?counted) AS ?alias: rows are grouped by the other projected
// variables and the alias column holds the number of distinct ?counted
// values per group.
struct GroupCount {
  std::string counted;
  std::string alias;
};

struct Query {
  std::vector<std::string> projection;  // output columns, in order
  std::optional<GroupCount> group_count;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;

  // Variables of the patterns, in order of first appearance.
  std::vector<std::string> pattern_variables() const;

  // Deterministic s-expression dump of the AST.
  std::string to_string() const;
};

// Parses the SELECT subset:
//   PREFIX p: <iri> ...
//   SELECT (?v | GROUP-COUNT(?v) AS ?n | *)+ WHERE { patterns and FILTER(...) }
//   [ORDER BY (?v | ASC(?v) | DESC(?v))+] [LIMIT n]
// rdf, rdfs, xsd, owl, schema and tifsem are predeclared. Throws
// QuerySyntaxError with the offending position.
Query parse_query(std::string_view text);

struct SolutionTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;

  friend bool operator==(const SolutionTable&, const SolutionTable&) = default;
};

// Join semantics over the basic graph pattern, then filters, grouping,
// ordering and limit. Without ORDER BY, rows are sorted by the N-Triples
// form of their columns; with it, ties fall back to that order. Ordering
// comparisons between incomparable values throw QueryTypeError.
SolutionTable evaluate(const Query& query, const Graph& graph);

// Comparison used by filters: numbers numerically, strings, dates and
// same-typed literals by lexical form. Returns nullopt when the operands are
// not mutually ordered.
std::optional<int> compare_terms(const Term& a, const Term& b);
std::optional<double> numeric_value(const Term& term);

// Coordinates attached to a node, if it has valid latitude and longitude.
std::optional<GeoPoint> node_location(const Graph& graph, const Term& node);

// CSV: header of variable names, terms in N-Triples syntax, RFC 4180 quoting.
std::string format_csv(const SolutionTable& table);
// Aligned text table for terminals.
std::string format_table(const SolutionTable& table);

}  // namespace tifsem
