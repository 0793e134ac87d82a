#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "tifsem/errors.hpp"
#include "tifsem/geo.hpp"
#include "tifsem/query.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

bool is_numeric_datatype(std::string_view dt) {
  return dt == vocab::kXsdInteger || dt == vocab::kXsdDecimal || dt == vocab::kXsdDouble ||
         dt == vocab::kXsdFloat || dt == vocab::xsd("int") || dt == vocab::xsd("long") ||
         dt == vocab::xsd("short") || dt == vocab::xsd("nonNegativeInteger") ||
         dt == vocab::xsd("positiveInteger");
}

bool is_lexically_ordered(std::string_view dt) {
  return dt == vocab::kXsdString || dt == vocab::kXsdDate || dt == vocab::kXsdDateTime ||
         dt == vocab::kXsdBoolean || dt == vocab::xsd("time");
}

enum class Truth { False, True, Error };

struct Outcome {
  Truth truth;
  std::string message;

  static Outcome yes() { return {Truth::True, {}}; }
  static Outcome no() { return {Truth::False, {}}; }
  static Outcome error(std::string m) { return {Truth::Error, std::move(m)}; }
};

Outcome from_bool(bool b) { return b ? Outcome::yes() : Outcome::no(); }

// A scalar operand: an RDF term or a computed number (a distance).
struct Scalar {
  std::optional<Term> term;
  double number = 0;
};

bool holds(CompareOp op, int c) {
  switch (op) {
    case CompareOp::Less: return c < 0;
    case CompareOp::LessEqual: return c <= 0;
    case CompareOp::Equal: return c == 0;
    case CompareOp::NotEqual: return c != 0;
    case CompareOp::GreaterEqual: return c >= 0;
    case CompareOp::Greater: return c > 0;
  }
  return false;
}

int sign(double d) { return (d > 0) - (d < 0); }

class Evaluator {
 public:
  Evaluator(const Query& q, const Graph& g) : q_(q), g_(g) {
    for (const auto& v : q.pattern_variables()) {
      slots_.emplace(v, static_cast<int>(names_.size()));
      names_.push_back(v);
    }
    binding_.assign(names_.size(), kUnbound);
    compile_patterns();
    plan();
  }

  std::vector<std::vector<TermId>> run() {
    if (impossible_) return {};
    std::optional<std::string> pending;
    if (!q_.filters.empty() && filter0_step_ == 0) {
      const Outcome o = eval_filter(q_.filters[0]);
      if (o.truth == Truth::False) return {};
      if (o.truth == Truth::Error) pending = o.message;
    }
    search(0, pending);
    return std::move(results_);
  }

  const Term& term(TermId id) const { return g_.term(id); }
  int slot(const std::string& name) const { return slots_.at(name); }

 private:
  static constexpr TermId kUnbound = static_cast<TermId>(-1);

  struct Position {
    int var = -1;  // slot index, or -1 for a constant
    TermId constant = 0;
  };
  struct Compiled {
    std::array<Position, 3> pos;
  };

  void compile_patterns() {
    for (const auto& p : q_.patterns) {
      Compiled c;
      const PatternTerm* parts[3] = {&p.subject, &p.predicate, &p.object};
      for (int i = 0; i < 3; ++i) {
        if (const auto* v = std::get_if<Variable>(parts[i])) {
          c.pos[i].var = slots_.at(v->name);
        } else {
          const auto id = g_.lookup(std::get<Term>(*parts[i]));
          if (!id) {
            impossible_ = true;
          } else {
            c.pos[i].constant = *id;
          }
        }
      }
      patterns_.push_back(c);
    }
  }

  static void collect_vars(const ValueExpr& v, std::set<std::string>& out) {
    if (v.kind == ValueExpr::Kind::Variable) out.insert(v.name);
    for (const auto& a : v.args) collect_vars(a, out);
  }
  static void collect_vars(const FilterExpr& f, std::set<std::string>& out) {
    for (const auto& o : f.operands) collect_vars(o, out);
    for (const auto& c : f.children) collect_vars(c, out);
  }

  // Greedy: prefer the pattern with the most positions already fixed,
  // breaking ties by declaration order.
  void plan() {
    std::vector<bool> used(patterns_.size(), false);
    std::vector<bool> bound(names_.size(), false);
    std::set<std::string> f0;
    if (!q_.filters.empty()) collect_vars(q_.filters[0], f0);
    auto f0_ready = [&] {
      return std::all_of(f0.begin(), f0.end(), [&](const std::string& n) { return bound[slots_.at(n)]; });
    };
    if (f0_ready()) filter0_step_ = 0;
    for (std::size_t step = 0; step < patterns_.size(); ++step) {
      int best = -1;
      int best_score = -1;
      for (std::size_t i = 0; i < patterns_.size(); ++i) {
        if (used[i]) continue;
        int score = 0;
        for (const auto& p : patterns_[i].pos) {
          if (p.var < 0 || bound[p.var]) ++score;
        }
        if (score > best_score) {
          best = static_cast<int>(i);
          best_score = score;
        }
      }
      used[best] = true;
      order_.push_back(best);
      for (const auto& p : patterns_[best].pos) {
        if (p.var >= 0) bound[p.var] = true;
      }
      if (!filter0_step_ && f0_ready()) filter0_step_ = step + 1;
    }
  }

  void search(std::size_t step, const std::optional<std::string>& pending) {
    if (step == order_.size()) {
      complete(pending);
      return;
    }
    const Compiled& c = patterns_[order_[step]];
    std::optional<TermId> fixed[3];
    for (int i = 0; i < 3; ++i) {
      const Position& p = c.pos[i];
      if (p.var < 0) {
        fixed[i] = p.constant;
      } else if (binding_[p.var] != kUnbound) {
        fixed[i] = binding_[p.var];
      }
    }
    g_.match_ids(fixed[0], fixed[1], fixed[2], [&](const Graph::IdTriple& t) {
      std::array<int, 3> newly{-1, -1, -1};
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        const int var = c.pos[i].var;
        if (var < 0 || fixed[i]) continue;
        if (binding_[var] == kUnbound) {
          binding_[var] = t[i];
          newly[i] = var;
        } else if (binding_[var] != t[i]) {
          ok = false;  // repeated variable within one pattern
        }
      }
      if (ok) {
        std::optional<std::string> carried = pending;
        bool keep = true;
        if (filter0_step_ == step + 1 && !carried) {
          const Outcome o = eval_filter(q_.filters[0]);
          if (o.truth == Truth::False) keep = false;
          if (o.truth == Truth::Error) carried = o.message;
        }
        if (keep) search(step + 1, carried);
      }
      for (int var : newly) {
        if (var >= 0) binding_[var] = kUnbound;
      }
      return true;
    });
  }

  void complete(const std::optional<std::string>& pending) {
    if (pending) throw QueryTypeError(*pending);
    for (std::size_t i = 0; i < q_.filters.size(); ++i) {
      if (i == 0 && filter0_step_) continue;
      const Outcome o = eval_filter(q_.filters[i]);
      if (o.truth == Truth::False) return;
      if (o.truth == Truth::Error) throw QueryTypeError(o.message);
    }
    results_.push_back(binding_);
  }

  std::optional<Term> lookup_var(const std::string& name) const {
    const TermId id = binding_[slots_.at(name)];
    if (id == kUnbound) return std::nullopt;
    return g_.term(id);
  }

  std::optional<GeoPoint> resolve_point(const ValueExpr& v, std::string& error) const {
    switch (v.kind) {
      case ValueExpr::Kind::Point: {
        std::optional<double> lat;
        std::optional<double> lon;
        for (int i = 0; i < 2; ++i) {
          std::optional<Term> t = v.args[i].kind == ValueExpr::Kind::Variable ? lookup_var(v.args[i].name)
                                  : v.args[i].kind == ValueExpr::Kind::Constant ? v.args[i].constant
                                                                                 : std::nullopt;
          if (!t) {
            error = "geo:point expects literal coordinates";
            return std::nullopt;
          }
          (i == 0 ? lat : lon) = numeric_value(*t);
        }
        if (!lat || !lon || !GeoPoint::is_valid(*lat, *lon)) return std::nullopt;
        return GeoPoint(*lat, *lon);
      }
      case ValueExpr::Kind::Variable: {
        const auto t = lookup_var(v.name);
        if (!t) return std::nullopt;
        return node_location(g_, *t);
      }
      case ValueExpr::Kind::Constant: return node_location(g_, *v.constant);
      case ValueExpr::Kind::Distance: error = "a distance is not a point"; return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<Scalar> eval_scalar(const ValueExpr& v, std::string& error) const {
    switch (v.kind) {
      case ValueExpr::Kind::Variable: {
        auto t = lookup_var(v.name);
        if (!t) {
          error = "?" + v.name + " is unbound";
          return std::nullopt;
        }
        return Scalar{std::move(t), 0};
      }
      case ValueExpr::Kind::Constant: return Scalar{v.constant, 0};
      case ValueExpr::Kind::Distance: {
        const auto a = resolve_point(v.args[0], error);
        const auto b = resolve_point(v.args[1], error);
        if (!a || !b) {
          if (error.empty()) error = "geo:distance operand has no coordinates";
          return std::nullopt;
        }
        return Scalar{std::nullopt, geo_distance(*a, *b)};
      }
      case ValueExpr::Kind::Point: error = "a point is not comparable"; return std::nullopt;
    }
    return std::nullopt;
  }

  Outcome eval_compare(const FilterExpr& f) const {
    std::string error;
    const auto a = eval_scalar(f.operands[0], error);
    const auto b = a ? eval_scalar(f.operands[1], error) : std::nullopt;
    const bool equality = f.op == CompareOp::Equal || f.op == CompareOp::NotEqual;
    if (!a || !b) {
      if (equality && error.find("coordinates") != std::string::npos) return from_bool(f.op == CompareOp::NotEqual);
      return Outcome::error(error);
    }
    std::optional<double> na = a->term ? numeric_value(*a->term) : std::optional<double>(a->number);
    std::optional<double> nb = b->term ? numeric_value(*b->term) : std::optional<double>(b->number);
    std::optional<int> c;
    if (na && nb) {
      if (std::isnan(*na) || std::isnan(*nb)) {
        if (equality) return from_bool(f.op == CompareOp::NotEqual);
        return Outcome::error("NaN is not ordered");
      }
      c = sign(*na - *nb);
    } else if (a->term && b->term) {
      c = compare_terms(*a->term, *b->term);
    }
    if (c) return from_bool(holds(f.op, *c));
    if (equality) {
      const bool same = a->term && b->term && *a->term == *b->term;
      return from_bool(f.op == CompareOp::Equal ? same : !same);
    }
    return Outcome::error(std::string("cannot order operands with ") + std::string(to_string(f.op)));
  }

  Outcome eval_filter(const FilterExpr& f) const {
    switch (f.kind) {
      case FilterExpr::Kind::Compare: return eval_compare(f);
      case FilterExpr::Kind::DistanceWithin: {
        std::string error;
        const auto a = resolve_point(f.operands[0], error);
        if (!a) return error.empty() ? Outcome::no() : Outcome::error(error);
        const auto b = resolve_point(f.operands[1], error);
        if (!b) return error.empty() ? Outcome::no() : Outcome::error(error);
        return from_bool(filter_within(geo_distance(*a, *b), f.threshold_meters));
      }
      case FilterExpr::Kind::And: {
        // SPARQL three-valued logic: False dominates Error.
        std::optional<Outcome> err;
        for (const auto& c : f.children) {
          Outcome o = eval_filter(c);
          if (o.truth == Truth::False) return o;
          if (o.truth == Truth::Error && !err) err = std::move(o);
        }
        return err ? *err : Outcome::yes();
      }
      case FilterExpr::Kind::Or: {
        std::optional<Outcome> err;
        for (const auto& c : f.children) {
          Outcome o = eval_filter(c);
          if (o.truth == Truth::True) return o;
          if (o.truth == Truth::Error && !err) err = std::move(o);
        }
        return err ? *err : Outcome::no();
      }
      case FilterExpr::Kind::Not: {
        Outcome o = eval_filter(f.children.front());
        if (o.truth == Truth::Error) return o;
        return from_bool(o.truth == Truth::False);
      }
    }
    return Outcome::error("unknown filter");
  }

  const Query& q_;
  const Graph& g_;
  std::map<std::string, int> slots_;
  std::vector<std::string> names_;
  std::vector<Compiled> patterns_;
  std::vector<int> order_;
  std::optional<std::size_t> filter0_step_;
  bool impossible_ = false;
  std::vector<TermId> binding_;
  std::vector<std::vector<TermId>> results_;
};

// Sort key comparison for ORDER BY: numbers first, numerically, then the
// remaining terms by N-Triples form.
int order_compare(const Term& a, const Term& b, const std::string& sa, const std::string& sb) {
  const auto na = numeric_value(a);
  const auto nb = numeric_value(b);
  if (na && nb) {
    if (*na < *nb) return -1;
    if (*na > *nb) return 1;
    return 0;
  }
  if (na) return -1;
  if (nb) return 1;
  return sa.compare(sb) < 0 ? -1 : (sa == sb ? 0 : 1);
}

struct OutRow {
  std::vector<Term> cells;
  std::vector<std::string> cell_text;
  std::vector<Term> keys;
  std::vector<std::string> key_text;
};

// Terminal columns taken by UTF-8 text (one per code point).
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::optional<double> numeric_value(const Term& term) {
  if (!term.is_literal() || !is_numeric_datatype(term.datatype())) return std::nullopt;
  const std::string& s = term.value();
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  double d = 0;
  const auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec != std::errc() || ptr != last) {
    if (s == "INF" || s == "+INF") return HUGE_VAL;
    if (s == "-INF") return -HUGE_VAL;
    if (s == "NaN") return std::nan("");
    return std::nullopt;
  }
  return d;
}

std::optional<int> compare_terms(const Term& a, const Term& b) {
  const auto na = numeric_value(a);
  const auto nb = numeric_value(b);
  if (na && nb) {
    if (std::isnan(*na) || std::isnan(*nb)) return std::nullopt;
    return sign(*na - *nb);
  }
  if (!a.is_literal() || !b.is_literal() || a.datatype() != b.datatype()) return std::nullopt;
  if (a.datatype() == vocab::kRdfLangString) {
    if (a.language() != b.language()) return std::nullopt;
  } else if (!is_lexically_ordered(a.datatype())) {
    return std::nullopt;
  }
  const int c = a.value().compare(b.value());
  return (c > 0) - (c < 0);
}

std::optional<GeoPoint> node_location(const Graph& graph, const Term& node) {
  if (node.is_literal()) return std::nullopt;
  const auto id = graph.lookup(node);
  if (!id) return std::nullopt;
  auto first_number = [&](std::string_view predicate) -> std::optional<double> {
    const auto pid = graph.lookup(Term::iri(std::string(predicate)));
    if (!pid) return std::nullopt;
    std::optional<double> found;
    graph.match_ids(*id, *pid, std::nullopt, [&](const Graph::IdTriple& t) {
      found = numeric_value(graph.term(t[2]));
      return !found;
    });
    return found;
  };
  for (const auto& [lat_p, lon_p] : {std::pair{vocab::kLatitude, vocab::kLongitude},
                                     std::pair{vocab::kSchemaLatitude, vocab::kSchemaLongitude}}) {
    const auto lat = first_number(lat_p);
    const auto lon = first_number(lon_p);
    if (lat && lon && GeoPoint::is_valid(*lat, *lon)) return GeoPoint(*lat, *lon);
  }
  return std::nullopt;
}

SolutionTable evaluate(const Query& query, const Graph& graph) {
  Evaluator ev(query, graph);
  const auto bindings = ev.run();

  SolutionTable table;
  table.columns = query.projection;
  std::vector<OutRow> rows;

  auto key_index = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(query.projection.begin(), query.projection.end(), name) - query.projection.begin());
  };

  if (query.group_count) {
    const std::string& alias = query.group_count->alias;
    const int counted = ev.slot(query.group_count->counted);
    std::vector<int> group_slots;
    for (const auto& v : query.projection) {
      if (v != alias) group_slots.push_back(ev.slot(v));
    }
    std::map<std::vector<TermId>, std::set<TermId>> groups;
    for (const auto& b : bindings) {
      std::vector<TermId> key;
      for (int s : group_slots) key.push_back(b[s]);
      groups[key].insert(b[counted]);
    }
    for (const auto& [key, members] : groups) {
      OutRow row;
      std::size_t k = 0;
      for (const auto& v : query.projection) {
        if (v == alias) {
          row.cells.push_back(Term::literal(std::to_string(members.size()), vocab::kXsdInteger));
        } else {
          row.cells.push_back(ev.term(key[k++]));
        }
      }
      for (const auto& o : query.order_by) row.keys.push_back(row.cells[key_index(o.variable)]);
      rows.push_back(std::move(row));
    }
  } else {
    for (const auto& b : bindings) {
      OutRow row;
      for (const auto& v : query.projection) row.cells.push_back(ev.term(b[ev.slot(v)]));
      for (const auto& o : query.order_by) row.keys.push_back(ev.term(b[ev.slot(o.variable)]));
      rows.push_back(std::move(row));
    }
  }

  for (auto& r : rows) {
    for (const auto& c : r.cells) r.cell_text.push_back(term_to_ntriples(c));
    for (const auto& k : r.keys) r.key_text.push_back(term_to_ntriples(k));
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const OutRow& a, const OutRow& b) {
    for (std::size_t i = 0; i < query.order_by.size(); ++i) {
      const int c = order_compare(a.keys[i], b.keys[i], a.key_text[i], b.key_text[i]);
      if (c != 0) return query.order_by[i].ascending ? c < 0 : c > 0;
    }
    return a.cell_text < b.cell_text;
  });
  if (query.limit && rows.size() > *query.limit) rows.resize(*query.limit);
  for (auto& r : rows) table.rows.push_back(std::move(r.cells));
  return table;
}

std::string format_csv(const SolutionTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(term_to_ntriples(row[i]));
    }
    out += "\r\n";
  }
  return out;
}

std::string format_table(const SolutionTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header;
  for (const auto& c : table.columns) header.push_back("?" + c);
  cells.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (const auto& t : row) line.push_back(term_to_ntriples(t));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], display_width(line[i]));
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      if (i) out << " | ";
      out << cells[r][i];
      if (i + 1 < cells[r].size()) out << std::string(width[i] - display_width(cells[r][i]), ' ');
    }
    out << "\n";
    if (r == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) {
        if (i) out << "-+-";
        out << std::string(width[i], '-');
      }
      out << "\n";
    }
  }
  out << table.rows.size() << (table.rows.size() == 1 ? " row\n" : " rows\n");
  return out.str();
}

}  // namespace tifsem
