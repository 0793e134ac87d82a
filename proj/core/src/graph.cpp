#include "tifsem/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "tifsem/errors.hpp"
#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

bool is_forbidden_iri_char(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
         c == '^' || c == '`' || c == '\\' || c == 0x7F;
}

bool is_ascii_alnum(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

constexpr char kHex[] = "0123456789ABCDEF";

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc()) throw std::runtime_error("cannot format coordinate");
  return Decimal::parse(std::string_view(buf, end - buf)).value().lexical;
}

Term value_term(const Value& value, std::string_view base) {
  struct Visitor {
    std::string_view base;
    Term operator()(const std::string& text) const { return Term::literal(text); }
    Term operator()(const Decimal& d) const { return Term::literal(d.lexical, vocab::kXsdDecimal); }
    Term operator()(const Date& d) const { return Term::literal(d.lexical, vocab::kXsdDate); }
    Term operator()(const IoRef& r) const { return Term::iri(io_iri(base, r.id)); }
    Term operator()(const GeoPoint&) const { throw std::logic_error("GeoPoint expands to two terms"); }
  };
  return std::visit(Visitor{base}, value);
}

void check_coordinate(const InformationObject& io, const std::string& predicate, const Value& value) {
  double x = 0;
  if (const auto* d = std::get_if<Decimal>(&value)) {
    x = d->to_double();
  } else {
    return;
  }
  if (predicate == vocab::kLatitude && !(x >= -90.0 && x <= 90.0)) {
    throw AssertionError("IO " + io.id + ": latitude out of range: " + std::get<Decimal>(value).lexical);
  }
  if (predicate == vocab::kLongitude && !(x >= -180.0 && x <= 180.0)) {
    throw AssertionError("IO " + io.id + ": longitude out of range: " + std::get<Decimal>(value).lexical);
  }
}

}  // namespace

Term Term::iri(std::string value) {
  if (!is_valid_iri(value)) throw std::invalid_argument("invalid IRI: '" + value + "'");
  return Term(TermKind::Iri, std::move(value), {}, {});
}

Term Term::blank(std::string label) {
  if (!is_valid_blank_label(label)) throw std::invalid_argument("invalid blank node label: '" + label + "'");
  return Term(TermKind::BlankNode, std::move(label), {}, {});
}

Term Term::literal(std::string lexical, std::string datatype) {
  if (datatype == vocab::kRdfLangString) {
    throw std::invalid_argument("rdf:langString literal requires a language tag");
  }
  if (!is_valid_iri(datatype)) throw std::invalid_argument("invalid datatype IRI: '" + datatype + "'");
  return Term(TermKind::Literal, std::move(lexical), std::move(datatype), {});
}

Term Term::literal(std::string lexical) { return literal(std::move(lexical), vocab::kXsdString); }

Term Term::lang_literal(std::string lexical, std::string language) {
  const bool ok = !language.empty() && std::all_of(language.begin(), language.end(), [](char c) {
    return is_ascii_alnum(c) || c == '-';
  }) && language.front() != '-' && language.back() != '-';
  if (!ok) throw std::invalid_argument("invalid language tag: '" + language + "'");
  std::transform(language.begin(), language.end(), language.begin(),
                 [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); });
  return Term(TermKind::Literal, std::move(lexical), vocab::kRdfLangString, std::move(language));
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<std::string>{}(t.language()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(t.kind());
}

bool is_valid_iri(std::string_view iri) noexcept {
  if (iri.empty()) return false;
  return std::none_of(iri.begin(), iri.end(),
                      [](char c) { return is_forbidden_iri_char(static_cast<unsigned char>(c)); });
}

// ASCII subset of the N-Triples BLANK_NODE_LABEL production.
bool is_valid_blank_label(std::string_view label) noexcept {
  if (label.empty()) return false;
  auto ok_inner = [](char c) { return is_ascii_alnum(c) || c == '_' || c == '-' || c == '.'; };
  if (!(is_ascii_alnum(label.front()) || label.front() == '_')) return false;
  if (label.back() == '.') return false;
  return std::all_of(label.begin(), label.end(), ok_inner);
}

Triple::Triple(Term subject, Term predicate, Term object)
    : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
  if (subject_.is_literal()) throw std::invalid_argument("triple subject cannot be a literal");
  if (!predicate_.is_iri()) throw std::invalid_argument("triple predicate must be an IRI");
}

TermId Graph::intern(const Term& term) {
  const auto [it, inserted] = ids_.try_emplace(term, static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

bool Graph::insert(const Triple& triple) {
  const TermId s = intern(triple.subject());
  const TermId p = intern(triple.predicate());
  const TermId o = intern(triple.object());
  if (!spo_.insert({s, p, o}).second) return false;
  pos_.insert({p, o, s});
  osp_.insert({o, s, p});
  return true;
}

bool Graph::contains(const Triple& triple) const {
  const auto s = lookup(triple.subject());
  const auto p = lookup(triple.predicate());
  const auto o = lookup(triple.object());
  return s && p && o && spo_.contains({*s, *p, *o});
}

std::optional<TermId> Graph::lookup(const Term& term) const {
  const auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Triple Graph::triple(const IdTriple& ids) const {
  return Triple(terms_[ids[0]], terms_[ids[1]], terms_[ids[2]]);
}

void Graph::match_ids(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                      const std::function<bool(const IdTriple&)>& callback) const {
  constexpr TermId kMax = std::numeric_limits<TermId>::max();

  // Scans `index` over keys starting with the bound prefix; `to_spo` maps a
  // stored key back to (s, p, o).
  auto scan = [&](const std::set<IdTriple>& index, std::array<std::optional<TermId>, 3> key,
                  auto to_spo) {
    IdTriple lo{0, 0, 0};
    IdTriple hi{kMax, kMax, kMax};
    for (std::size_t i = 0; i < 3 && key[i]; ++i) lo[i] = hi[i] = *key[i];
    for (auto it = index.lower_bound(lo); it != index.end() && *it <= hi; ++it) {
      const IdTriple spo = to_spo(*it);
      if ((s && spo[0] != *s) || (p && spo[1] != *p) || (o && spo[2] != *o)) continue;
      if (!callback(spo)) return;
    }
  };

  auto from_spo = [](const IdTriple& k) { return k; };
  auto from_pos = [](const IdTriple& k) { return IdTriple{k[2], k[0], k[1]}; };
  auto from_osp = [](const IdTriple& k) { return IdTriple{k[1], k[2], k[0]}; };

  if (s && (p || !o)) {
    scan(spo_, {s, p, o}, from_spo);
  } else if (s) {
    scan(osp_, {o, s, p}, from_osp);
  } else if (p) {
    scan(pos_, {p, o, s}, from_pos);
  } else if (o) {
    scan(osp_, {o, s, p}, from_osp);
  } else {
    scan(spo_, {std::nullopt, std::nullopt, std::nullopt}, from_spo);
  }
}

std::vector<Triple> Graph::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                 const std::optional<Term>& o) const {
  std::vector<Triple> out;
  std::array<std::optional<TermId>, 3> ids;
  const std::array<const std::optional<Term>*, 3> bound{&s, &p, &o};
  for (std::size_t i = 0; i < 3; ++i) {
    if (*bound[i]) {
      ids[i] = lookup(**bound[i]);
      if (!ids[i]) return out;
    }
  }
  match_ids(ids[0], ids[1], ids[2], [&](const IdTriple& t) {
    out.push_back(triple(t));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> Graph::triples() const {
  std::vector<Triple> out;
  out.reserve(spo_.size());
  for (const auto& t : spo_) out.push_back(triple(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> Graph::nodes() const {
  std::set<TermId> ids;
  for (const auto& t : spo_) {
    ids.insert(t[0]);
    ids.insert(t[2]);
  }
  std::vector<Term> out;
  for (TermId id : ids) out.push_back(terms_[id]);
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::indexes_consistent() const {
  if (pos_.size() != spo_.size() || osp_.size() != spo_.size()) return false;
  for (const auto& [s, p, o] : spo_) {
    if (!pos_.contains({p, o, s}) || !osp_.contains({o, s, p})) return false;
  }
  return true;
}

std::string io_iri(std::string_view base, std::string_view io_id) {
  std::string out(base);
  out += "/io/";
  for (unsigned char c : io_id) {
    if (is_ascii_alnum(static_cast<char>(c)) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string granule_label(std::string_view io_id, GranuleKind kind, std::size_t ordinal) {
  // 'g' + id with every non-alphanumeric byte written as -HH, so the encoded
  // id never contains '_' and the label stays injective.
  std::string out = "g";
  for (unsigned char c : io_id) {
    if (is_ascii_alnum(static_cast<char>(c))) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('-');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  out += "_";
  out += to_string(kind);
  out += "_";
  out += std::to_string(ordinal);
  return out;
}

std::size_t assert_io(Graph& graph, const InformationObject& io, std::string_view base) {
  if (io.id.empty()) throw AssertionError("IO without identifier");
  const auto& onto = load_core_ontology();

  // Build every triple first so a failing IO leaves the graph untouched.
  std::vector<Triple> triples;
  const Term subject = Term::iri(io_iri(base, io.id));
  const Term type = Term::iri(vocab::kRdfType);
  triples.emplace_back(subject, type, Term::iri(vocab::kInformationObject));
  for (const auto& category : io.categories) triples.emplace_back(subject, type, Term::iri(category));
  for (const auto& [iri, text] : io.extensions) {
    triples.emplace_back(subject, Term::iri(iri), Term::literal(text));
  }

  const Term has_granule = Term::iri(vocab::kHasGranule);
  for (const auto& [kind, list] : io.granules) {
    for (std::size_t ordinal = 0; ordinal < list.size(); ++ordinal) {
      const Granule& granule = list[ordinal];
      if (granule.kind != kind) throw AssertionError("IO " + io.id + ": granule filed under wrong kind");
      const Term node = Term::blank(granule_label(io.id, kind, ordinal));
      triples.emplace_back(subject, has_granule, node);
      triples.emplace_back(node, type, Term::iri(class_of(kind)));
      for (const auto& [path, value] : granule.fields) {
        if (const auto* point = std::get_if<GeoPoint>(&value)) {
          triples.emplace_back(node, Term::iri(vocab::kLatitude),
                               Term::literal(format_double(point->latitude()), vocab::kXsdDecimal));
          triples.emplace_back(node, Term::iri(vocab::kLongitude),
                               Term::literal(format_double(point->longitude()), vocab::kXsdDecimal));
          continue;
        }
        std::string predicate;
        if (const FieldSpec* spec = onto.field(path)) {
          predicate = spec->predicate;
        } else if (path.find(':') != std::string::npos && is_valid_iri(path)) {
          predicate = path;
        } else {
          throw AssertionError("IO " + io.id + ": unknown field path " + path);
        }
        check_coordinate(io, predicate, value);
        triples.emplace_back(node, Term::iri(predicate), value_term(value, base));
      }
    }
  }

  std::size_t added = 0;
  for (const auto& t : triples) added += graph.insert(t) ? 1 : 0;
  return added;
}

}  // namespace tifsem
