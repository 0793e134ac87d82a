#include "tifsem/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <tuple>

#include "tifsem/errors.hpp"
#include "tifsem/vocab.hpp"
#include "utf8.hpp"

namespace tifsem {

namespace {

void append_uchar(std::string& out, std::uint32_t cp) {
  char buf[12];
  if (cp <= 0xFFFF) {
    std::snprintf(buf, sizeof buf, "\\u%04X", cp);
  } else {
    std::snprintf(buf, sizeof buf, "\\U%08X", cp);
  }
  out += buf;
}

// Appends `text`, escaping non-ASCII code points when `ascii` is set.
void append_maybe_ascii(std::string& out, std::string_view text, bool ascii) {
  if (!ascii) {
    out += text;
    return;
  }
  for (std::size_t pos = 0; pos < text.size();) {
    const auto cp = detail::next_code_point(text, pos);
    if (!cp) throw std::invalid_argument("invalid UTF-8 in term");
    if (*cp < 0x80) {
      out.push_back(static_cast<char>(*cp));
    } else {
      append_uchar(out, *cp);
    }
  }
}

void append_escaped_string(std::string& out, std::string_view text, bool ascii) {
  std::string plain;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '\\': plain += "\\\\"; break;
      case '"': plain += "\\\""; break;
      case '\n': plain += "\\n"; break;
      case '\r': plain += "\\r"; break;
      case '\t': plain += "\\t"; break;
      case '\b': plain += "\\b"; break;
      case '\f': plain += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          append_uchar(plain, c);
        } else {
          plain.push_back(ch);
        }
    }
  }
  append_maybe_ascii(out, plain, ascii);
}

// ---------------------------------------------------------------------------
// N-Triples reading

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_no_, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return at_end() ? '\0' : line_[pos_]; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::uint32_t read_hex(std::size_t digits) {
    if (pos_ + digits > line_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = line_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in unicode escape");
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
    return cp;
  }

  std::string read_iri() {
    expect('<');
    std::string iri;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = line_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        const char kind = peek();
        ++pos_;
        if (kind == 'u') detail::append_utf8(iri, read_hex(4));
        else if (kind == 'U') detail::append_utf8(iri, read_hex(8));
        else fail("invalid escape in IRI");
      } else {
        iri.push_back(c);
      }
    }
    if (!is_valid_iri(iri)) fail("invalid IRI <" + iri + ">");
    return iri;
  }

  Term read_blank() {
    expect('_');
    expect(':');
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_' ||
                         line_[pos_] == '-' || line_[pos_] == '.')) {
      ++pos_;
    }
    // A label cannot end with '.'; give it back to the statement terminator.
    while (pos_ > start && line_[pos_ - 1] == '.') --pos_;
    std::string label(line_.substr(start, pos_ - start));
    if (!is_valid_blank_label(label)) fail("invalid blank node label '" + label + "'");
    return Term::blank(std::move(label));
  }

  Term read_literal() {
    expect('"');
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = line_[pos_++];
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c != '\\') {
        lexical.push_back(c);
        continue;
      }
      if (at_end()) fail("dangling escape");
      const char e = line_[pos_++];
      switch (e) {
        case 't': lexical.push_back('\t'); break;
        case 'b': lexical.push_back('\b'); break;
        case 'n': lexical.push_back('\n'); break;
        case 'r': lexical.push_back('\r'); break;
        case 'f': lexical.push_back('\f'); break;
        case '"': lexical.push_back('"'); break;
        case '\'': lexical.push_back('\''); break;
        case '\\': lexical.push_back('\\'); break;
        case 'u': detail::append_utf8(lexical, read_hex(4)); break;
        case 'U': detail::append_utf8(lexical, read_hex(8)); break;
        default: fail(std::string("invalid escape \\") + e);
      }
    }
    if (peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-')) ++pos_;
      try {
        return Term::lang_literal(std::move(lexical), std::string(line_.substr(start, pos_ - start)));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (peek() == '^') {
      ++pos_;
      expect('^');
      std::string datatype = read_iri();
      try {
        return Term::literal(std::move(lexical), std::move(datatype));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    return Term::literal(std::move(lexical));
  }

  Term read_term() {
    switch (peek()) {
      case '<': return Term::iri(read_iri());
      case '_': return read_blank();
      case '"': return read_literal();
      default: fail("expected an IRI, blank node or literal");
    }
  }

  // Parses "s p o ." and returns nullopt for blank or comment lines.
  std::optional<Triple> read_statement() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    if (peek() != '<' && peek() != '_') fail("expected subject IRI or blank node");
    Term subject = peek() == '<' ? Term::iri(read_iri()) : read_blank();
    skip_ws();
    if (peek() != '<') fail("expected predicate IRI");
    Term predicate = Term::iri(read_iri());
    skip_ws();
    Term object = read_term();
    skip_ws();
    if (peek() != '.') fail("missing final ' .'");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after ' .'");
    return Triple(std::move(subject), std::move(predicate), std::move(object));
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Prefix compaction

bool is_local_name(std::string_view local) {
  if (local.empty()) return false;
  auto ok = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; };
  if (local.front() == '-') return false;
  return std::all_of(local.begin(), local.end(), ok);
}

std::optional<std::string> compact(std::string_view iri, const PrefixMap& prefixes) {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes) {
    if (iri.starts_with(entry.second) && is_local_name(iri.substr(entry.second.size())) &&
        (!best || entry.second.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (!best) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

std::string turtle_iri(std::string_view iri, const PrefixMap& prefixes) {
  if (auto c = compact(iri, prefixes)) return *c;
  return "<" + std::string(iri) + ">";
}

std::string turtle_term(const Term& term, const PrefixMap& prefixes) {
  switch (term.kind()) {
    case TermKind::Iri: return turtle_iri(term.value(), prefixes);
    case TermKind::BlankNode: return "_:" + term.value();
    case TermKind::Literal: break;
  }
  std::string out = "\"";
  append_escaped_string(out, term.value(), false);
  out += "\"";
  if (!term.language().empty()) {
    out += "@" + term.language();
  } else if (term.datatype() != vocab::kXsdString) {
    out += "^^" + turtle_iri(term.datatype(), prefixes);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON-LD

class JsonLdWriter {
 public:
  JsonLdWriter(const Graph& graph, const PrefixMap& prefixes) : graph_(graph), prefixes_(prefixes) {}

  nlohmann::json write(const Term& root) {
    count_blank_references(root);
    return node_object(root);
  }

 private:
  std::string iri_ref(std::string_view iri) const {
    if (auto c = compact(iri, prefixes_)) return *c;
    return std::string(iri);
  }

  void count_blank_references(const Term& root) {
    std::vector<Term> stack{root};
    std::set<Term> expanded{root};
    while (!stack.empty()) {
      const Term node = stack.back();
      stack.pop_back();
      for (const auto& t : graph_.match(node, std::nullopt, std::nullopt)) {
        if (!t.object().is_blank()) continue;
        ++references_[t.object()];
        if (expanded.insert(t.object()).second) stack.push_back(t.object());
      }
    }
  }

  nlohmann::json value_object(const Term& object) {
    if (object.is_iri()) return {{"@id", iri_ref(object.value())}};
    if (object.is_blank()) {
      // Embed on first sight; later references and back-edges point by label.
      if (embedded_.contains(object)) return {{"@id", "_:" + object.value()}};
      return node_object(object);
    }
    if (!object.language().empty()) {
      return {{"@value", object.value()}, {"@language", object.language()}};
    }
    if (object.datatype() == vocab::kXsdString) return object.value();
    return {{"@value", object.value()}, {"@type", iri_ref(object.datatype())}};
  }

  nlohmann::json node_object(const Term& node) {
    embedded_.insert(node);
    nlohmann::json obj = nlohmann::json::object();
    if (node.is_iri()) {
      obj["@id"] = iri_ref(node.value());
    } else if (depth_ == 0 || references_[node] > 1 || self_referenced(node)) {
      obj["@id"] = "_:" + node.value();
    }
    ++depth_;

    std::map<std::string, std::vector<Term>> by_predicate;
    std::vector<std::string> types;
    for (const auto& t : graph_.match(node, std::nullopt, std::nullopt)) {
      if (t.predicate().value() == vocab::kRdfType && t.object().is_iri()) {
        types.push_back(iri_ref(t.object().value()));
      } else {
        by_predicate[iri_ref(t.predicate().value())].push_back(t.object());
      }
    }
    if (types.size() == 1) {
      obj["@type"] = types.front();
    } else if (!types.empty()) {
      obj["@type"] = types;
    }
    for (const auto& [key, objects] : by_predicate) {
      if (objects.size() == 1) {
        obj[key] = value_object(objects.front());
      } else {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& o : objects) values.push_back(value_object(o));
        obj[key] = std::move(values);
      }
    }
    --depth_;
    return obj;
  }

  // A blank node that some node inside its own closure points back to.
  bool self_referenced(const Term& node) {
    std::vector<Term> stack{node};
    std::set<Term> seen{node};
    while (!stack.empty()) {
      const Term cur = stack.back();
      stack.pop_back();
      for (const auto& t : graph_.match(cur, std::nullopt, std::nullopt)) {
        if (!t.object().is_blank()) continue;
        if (t.object() == node) return true;
        if (seen.insert(t.object()).second) stack.push_back(t.object());
      }
    }
    return false;
  }

  const Graph& graph_;
  const PrefixMap& prefixes_;
  std::map<Term, std::size_t> references_;
  std::set<Term> embedded_;
  std::size_t depth_ = 0;
};

}  // namespace

PrefixMap default_prefixes() {
  return {{"rdf", std::string(vocab::kRdfNs)},       {"rdfs", std::string(vocab::kRdfsNs)},
          {"xsd", std::string(vocab::kXsdNs)},       {"owl", std::string(vocab::kOwlNs)},
          {"schema", std::string(vocab::kSchemaNs)}, {"tifsem", std::string(vocab::kTifsemNs)}};
}

std::string term_to_ntriples(const Term& term, const NTriplesOptions& options) {
  std::string out;
  switch (term.kind()) {
    case TermKind::Iri:
      out += "<";
      append_maybe_ascii(out, term.value(), options.ascii);
      out += ">";
      return out;
    case TermKind::BlankNode:
      return "_:" + term.value();
    case TermKind::Literal:
      out += "\"";
      append_escaped_string(out, term.value(), options.ascii);
      out += "\"";
      if (!term.language().empty()) {
        out += "@" + term.language();
      } else if (term.datatype() != vocab::kXsdString) {
        out += "^^<";
        append_maybe_ascii(out, term.datatype(), options.ascii);
        out += ">";
      }
      return out;
  }
  return out;
}

std::string to_ntriples(const Graph& graph, const NTriplesOptions& options) {
  std::vector<std::tuple<std::string, std::string, std::string>> rows;
  rows.reserve(graph.size());
  for (const auto& t : graph.triples()) {
    rows.emplace_back(term_to_ntriples(t.subject(), options), term_to_ntriples(t.predicate(), options),
                      term_to_ntriples(t.object(), options));
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [s, p, o] : rows) {
    out += s;
    out += ' ';
    out += p;
    out += ' ';
    out += o;
    out += " .\n";
  }
  return out;
}

Graph from_ntriples(std::string_view text) {
  Graph graph;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineReader reader(line, line_no);
    try {
      if (auto triple = reader.read_statement()) graph.insert(*triple);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return graph;
}

Term parse_ntriples_term(std::string_view text) {
  LineReader reader(text, 1);
  reader.skip_ws();
  Term term = reader.read_term();
  reader.skip_ws();
  if (!reader.at_end()) reader.fail("trailing characters after term");
  return term;
}

std::string to_turtle(const Graph& graph, const PrefixMap& prefixes) {
  std::string out;
  for (const auto& [prefix, ns] : prefixes) out += "@prefix " + prefix + ": <" + ns + "> .\n";

  // Group by subject in canonical N-Triples order.
  std::map<std::string, std::vector<const Triple*>> by_subject;
  const auto triples = graph.triples();
  for (const auto& t : triples) by_subject[term_to_ntriples(t.subject())].push_back(&t);

  for (auto& [key, list] : by_subject) {
    std::sort(list.begin(), list.end(), [](const Triple* a, const Triple* b) {
      return std::pair(term_to_ntriples(a->predicate()), term_to_ntriples(a->object())) <
             std::pair(term_to_ntriples(b->predicate()), term_to_ntriples(b->object()));
    });
    out += "\n" + turtle_term(list.front()->subject(), prefixes);
    const Term* last_predicate = nullptr;
    for (const Triple* t : list) {
      if (last_predicate && *last_predicate == t->predicate()) {
        out += ",\n        " + turtle_term(t->object(), prefixes);
        continue;
      }
      out += last_predicate ? " ;\n    " : " ";
      out += t->predicate().value() == vocab::kRdfType ? "a" : turtle_term(t->predicate(), prefixes);
      out += " " + turtle_term(t->object(), prefixes);
      last_predicate = &t->predicate();
    }
    out += " .\n";
  }
  return out;
}

nlohmann::json JsonLdDocument::to_json() const {
  nlohmann::json doc = body;
  doc["@context"] = context;
  return doc;
}

std::string JsonLdDocument::dump(int indent) const { return to_json().dump(indent) + "\n"; }

JsonLdDocument to_jsonld(const Graph& graph, const Term& root, const PrefixMap& prefixes) {
  if (root.is_literal() || graph.match(root, std::nullopt, std::nullopt).empty()) {
    throw Error("JSON-LD root is not a subject in the graph: " + term_to_ntriples(root));
  }
  JsonLdDocument doc;
  for (const auto& [prefix, ns] : prefixes) doc.context[prefix] = ns;
  doc.context.try_emplace("schema", std::string(vocab::kSchemaNs));
  JsonLdWriter writer(graph, prefixes);
  doc.body = writer.write(root);
  return doc;
}

Graph ontology_to_graph(const OntologySnapshot& snapshot) {
  Graph g;
  const Term type = Term::iri(vocab::kRdfType);
  const Term label = Term::iri(vocab::rdfs("label"));
  const Term comment = Term::iri(vocab::rdfs("comment"));
  const Term sub_class = Term::iri(vocab::rdfs("subClassOf"));
  for (const auto& [iri, c] : snapshot.classes()) {
    const Term node = Term::iri(iri);
    g.insert(Triple(node, type, Term::iri(vocab::owl("Class"))));
    g.insert(Triple(node, label, Term::literal(c.label)));
    if (!c.description.empty()) g.insert(Triple(node, comment, Term::literal(c.description)));
    if (c.parent) g.insert(Triple(node, sub_class, Term::iri(*c.parent)));
  }
  for (const auto& [iri, p] : snapshot.properties()) {
    const Term node = Term::iri(iri);
    g.insert(Triple(node, type, Term::iri(vocab::rdf("Property"))));
    g.insert(Triple(node, label, Term::literal(p.label)));
  }
  return g;
}

}  // namespace tifsem
