#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "tifsem/errors.hpp"
#include "tifsem/query.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"
#include "utf8.hpp"

namespace tifsem {

namespace {

enum class Tok { End, Iri, PName, Var, String, LangTag, Caret2, Number, Punct, Op, Word };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // IRI body, prefixed name, variable name, unescaped string, number, word
  std::size_t offset = 0;
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

  [[noreturn]] static void fail(std::string_view text, std::size_t offset, const std::string& message) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw QuerySyntaxError(message, offset, line, column);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail(text_, pos_, message); }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  // IRIREF if the text from '<' up to the next '>' has no forbidden chars.
  std::optional<std::size_t> iri_end() const {
    for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
      const auto c = static_cast<unsigned char>(text_[i]);
      if (c == '>') return i;
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`' || c == '\\') {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::string read_local() {
    std::string local;
    while (pos_ < text_.size() && (is_name_char(text_[pos_]) || text_[pos_] == '.')) {
      local.push_back(text_[pos_++]);
    }
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      --pos_;
    }
    return local;
  }

  std::string read_string(char quote) {
    const std::size_t open = pos_++;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail(text_, open, "unterminated string");
      const char c = text_[pos_++];
      if (c == quote) return out;
      if (c == '\n') fail("line break in string");
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = peek();
      ++pos_;
      switch (e) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case 'u':
        case 'U': {
          const std::size_t digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > text_.size()) fail("truncated unicode escape");
          std::uint32_t cp = 0;
          for (std::size_t i = 0; i < digits; ++i) {
            const char h = text_[pos_++];
            if (!std::isxdigit(static_cast<unsigned char>(h))) fail("bad unicode escape");
            cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                          ? h - '0'
                                                          : std::tolower(h) - 'a' + 10);
          }
          detail::append_utf8(out, cp);
          break;
        }
        default: fail("invalid escape in string");
      }
    }
  }

  Token next() {
    Token t;
    t.offset = pos_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];

    if (c == '<') {
      if (auto end = iri_end()) {
        t.kind = Tok::Iri;
        t.text = std::string(text_.substr(pos_ + 1, *end - pos_ - 1));
        pos_ = *end + 1;
        return t;
      }
      t.kind = Tok::Op;
      t.text = peek(1) == '=' ? "<=" : "<";
      pos_ += t.text.size();
      return t;
    }
    if (c == '>' || c == '!' || c == '=') {
      t.kind = Tok::Op;
      if (peek(1) == '=' && c != '=') {
        t.text = std::string{c, '='};
      } else {
        t.text = std::string{c};
      }
      pos_ += t.text.size();
      return t;
    }
    if ((c == '&' && peek(1) == '&') || (c == '|' && peek(1) == '|')) {
      t.kind = Tok::Op;
      t.text = std::string{c, c};
      pos_ += 2;
      return t;
    }
    if (c == '^' && peek(1) == '^') {
      t.kind = Tok::Caret2;
      pos_ += 2;
      return t;
    }
    if (c == '?' || c == '$') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ == start) fail("empty variable name");
      t.kind = Tok::Var;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = Tok::String;
      t.text = read_string(c);
      return t;
    }
    if (c == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == start) fail("empty language tag");
      t.kind = Tok::LangTag;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    const bool signed_number = (c == '-' || c == '+') &&
                               (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                                (peek(1) == '.' && std::isdigit(static_cast<unsigned char>(peek(2)))));
    if (std::isdigit(static_cast<unsigned char>(c)) || signed_number ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      const std::size_t start = pos_;
      if (signed_number) ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t save = pos_;
        ++pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
          pos_ = save;
        } else {
          while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
      }
      t.kind = Tok::Number;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    if (is_name_start(c) || c == ':') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      if (peek() == ':') {
        ++pos_;
        read_local();
        t.kind = Tok::PName;
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
      }
      t.kind = Tok::Word;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    if (std::string_view("{}().,;*").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string{c};
      ++pos_;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), tokens_(Lexer(text).run()) {
    for (const auto& [prefix, ns] : default_prefixes()) prefixes_[prefix] = ns;
  }

  Query parse() {
    Query q;
    while (is_word("PREFIX")) parse_prefix();
    expect_word("SELECT");
    parse_projection(q);
    if (is_word("WHERE")) advance();
    expect_punct("{");
    parse_group(q);
    expect_punct("}");
    if (is_word("ORDER")) {
      advance();
      expect_word("BY");
      parse_order(q);
    }
    if (is_word("LIMIT")) {
      advance();
      const Token& t = peek();
      if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
        fail(t, "LIMIT expects a non-negative integer");
      }
      q.limit = std::stoull(t.text);
      advance();
    }
    if (peek().kind != Tok::End) fail(peek(), "unexpected trailing input");
    finish(q);
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    Lexer::fail(text_, t.offset, message);
  }

  bool is_word(std::string_view w) const { return peek().kind == Tok::Word && iequals(peek().text, w); }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected " + std::string(w));
    advance();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    advance();
  }
  std::string expect_var() {
    if (peek().kind != Tok::Var) fail(peek(), "expected a variable");
    return advance().text;
  }

  void parse_prefix() {
    advance();
    const Token& name = peek();
    if (name.kind != Tok::PName || name.text.back() != ':') fail(name, "expected a prefix name like 'ex:'");
    advance();
    const Token& iri = peek();
    if (iri.kind != Tok::Iri) fail(iri, "expected an IRI");
    prefixes_[name.text.substr(0, name.text.size() - 1)] = iri.text;
    advance();
  }

  void parse_projection(Query& q) {
    if (is_punct("*")) {
      star_ = true;
      advance();
      return;
    }
    while (true) {
      if (peek().kind == Tok::Var) {
        var_positions_.emplace_back(peek().text, peek());
        q.projection.push_back(advance().text);
      } else if (is_word("GROUP-COUNT")) {
        const Token& kw = advance();
        if (q.group_count) fail(kw, "only one GROUP-COUNT per query");
        expect_punct("(");
        var_positions_.emplace_back(peek().text, peek());
        std::string counted = expect_var();
        expect_punct(")");
        expect_word("AS");
        const Token& alias_tok = peek();
        std::string alias = expect_var();
        if (std::find(q.projection.begin(), q.projection.end(), alias) != q.projection.end()) {
          fail(alias_tok, "duplicate column ?" + alias);
        }
        q.group_count = GroupCount{std::move(counted), alias};
        q.projection.push_back(std::move(alias));
      } else {
        break;
      }
    }
    if (q.projection.empty()) fail(peek(), "expected projection variables or '*'");
  }

  Term expand_pname(const Token& t) {
    const auto colon = t.text.find(':');
    const std::string prefix = t.text.substr(0, colon);
    const auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail(t, "unknown prefix '" + prefix + ":'");
    try {
      return Term::iri(it->second + t.text.substr(colon + 1));
    } catch (const std::invalid_argument& e) {
      fail(t, e.what());
    }
  }

  Term make_iri(const Token& t) {
    try {
      return Term::iri(t.text);
    } catch (const std::invalid_argument& e) {
      fail(t, e.what());
    }
  }

  Term parse_literal() {
    const Token& t = advance();
    if (t.kind == Tok::String) {
      if (peek().kind == Tok::LangTag) {
        const Token& lang = advance();
        try {
          return Term::lang_literal(t.text, lang.text);
        } catch (const std::invalid_argument& e) {
          fail(lang, e.what());
        }
      }
      if (peek().kind == Tok::Caret2) {
        advance();
        const Token& dt = advance();
        Term datatype = dt.kind == Tok::Iri     ? make_iri(dt)
                        : dt.kind == Tok::PName ? expand_pname(dt)
                                                : (fail(dt, "expected datatype IRI"), make_iri(dt));
        try {
          return Term::literal(t.text, datatype.value());
        } catch (const std::invalid_argument& e) {
          fail(dt, e.what());
        }
      }
      return Term::literal(t.text);
    }
    if (t.kind == Tok::Number) {
      std::string lexical = t.text;
      if (lexical.front() == '+') lexical.erase(0, 1);
      if (lexical.find_first_of("eE") != std::string::npos) return Term::literal(lexical, vocab::kXsdDouble);
      if (lexical.find('.') != std::string::npos) return Term::literal(lexical, vocab::kXsdDecimal);
      return Term::literal(lexical, vocab::kXsdInteger);
    }
    if (t.kind == Tok::Word && (t.text == "true" || t.text == "false")) {
      return Term::literal(t.text, vocab::kXsdBoolean);
    }
    fail(t, "expected a literal");
  }

  PatternTerm parse_pattern_term(bool predicate_position) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        var_positions_.emplace_back(t.text, t);
        pattern_vars_.insert(t.text);
        return Variable{advance().text};
      case Tok::Iri: advance(); return make_iri(t);
      case Tok::PName: advance(); return expand_pname(t);
      case Tok::Word:
        if (predicate_position && t.text == "a") {
          advance();
          return Term::iri(vocab::kRdfType);
        }
        if (t.text == "true" || t.text == "false") {
          if (predicate_position) fail(t, "literal in predicate position");
          return parse_literal();
        }
        fail(t, "unexpected word '" + t.text + "'");
      case Tok::String:
      case Tok::Number:
        if (predicate_position) fail(t, "literal in predicate position");
        return parse_literal();
      default: fail(t, "expected a variable, IRI or literal");
    }
  }

  void parse_group(Query& q) {
    while (!is_punct("}")) {
      if (peek().kind == Tok::End) fail(peek(), "unterminated group, expected '}'");
      if (is_word("FILTER")) {
        advance();
        expect_punct("(");
        q.filters.push_back(parse_or());
        expect_punct(")");
        if (is_punct(".")) advance();
        continue;
      }
      if (peek().kind == Tok::Punct && peek().text != "(") fail(peek(), "expected a triple pattern");
      const Token& subject_tok = peek();
      PatternTerm subject = parse_pattern_term(false);
      if (const auto* term = std::get_if<Term>(&subject); term && term->is_literal()) {
        fail(subject_tok, "literal in subject position");
      }
      while (true) {
        PatternTerm predicate = parse_pattern_term(true);
        while (true) {
          PatternTerm object = parse_pattern_term(false);
          q.patterns.push_back(TriplePattern{subject, predicate, std::move(object)});
          if (!is_punct(",")) break;
          advance();
        }
        if (!is_punct(";")) break;
        advance();
        if (is_punct(".") || is_punct("}")) break;
      }
      if (is_punct(".")) {
        advance();
      } else if (!is_punct("}") && !is_word("FILTER")) {
        fail(peek(), "expected '.' after triple pattern");
      }
    }
  }

  void parse_order(Query& q) {
    bool any = false;
    while (true) {
      if (peek().kind == Tok::Var) {
        var_positions_.emplace_back(peek().text, peek());
        q.order_by.push_back(OrderKey{advance().text, true});
      } else if (is_word("ASC") || is_word("DESC")) {
        const bool ascending = is_word("ASC");
        advance();
        expect_punct("(");
        var_positions_.emplace_back(peek().text, peek());
        q.order_by.push_back(OrderKey{expect_var(), ascending});
        expect_punct(")");
      } else {
        break;
      }
      any = true;
    }
    if (!any) fail(peek(), "expected ORDER BY key");
  }

  FilterExpr parse_or() {
    std::vector<FilterExpr> parts{parse_and()};
    while (peek().kind == Tok::Op && peek().text == "||") {
      advance();
      parts.push_back(parse_and());
    }
    return parts.size() == 1 ? std::move(parts.front()) : FilterExpr::any_of(std::move(parts));
  }

  FilterExpr parse_and() {
    std::vector<FilterExpr> parts{parse_unary()};
    while (peek().kind == Tok::Op && peek().text == "&&") {
      advance();
      parts.push_back(parse_unary());
    }
    return parts.size() == 1 ? std::move(parts.front()) : FilterExpr::all_of(std::move(parts));
  }

  FilterExpr parse_unary() {
    if (peek().kind == Tok::Op && peek().text == "!") {
      advance();
      return FilterExpr::negate(parse_unary());
    }
    if (is_punct("(")) {
      advance();
      FilterExpr inner = parse_or();
      expect_punct(")");
      return inner;
    }
    return parse_comparison();
  }

  static std::optional<CompareOp> op_of(const Token& t) {
    if (t.kind != Tok::Op) return std::nullopt;
    if (t.text == "<") return CompareOp::Less;
    if (t.text == "<=") return CompareOp::LessEqual;
    if (t.text == "=") return CompareOp::Equal;
    if (t.text == "!=") return CompareOp::NotEqual;
    if (t.text == ">=") return CompareOp::GreaterEqual;
    if (t.text == ">") return CompareOp::Greater;
    return std::nullopt;
  }

  FilterExpr parse_comparison() {
    ValueExpr left = parse_value();
    const auto op = op_of(peek());
    if (!op) fail(peek(), "expected a comparison operator");
    advance();
    const Token& right_tok = peek();
    ValueExpr right = parse_value();
    if (left.kind == ValueExpr::Kind::Distance && *op == CompareOp::Less &&
        right.kind == ValueExpr::Kind::Constant) {
      const auto threshold = numeric_value(*right.constant);
      if (!threshold) fail(right_tok, "distance threshold must be numeric");
      if (!std::isfinite(*threshold) || *threshold <= 0) {
        fail(right_tok, "distance threshold must be positive and finite");
      }
      return FilterExpr::distance_within(std::move(left.args[0]), std::move(left.args[1]), *threshold);
    }
    return FilterExpr::compare(std::move(left), *op, std::move(right));
  }

  ValueExpr parse_value() {
    const Token& t = peek();
    if (t.kind == Tok::Var) {
      var_positions_.emplace_back(t.text, t);
      filter_vars_.emplace_back(t.text, t);
      return ValueExpr::variable(advance().text);
    }
    if (t.kind == Tok::PName && (t.text == "geo:distance" || t.text == "geo:point")) {
      const bool distance = t.text == "geo:distance";
      advance();
      expect_punct("(");
      ValueExpr a = parse_value();
      expect_punct(",");
      ValueExpr b = parse_value();
      expect_punct(")");
      if (distance) {
        for (const ValueExpr* p : {&a, &b}) {
          if (p->kind == ValueExpr::Kind::Distance) fail(t, "geo:distance expects point operands");
        }
        return ValueExpr::distance(std::move(a), std::move(b));
      }
      return ValueExpr::point(std::move(a), std::move(b));
    }
    if (t.kind == Tok::Iri) {
      advance();
      return ValueExpr::constant_term(make_iri(t));
    }
    if (t.kind == Tok::PName) {
      advance();
      return ValueExpr::constant_term(expand_pname(t));
    }
    return ValueExpr::constant_term(parse_literal());
  }

  void finish(Query& q) {
    if (star_) {
      q.projection = q.pattern_variables();
      return;
    }
    std::set<std::string> known = pattern_vars_;
    auto check = [&](const std::string& name, const std::string& role) {
      if (known.contains(name)) return;
      if (q.group_count && name == q.group_count->alias && role == "ordered") return;
      for (const auto& [var, tok] : var_positions_) {
        if (var == name) fail(tok, role + " variable ?" + name + " is unbound (not used in any pattern)");
      }
      fail(peek(), role + " variable ?" + name + " is unbound");
    };
    for (const auto& v : q.projection) {
      if (q.group_count && v == q.group_count->alias) continue;
      check(v, "projected");
    }
    if (q.group_count) {
      check(q.group_count->counted, "counted");
      if (known.contains(q.group_count->alias)) {
        fail(peek(), "count alias ?" + q.group_count->alias + " clashes with a pattern variable");
      }
    }
    for (const auto& k : q.order_by) {
      check(k.variable, "ordered");
      const bool projected = std::find(q.projection.begin(), q.projection.end(), k.variable) != q.projection.end();
      if (q.group_count && !projected) fail(peek(), "ordered variable ?" + k.variable + " is not a grouped column");
    }
    for (const auto& [name, tok] : filter_vars_) {
      if (!known.contains(name)) fail(tok, "filter variable ?" + name + " is unbound");
    }
    std::set<std::string> seen;
    for (const auto& v : q.projection) {
      if (!seen.insert(v).second) fail(peek(), "duplicate column ?" + v);
    }
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
  bool star_ = false;
  std::set<std::string> pattern_vars_;
  std::vector<std::pair<std::string, Token>> var_positions_;
  std::vector<std::pair<std::string, Token>> filter_vars_;
};

void dump_value(std::ostream& out, const ValueExpr& v) {
  switch (v.kind) {
    case ValueExpr::Kind::Variable: out << "?" << v.name; break;
    case ValueExpr::Kind::Constant: out << term_to_ntriples(*v.constant); break;
    case ValueExpr::Kind::Distance:
    case ValueExpr::Kind::Point:
      out << (v.kind == ValueExpr::Kind::Distance ? "(distance " : "(point ");
      dump_value(out, v.args[0]);
      out << " ";
      dump_value(out, v.args[1]);
      out << ")";
      break;
  }
}

void dump_filter(std::ostream& out, const FilterExpr& f) {
  switch (f.kind) {
    case FilterExpr::Kind::Compare:
      out << "(" << to_string(f.op) << " ";
      dump_value(out, f.operands[0]);
      out << " ";
      dump_value(out, f.operands[1]);
      out << ")";
      return;
    case FilterExpr::Kind::DistanceWithin:
      out << "(distance-within ";
      dump_value(out, f.operands[0]);
      out << " ";
      dump_value(out, f.operands[1]);
      out << " " << f.threshold_meters << ")";
      return;
    case FilterExpr::Kind::And:
    case FilterExpr::Kind::Or:
      out << (f.kind == FilterExpr::Kind::And ? "(and" : "(or");
      for (const auto& c : f.children) {
        out << " ";
        dump_filter(out, c);
      }
      out << ")";
      return;
    case FilterExpr::Kind::Not:
      out << "(not ";
      dump_filter(out, f.children.front());
      out << ")";
      return;
  }
}

void dump_pattern_term(std::ostream& out, const PatternTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) {
    out << "?" << v->name;
  } else {
    out << term_to_ntriples(std::get<Term>(t));
  }
}

}  // namespace

ValueExpr ValueExpr::variable(std::string name) {
  ValueExpr v;
  v.kind = Kind::Variable;
  v.name = std::move(name);
  return v;
}

ValueExpr ValueExpr::constant_term(Term term) {
  ValueExpr v;
  v.kind = Kind::Constant;
  v.constant = std::move(term);
  return v;
}

ValueExpr ValueExpr::distance(ValueExpr a, ValueExpr b) {
  ValueExpr v;
  v.kind = Kind::Distance;
  v.args = {std::move(a), std::move(b)};
  return v;
}

ValueExpr ValueExpr::point(ValueExpr latitude, ValueExpr longitude) {
  ValueExpr v;
  v.kind = Kind::Point;
  v.args = {std::move(latitude), std::move(longitude)};
  return v;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Less: return "<";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::Equal: return "=";
    case CompareOp::NotEqual: return "!=";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::Greater: return ">";
  }
  return "?";
}

FilterExpr FilterExpr::compare(ValueExpr left, CompareOp op, ValueExpr right) {
  FilterExpr f;
  f.kind = Kind::Compare;
  f.op = op;
  f.operands = {std::move(left), std::move(right)};
  return f;
}

FilterExpr FilterExpr::distance_within(ValueExpr a, ValueExpr b, double threshold_meters) {
  if (!std::isfinite(threshold_meters) || threshold_meters <= 0) {
    throw std::invalid_argument("distance threshold must be positive and finite");
  }
  FilterExpr f;
  f.kind = Kind::DistanceWithin;
  f.op = CompareOp::Less;
  f.operands = {std::move(a), std::move(b)};
  f.threshold_meters = threshold_meters;
  return f;
}

FilterExpr FilterExpr::all_of(std::vector<FilterExpr> children) {
  FilterExpr f;
  f.kind = Kind::And;
  f.children = std::move(children);
  return f;
}

FilterExpr FilterExpr::any_of(std::vector<FilterExpr> children) {
  FilterExpr f;
  f.kind = Kind::Or;
  f.children = std::move(children);
  return f;
}

FilterExpr FilterExpr::negate(FilterExpr child) {
  FilterExpr f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(child));
  return f;
}

std::vector<std::string> Query::pattern_variables() const {
  std::vector<std::string> out;
  for (const auto& p : patterns) {
    for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
      if (const auto* v = std::get_if<Variable>(t)) {
        if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
      }
    }
  }
  return out;
}

std::string Query::to_string() const {
  std::ostringstream out;
  out << "(select";
  for (const auto& v : projection) {
    if (group_count && v == group_count->alias) {
      out << " (group-count ?" << group_count->counted << " ?" << v << ")";
    } else {
      out << " ?" << v;
    }
  }
  out << "\n  (bgp";
  for (const auto& p : patterns) {
    out << "\n    (triple ";
    dump_pattern_term(out, p.subject);
    out << " ";
    dump_pattern_term(out, p.predicate);
    out << " ";
    dump_pattern_term(out, p.object);
    out << ")";
  }
  out << ")";
  for (const auto& f : filters) {
    out << "\n  (filter ";
    dump_filter(out, f);
    out << ")";
  }
  if (!order_by.empty()) {
    out << "\n  (order";
    for (const auto& k : order_by) out << (k.ascending ? " (asc ?" : " (desc ?") << k.variable << ")";
    out << ")";
  }
  if (limit) out << "\n  (limit " << *limit << ")";
  out << ")\n";
  return out.str();
}

Query parse_query(std::string_view text) { return Parser(text).parse(); }

}  // namespace tifsem
