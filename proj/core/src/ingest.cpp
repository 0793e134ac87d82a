#include "tifsem/ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <memory>

#include <nlohmann/json.hpp>

#include "tifsem/errors.hpp"
#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

// ---- XML to a small element tree ------------------------------------------

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
};

constexpr int kCp1252High[32] = {
    0x20AC, -1,     0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, -1,     0x017D, -1,     -1,     0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, -1,     0x017E, 0x0178,
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_cp1252(std::string_view name) {
  const std::string n = lower(name);
  return n == "windows-1252" || n == "cp1252" || n == "x-cp1252";
}

std::string canonical_encoding(std::string_view name) {
  const std::string n = lower(name);
  if (n == "latin1" || n == "latin-1" || n == "iso8859-1" || n == "iso_8859-1" || n == "l1" ||
      n == "iso-8859-1") {
    return "ISO-8859-1";
  }
  if (n == "utf8") return "UTF-8";
  return std::string(name);
}

int XMLCALL unknown_encoding(void*, const XML_Char* name, XML_Encoding* info) {
  if (!is_cp1252(name)) return XML_STATUS_ERROR;
  for (int i = 0; i < 256; ++i) info->map[i] = i;
  for (int i = 0; i < 32; ++i) info->map[0x80 + i] = kCp1252High[i];
  info->data = nullptr;
  info->convert = nullptr;
  info->release = nullptr;
  return XML_STATUS_OK;
}

class TreeBuilder {
 public:
  Element build(const RawDocument& doc) {
    std::optional<std::string> encoding;
    if (doc.declared_encoding) encoding = canonical_encoding(*doc.declared_encoding);
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(encoding ? encoding->c_str() : nullptr), &XML_ParserFree);
    if (!parser) throw Error("cannot allocate XML parser");
    XML_SetUserData(parser.get(), this);
    XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);
    XML_SetUnknownEncodingHandler(parser.get(), &unknown_encoding, nullptr);
    // Documents may name an encoding alias expat does not know.
    if (!encoding) {
      if (auto declared = sniff_declaration(doc.bytes)) {
        const std::string canon = canonical_encoding(*declared);
        if (canon != *declared && !is_cp1252(*declared)) XML_SetEncoding(parser.get(), canon.c_str());
      }
    }
    if (XML_Parse(parser.get(), doc.bytes.data(), static_cast<int>(doc.bytes.size()), XML_TRUE) ==
        XML_STATUS_ERROR) {
      const auto line = XML_GetCurrentLineNumber(parser.get());
      const auto column = XML_GetCurrentColumnNumber(parser.get());
      std::string message = XML_ErrorString(XML_GetErrorCode(parser.get()));
      if (!doc.source_uri.empty()) message = doc.source_uri + ": " + message;
      throw ParseError(message, static_cast<std::size_t>(line), static_cast<std::size_t>(column) + 1);
    }
    return std::move(root_);
  }

 private:
  static std::optional<std::string> sniff_declaration(std::string_view bytes) {
    if (!bytes.starts_with("<?xml")) return std::nullopt;
    const auto end = bytes.find("?>");
    const std::string_view decl = bytes.substr(0, end);
    const auto at = decl.find("encoding");
    if (at == std::string_view::npos) return std::nullopt;
    auto q = decl.find_first_of("\"'", at);
    if (q == std::string_view::npos) return std::nullopt;
    const auto close = decl.find(decl[q], q + 1);
    if (close == std::string_view::npos) return std::nullopt;
    return std::string(decl.substr(q + 1, close - q - 1));
  }

  static void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(data);
    Element e;
    e.name = name;
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) e.attributes.emplace_back(attrs[i], attrs[i + 1]);
    if (self->stack_.empty()) {
      self->root_ = std::move(e);
      self->stack_.push_back(&self->root_);
    } else {
      Element* parent = self->stack_.back();
      parent->children.push_back(std::move(e));
      self->stack_.push_back(&parent->children.back());
    }
  }

  static void XMLCALL on_end(void* data, const XML_Char*) { static_cast<TreeBuilder*>(data)->stack_.pop_back(); }

  static void XMLCALL on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(data);
    if (!self->stack_.empty()) self->stack_.back()->text.append(s, static_cast<std::size_t>(len));
  }

  Element root_;
  std::vector<Element*> stack_;
};

std::string trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string join(std::string_view prefix, std::string_view name) {
  if (prefix.empty()) return std::string(name);
  std::string out(prefix);
  out += '/';
  out += name;
  return out;
}

std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

std::string value_text(const Value& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return "s:" + s; }
    std::string operator()(const Decimal& d) const { return "n:" + d.lexical; }
    std::string operator()(const GeoPoint& p) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "p:%.9f,%.9f", p.latitude(), p.longitude());
      return buf;
    }
    std::string operator()(const Date& d) const { return "d:" + d.lexical; }
    std::string operator()(const IoRef& r) const { return "r:" + r.id; }
  };
  return std::visit(Visitor{}, v);
}

bool is_extension_key(std::string_view key) { return key.find(':') != std::string_view::npos; }

// ---- IO assembly -----------------------------------------------------------

class IoAssembler {
 public:
  IoAssembler(const DialectProfile& profile, const OntologySnapshot& snapshot, ParseStats& stats)
      : profile_(profile), snapshot_(snapshot), stats_(stats) {}

  void run(const Element& io_element, std::vector<ValidationIssue>& issues) {
    for (const auto& [name, value] : io_element.attributes) leaf(join("", "@" + name), value, nullptr);
    for (const auto& child : io_element.children) visit(child, "", nullptr);
    if (io_element.children.empty()) {
      ++stats_.leaves;
      ++stats_.reported;
      warn(std::string(kInformationObjectTag), "resource element has no content");
    }
    for (auto& [path, value] : deferred_) place_deferred(path, value);

    for (auto& [kind, list] : instances_) {
      for (auto& g : list) io_.add_granule(std::move(g));
    }
    if (io_.id.empty()) io_.id = content_digest(io_);
    for (auto& issue : issues_) issue.io_id = io_.id;
    for (auto& issue : validate_io(io_)) {
      // Empty granules were already reported when they were read.
      if (issue.severity == Severity::Warning && empty_reported_.contains(issue.field_path)) continue;
      issues_.push_back(std::move(issue));
    }
    issues.insert(issues.end(), issues_.begin(), issues_.end());
  }

  InformationObject take() { return std::move(io_); }

 private:
  struct Instance {
    GranuleKind kind;
    std::size_t index;
  };

  void warn(std::string path, std::string message) {
    issues_.push_back({Severity::Warning, std::nullopt, std::move(path), std::move(message)});
  }
  void error(std::string path, std::string message) {
    issues_.push_back({Severity::Error, std::nullopt, std::move(path), std::move(message)});
  }

  static std::size_t count_leaves(const Element& e) {
    if (e.children.empty()) return 1 + e.attributes.size();
    std::size_t n = e.attributes.size();
    for (const auto& c : e.children) n += count_leaves(c);
    return n;
  }

  Instance new_instance(GranuleKind kind) {
    auto& list = instances_[kind];
    list.push_back(Granule{kind, {}});
    return Instance{kind, list.size() - 1};
  }

  Granule& granule(const Instance& in) { return instances_[in.kind][in.index]; }

  void visit(const Element& e, const std::string& parent_path, const Instance* context) {
    const std::string raw = join(parent_path, e.name);
    if (e.children.empty()) {
      leaf(raw, e.text, context);
      for (const auto& [name, value] : e.attributes) leaf(join(raw, "@" + name), value, context);
      return;
    }
    const NormalizedTag norm = normalize_tag(raw, profile_);
    if (norm.kind == NormalizedTag::Kind::Dropped) {
      const std::size_t n = count_leaves(e);
      stats_.leaves += n;
      stats_.dropped += n;
      return;
    }
    std::optional<Instance> own;
    if (norm.kind == NormalizedTag::Kind::Canonical) {
      if (auto kind = snapshot_.granule_by_element(norm.path)) own = new_instance(*kind);
    }
    const Instance* inner = own ? &*own : context;
    for (const auto& [name, value] : e.attributes) leaf(join(raw, "@" + name), value, inner);
    for (const auto& child : e.children) visit(child, raw, inner);
  }

  void leaf(const std::string& raw, const std::string& text, const Instance* context) {
    ++stats_.leaves;
    const NormalizedTag norm = normalize_tag(raw, profile_);
    const std::string value = trim(text);
    switch (norm.kind) {
      case NormalizedTag::Kind::Dropped: ++stats_.dropped; return;
      case NormalizedTag::Kind::Extension: extension_leaf(norm.path, value, context); return;
      case NormalizedTag::Kind::Canonical: canonical_leaf(norm.path, value, context); return;
    }
  }

  void extension_leaf(const std::string& path, const std::string& value, const Instance* context) {
    if (!profile_.extension_namespace) {
      ++stats_.reported;
      warn(path, "unrecognized element ignored");
      return;
    }
    const std::string key = *profile_.extension_namespace + path;
    const bool fresh = context ? granule(*context).fields.emplace(key, value).second
                               : io_.extensions.emplace(key, value).second;
    if (!fresh) {
      ++stats_.reported;
      warn(path, "repeated extension element ignored");
      return;
    }
    ++stats_.extension;
  }

  void canonical_leaf(const std::string& path, const std::string& value, const Instance* context) {
    if (path == kIdentifierTag) {
      if (value.empty()) {
        ++stats_.reported;
        warn(path, "empty identifier ignored");
      } else if (!io_.id.empty()) {
        ++stats_.reported;
        warn(path, "second identifier ignored");
      } else {
        io_.id = value;
        ++stats_.mapped;
      }
      return;
    }
    if (path == kCategoryTag) {
      if (auto iri = snapshot_.resolve_category(value)) {
        if (std::find(io_.categories.begin(), io_.categories.end(), *iri) == io_.categories.end()) {
          io_.categories.push_back(*iri);
        }
        ++stats_.mapped;
      } else {
        ++stats_.reported;
        warn(path, "unknown category '" + value + "'");
      }
      return;
    }
    if (path == kInformationObjectTag) {
      ++stats_.reported;
      warn(path, "nested resource element ignored");
      return;
    }
    if (auto kind = snapshot_.granule_by_element(path)) {
      // A granule element without content.
      new_instance(*kind);
      empty_reported_.insert(path);
      ++stats_.reported;
      warn(path, "empty granule");
      return;
    }
    const FieldSpec* spec = snapshot_.field(path);
    if (value.empty()) {
      ++stats_.reported;
      warn(path, "empty value ignored");
      return;
    }
    const auto kind = snapshot_.granule_by_element(path.substr(0, path.find('/')));
    if (context && kind && context->kind == *kind) {
      store(granule(*context), *spec, value);
    } else {
      deferred_.emplace_back(path, value);
    }
  }

  // Fields named outside their granule element go to the first instance of
  // that granule, created if the IO has none.
  void place_deferred(const std::string& path, const std::string& value) {
    const FieldSpec* spec = snapshot_.field(path);
    const GranuleKind kind = *snapshot_.granule_by_element(path.substr(0, path.find('/')));
    auto& list = instances_[kind];
    if (list.empty()) list.push_back(Granule{kind, {}});
    store(list.front(), *spec, value);
  }

  void store(Granule& g, const FieldSpec& spec, const std::string& text) {
    if (g.fields.contains(spec.path)) {
      ++stats_.reported;
      warn(spec.path, "repeated field ignored");
      return;
    }
    std::optional<Value> value;
    switch (spec.type) {
      case FieldType::Text: value = text; break;
      case FieldType::Decimal:
        if (auto d = Decimal::parse(text)) value = *d;
        break;
      case FieldType::Date:
        if (auto d = Date::parse(text)) value = *d;
        break;
      case FieldType::Reference: value = IoRef{text}; break;
    }
    if (!value) {
      ++stats_.reported;
      error(spec.path, "invalid " + std::string(spec.type == FieldType::Date ? "date" : "decimal") + " '" +
                           text + "'");
      return;
    }
    g.fields.emplace(spec.path, std::move(*value));
    ++stats_.mapped;
  }

  const DialectProfile& profile_;
  const OntologySnapshot& snapshot_;
  ParseStats& stats_;
  InformationObject io_;
  std::map<GranuleKind, std::vector<Granule>> instances_;
  std::vector<std::pair<std::string, std::string>> deferred_;
  std::set<std::string> empty_reported_;
  std::vector<ValidationIssue> issues_;
};

std::size_t leaves_below(const Element& e) {
  if (e.children.empty()) return 1 + e.attributes.size();
  std::size_t n = e.attributes.size();
  for (const auto& c : e.children) n += leaves_below(c);
  return n;
}

}  // namespace

// ---- profiles --------------------------------------------------------------

DialectProfile DialectProfile::identity() {
  DialectProfile p;
  p.name = "identity";
  return p;
}

void DialectProfile::validate(const OntologySnapshot& snapshot) const {
  for (const auto& [from, to] : tag_renames) {
    if (from.empty()) throw ProfileError("profile " + name + ": empty tag path");
    if (!snapshot.is_canonical_path(to)) {
      throw ProfileError("profile " + name + ": '" + from + "' renamed to unknown canonical path '" + to + "'");
    }
    if (dropped_tags.contains(from)) {
      throw ProfileError("profile " + name + ": '" + from + "' is both renamed and dropped");
    }
  }
  for (const auto& d : dropped_tags) {
    if (d.empty()) throw ProfileError("profile " + name + ": empty dropped tag path");
  }
}

DialectProfile load_profile(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProfileError(std::string("profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileError("profile must be a JSON object");
  DialectProfile p;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "name") {
        p.name = value.get<std::string>();
      } else if (key == "tag_renames") {
        if (!value.is_object()) throw ProfileError("tag_renames must be an object");
        for (const auto& [from, to] : value.items()) p.tag_renames.emplace(from, to.get<std::string>());
      } else if (key == "dropped_tags") {
        if (!value.is_array()) throw ProfileError("dropped_tags must be an array");
        for (const auto& d : value) p.dropped_tags.insert(d.get<std::string>());
      } else if (key == "extension_namespace") {
        if (!value.is_null()) p.extension_namespace = value.get<std::string>();
      } else {
        throw ProfileError("unknown profile key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ProfileError(std::string("profile has a value of the wrong type: ") + e.what());
  }
  p.validate(load_core_ontology());
  return p;
}

std::string save_profile(const DialectProfile& profile) {
  nlohmann::ordered_json doc;
  doc["name"] = profile.name;
  doc["tag_renames"] = nlohmann::ordered_json::object();
  for (const auto& [from, to] : profile.tag_renames) doc["tag_renames"][from] = to;
  doc["dropped_tags"] = nlohmann::ordered_json::array();
  for (const auto& d : profile.dropped_tags) doc["dropped_tags"].push_back(d);
  doc["extension_namespace"] = nullptr;
  if (profile.extension_namespace) doc["extension_namespace"] = *profile.extension_namespace;
  return doc.dump(2) + "\n";
}

// ---- issues ----------------------------------------------------------------

std::string format_issue(const ValidationIssue& issue) {
  std::string out = issue.severity == Severity::Error ? "ERROR" : "WARNING";
  out += '\t';
  out += one_line(issue.io_id.value_or(""));
  out += '\t';
  out += one_line(issue.field_path);
  out += '\t';
  out += one_line(issue.message);
  return out;
}

std::string format_issues(const std::vector<ValidationIssue>& issues) {
  std::string out;
  for (const auto& i : issues) out += format_issue(i) + "\n";
  return out;
}

std::size_t error_count(const std::vector<ValidationIssue>& issues) {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [](const auto& i) { return i.severity == Severity::Error; }));
}

// ---- normalization ---------------------------------------------------------

NormalizedTag normalize_tag(std::string_view raw_path, const DialectProfile& profile) {
  const OntologySnapshot& snapshot = load_core_ontology();
  const std::string raw(raw_path);
  if (profile.dropped_tags.contains(raw)) return {NormalizedTag::Kind::Dropped, {}};
  if (auto it = profile.tag_renames.find(raw); it != profile.tag_renames.end()) {
    return {NormalizedTag::Kind::Canonical, it->second};
  }
  // Longest proper prefix made of whole segments.
  for (auto cut = raw.rfind('/'); cut != std::string::npos && cut > 0; cut = raw.rfind('/', cut - 1)) {
    const std::string prefix = raw.substr(0, cut);
    if (profile.dropped_tags.contains(prefix)) return {NormalizedTag::Kind::Dropped, {}};
    if (auto it = profile.tag_renames.find(prefix); it != profile.tag_renames.end()) {
      std::string path = it->second + raw.substr(cut);
      const bool canonical = snapshot.is_canonical_path(path);
      return {canonical ? NormalizedTag::Kind::Canonical : NormalizedTag::Kind::Extension, std::move(path)};
    }
  }
  return {snapshot.is_canonical_path(raw) ? NormalizedTag::Kind::Canonical : NormalizedTag::Kind::Extension, raw};
}

// ---- parsing ---------------------------------------------------------------

ParseResult parse_tif(const RawDocument& doc, const DialectProfile& profile) {
  const OntologySnapshot& snapshot = load_core_ontology();
  profile.validate(snapshot);
  const Element root = TreeBuilder().build(doc);

  ParseResult result;
  std::set<std::string> seen_ids;
  for (const auto& child : root.children) {
    const NormalizedTag norm = normalize_tag(child.name, profile);
    if (norm.kind == NormalizedTag::Kind::Dropped) {
      const std::size_t n = leaves_below(child);
      result.stats.leaves += n;
      result.stats.dropped += n;
      continue;
    }
    if (norm.kind != NormalizedTag::Kind::Canonical || norm.path != kInformationObjectTag) {
      const std::size_t n = leaves_below(child);
      result.stats.leaves += n;
      result.stats.reported += n;
      result.issues.push_back(
          {Severity::Warning, std::nullopt, child.name, "element is not a resource; " + std::to_string(n) +
                                                            " value(s) ignored"});
      continue;
    }
    IoAssembler assembler(profile, snapshot, result.stats);
    assembler.run(child, result.issues);
    InformationObject io = assembler.take();
    if (!seen_ids.insert(io.id).second) {
      result.issues.push_back({Severity::Error, io.id, std::string(kIdentifierTag), "duplicate identifier"});
    }
    result.ios.push_back(std::move(io));
  }
  return result;
}

std::vector<ValidationIssue> validate_io(const InformationObject& io) {
  const OntologySnapshot& snapshot = load_core_ontology();
  std::vector<ValidationIssue> out;
  const std::optional<std::string> id = io.id.empty() ? std::nullopt : std::optional(io.id);
  auto add = [&](Severity s, std::string path, std::string message) {
    out.push_back({s, id, std::move(path), std::move(message)});
  };
  if (io.id.empty()) add(Severity::Error, std::string(kIdentifierTag), "missing identifier");
  for (const auto& c : io.categories) {
    if (!snapshot.has_class(c)) add(Severity::Error, std::string(kCategoryTag), "unknown category " + c);
  }
  for (const auto& [kind, list] : io.granules) {
    const GranuleSchema& schema = snapshot.schema(kind);
    if (list.empty()) add(Severity::Error, schema.element, "granule list is empty");
    for (const auto& g : list) {
      if (g.kind != kind) {
        add(Severity::Error, schema.element, "granule of kind " + std::string(to_string(g.kind)) + " filed under " +
                                                 std::string(to_string(kind)));
        continue;
      }
      if (g.fields.empty()) add(Severity::Warning, schema.element, "empty granule");
      for (const auto& [path, value] : g.fields) {
        if (is_extension_key(path)) continue;
        const FieldSpec* spec = snapshot.field(path);
        if (spec == nullptr || !path.starts_with(schema.element + "/")) {
          add(Severity::Error, path, "field not registered for " + std::string(to_string(kind)));
          continue;
        }
        if (spec->predicate == vocab::kLatitude || spec->predicate == vocab::kLongitude) {
          const bool lat = spec->predicate == vocab::kLatitude;
          const double limit = lat ? 90.0 : 180.0;
          std::optional<double> x;
          if (const auto* d = std::get_if<Decimal>(&value)) x = d->to_double();
          if (x && !(*x >= -limit && *x <= limit)) {
            add(Severity::Error, path, std::string(lat ? "latitude" : "longitude") + " out of range");
          }
        }
      }
    }
  }
  return out;
}

std::string content_digest(const InformationObject& io) {
  std::vector<std::string> items;
  for (const auto& c : io.categories) items.push_back("category\t" + c);
  for (const auto& [kind, list] : io.granules) {
    for (const auto& g : list) {
      for (const auto& [path, value] : g.fields) {
        if (!is_extension_key(path)) items.push_back(path + "\t" + value_text(value));
      }
    }
  }
  std::sort(items.begin(), items.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& item : items) {
    for (unsigned char c : item) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x0A;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tifsem
