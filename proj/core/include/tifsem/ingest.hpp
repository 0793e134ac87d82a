#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tifsem/ontology.hpp"

namespace tifsem {

// How one producer's tag vocabulary maps onto the canonical one. Paths are
// '/'-joined tag names relative to the resource element; attributes appear
// as "Element/@name".
struct DialectProfile {
  std::string name;
  std::map<std::string, std::string> tag_renames;  // dialect path -> canonical path
  std::set<std::string> dropped_tags;
  std::optional<std::string> extension_namespace;

  // Canonical tags only, unknown tags reported as warnings.
  static DialectProfile identity();

  // Throws ProfileError when a rename target is not canonical or a path is
  // both renamed and dropped.
  void validate(const OntologySnapshot& snapshot) const;

  friend bool operator==(const DialectProfile&, const DialectProfile&) = default;
};

// Reads a profile document:
//   {"name": ..., "tag_renames": {...}, "dropped_tags": [...],
//    "extension_namespace": "..." | null}
// and validates it against the core ontology. Throws ProfileError.
DialectProfile load_profile(std::string_view json_text);
std::string save_profile(const DialectProfile& profile);

struct RawDocument {
  std::string source_uri;
  std::string bytes;
  // Overrides the XML declaration. UTF-8, ISO-8859-1 (and aliases such as
  // "latin1"), windows-1252, US-ASCII, UTF-16.
  std::optional<std::string> declared_encoding;
};

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity;
  std::optional<std::string> io_id;
  std::string field_path;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

// SEVERITY<TAB>io_id<TAB>field_path<TAB>message, no trailing newline.
std::string format_issue(const ValidationIssue& issue);
// One line per issue, each ending in "\n".
std::string format_issues(const std::vector<ValidationIssue>& issues);
std::size_t error_count(const std::vector<ValidationIssue>& issues);

struct NormalizedTag {
  enum class Kind { Canonical, Dropped, Extension };

  Kind kind;
  // Canonical: the canonical path. Extension: the path after prefix renames.
  // Dropped: empty.
  std::string path;

  friend bool operator==(const NormalizedTag&, const NormalizedTag&) = default;
};

// Exact match over renames and drops first, then the longest matching
// prefix (whole segments); the unmatched tail is appended to a renamed
// prefix. Unmatched paths stay as they are and are classified by whether
// they are canonical.
NormalizedTag normalize_tag(std::string_view raw_path, const DialectProfile& profile);

// Where each leaf value (element without child elements, or attribute) ended up.
struct ParseStats {
  std::size_t leaves = 0;
  std::size_t mapped = 0;
  std::size_t extension = 0;
  std::size_t dropped = 0;
  std::size_t reported = 0;

  friend bool operator==(const ParseStats&, const ParseStats&) = default;
};

struct ParseResult {
  std::vector<InformationObject> ios;
  std::vector<ValidationIssue> issues;
  ParseStats stats;
};

// Each child of the document element whose tag normalizes to
// InformationObject becomes one IO. Throws ParseError (with line/column) on
// malformed XML and ProfileError on an invalid profile. Pure: safe to call
// concurrently for different documents.
ParseResult parse_tif(const RawDocument& doc, const DialectProfile& profile);

// Invariant checks that do not modify the IO.
std::vector<ValidationIssue> validate_io(const InformationObject& io);

// Hex digest of an IO's canonical field multiset (categories and granule
// fields, extension fields excluded). Used as identifier fallback.
std::string content_digest(const InformationObject& io);

}  // namespace tifsem
