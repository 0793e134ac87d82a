#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tifsem {

// The closed set of granules an InformationObject is composed of.
enum class GranuleKind : std::size_t {
  DublinCore,
  Update,
  Multimedia,
  Contacts,
  LegalInformation,
  Classifications,
  RelatedServices,
  Geolocations,
  Periods,
  Customers,
  Languages,
  ReservationModes,
  Prices,
  Capacity,
  OffersServices,
  AdditionalDescription,
  Itineraries,
  Schedules,
};

inline constexpr std::size_t kGranuleKindCount = 18;

inline constexpr std::array<GranuleKind, kGranuleKindCount> kAllGranuleKinds = {
    GranuleKind::DublinCore,       GranuleKind::Update,
    GranuleKind::Multimedia,       GranuleKind::Contacts,
    GranuleKind::LegalInformation, GranuleKind::Classifications,
    GranuleKind::RelatedServices,  GranuleKind::Geolocations,
    GranuleKind::Periods,          GranuleKind::Customers,
    GranuleKind::Languages,        GranuleKind::ReservationModes,
    GranuleKind::Prices,           GranuleKind::Capacity,
    GranuleKind::OffersServices,   GranuleKind::AdditionalDescription,
    GranuleKind::Itineraries,      GranuleKind::Schedules,
};

// "Geolocations", "Prices", ...
std::string_view to_string(GranuleKind kind);
std::optional<GranuleKind> granule_kind_from_string(std::string_view name);

// Class IRI of a granule kind in the tifsem namespace. Total and injective.
std::string class_of(GranuleKind kind);

// A WGS84 coordinate. The constructor rejects non-finite or out-of-range
// values with std::invalid_argument.
class GeoPoint {
 public:
  GeoPoint(double latitude, double longitude);

  static bool is_valid(double latitude, double longitude) noexcept;

  double latitude() const noexcept { return latitude_; }
  double longitude() const noexcept { return longitude_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double latitude_;
  double longitude_;
};

// xsd:decimal held in canonical lexical form ("46.1591", "-1.0", "12.0").
struct Decimal {
  std::string lexical;

  // Accepts an optional sign, digits and one '.' or ',' separator.
  static std::optional<Decimal> parse(std::string_view text);
  double to_double() const;

  friend auto operator<=>(const Decimal&, const Decimal&) = default;
};

// xsd:date, YYYY-MM-DD.
struct Date {
  std::string lexical;

  static std::optional<Date> parse(std::string_view text);

  friend auto operator<=>(const Date&, const Date&) = default;
};

// Reference to another InformationObject by identifier.
struct IoRef {
  std::string id;

  friend auto operator<=>(const IoRef&, const IoRef&) = default;
};

using Value = std::variant<std::string, Decimal, GeoPoint, Date, IoRef>;

// Field values keyed by canonical field path ("Geolocation/City") or, for
// extension fields, by the full extension IRI.
struct Granule {
  GranuleKind kind;
  std::map<std::string, Value> fields;

  friend bool operator==(const Granule&, const Granule&) = default;
};

struct InformationObject {
  std::string id;
  // Class IRIs the resource is an instance of (schema:Hotel, schema:Event, ...).
  std::vector<std::string> categories;
  std::map<GranuleKind, std::vector<Granule>> granules;
  // IO-level extension fields: extension IRI -> text.
  std::map<std::string, std::string> extensions;

  void add_granule(Granule granule);
  std::size_t granule_count() const;

  friend bool operator==(const InformationObject&, const InformationObject&) = default;
};

enum class FieldType { Text, Decimal, Date, Reference };

struct FieldSpec {
  std::string name;       // "Latitude"
  std::string path;       // "Geolocation/Latitude"
  std::string predicate;  // tifsem:latitude
  FieldType type;
};

struct GranuleSchema {
  GranuleKind kind;
  std::string element;  // XML element and field path prefix, e.g. "Geolocation"
  std::string class_iri;
  std::string description;
  std::vector<FieldSpec> fields;
};

struct ConceptDescriptor {
  std::string iri;
  std::string label;
  std::optional<std::string> parent;
  std::string description;
};

struct PropertyDescriptor {
  std::string iri;
  std::string label;
};

// Canonical paths that are not granule fields but are legal rename targets.
inline constexpr std::string_view kInformationObjectTag = "InformationObject";
inline constexpr std::string_view kIdentifierTag = "Identifier";
inline constexpr std::string_view kCategoryTag = "Category";

// The TIFSem class forest, the Schema.org subset it aligns with, and the
// per-granule field schemas. Immutable once built.
class OntologySnapshot {
 public:
  OntologySnapshot(std::vector<ConceptDescriptor> classes,
                   std::vector<PropertyDescriptor> properties,
                   std::vector<GranuleSchema> schemas);

  using ClassMap = std::map<std::string, ConceptDescriptor, std::less<>>;
  using PropertyMap = std::map<std::string, PropertyDescriptor, std::less<>>;

  const ClassMap& classes() const { return classes_; }
  const PropertyMap& properties() const { return properties_; }

  bool has_class(std::string_view iri) const;
  bool has_property(std::string_view iri) const;
  const ConceptDescriptor& concept_of(std::string_view iri) const;  // throws LookupError

  // Reflexive-transitive closure over parent links. Throws LookupError for
  // IRIs the snapshot does not know.
  bool is_subclass(std::string_view sub, std::string_view super) const;
  // iri, parent, grandparent, ... up to the root.
  std::vector<std::string> ancestors(std::string_view iri) const;

  // Classes in the tifsem namespace: the IO root plus one per granule kind.
  std::vector<const ConceptDescriptor*> tifsem_concepts() const;

  const GranuleSchema& schema(GranuleKind kind) const;
  const std::vector<GranuleSchema>& schemas() const { return schemas_; }
  std::optional<GranuleKind> granule_by_element(std::string_view element) const;
  std::optional<GranuleKind> granule_by_class(std::string_view class_iri) const;
  const FieldSpec* field(std::string_view path) const;
  const FieldSpec* field_by_predicate(std::string_view predicate) const;

  // True for granule element names, granule field paths and the reserved
  // IO-level tags.
  bool is_canonical_path(std::string_view path) const;

  // Resolves a category label ("Hotel", "schema:Hotel" or a full IRI) to a
  // known class IRI.
  std::optional<std::string> resolve_category(std::string_view label) const;

 private:
  struct FieldIndex {
    std::size_t schema;
    std::size_t field;
  };
  const FieldSpec* resolve(const std::map<std::string, FieldIndex, std::less<>>& index,
                           std::string_view key) const;

  ClassMap classes_;
  PropertyMap properties_;
  std::vector<GranuleSchema> schemas_;  // indexed by GranuleKind
  std::map<std::string, FieldIndex, std::less<>> fields_by_path_;
  // Several fields may share a predicate; this keeps the first registered.
  std::map<std::string, FieldIndex, std::less<>> fields_by_predicate_;
};

// The embedded core ontology. Built once; safe for concurrent readers.
const OntologySnapshot& load_core_ontology();

}  // namespace tifsem
