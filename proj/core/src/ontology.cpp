#include "tifsem/ontology.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "tifsem/errors.hpp"
#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

constexpr std::array<std::string_view, kGranuleKindCount> kKindNames = {
    "DublinCore",      "Update",           "Multimedia",   "Contacts",
    "LegalInformation", "Classifications", "RelatedServices", "Geolocations",
    "Periods",         "Customers",        "Languages",    "ReservationModes",
    "Prices",          "Capacity",         "OffersServices", "AdditionalDescription",
    "Itineraries",     "Schedules",
};

std::string lower_camel(std::string_view name) {
  std::string out(name);
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

struct FieldDef {
  std::string_view name;
  FieldType type;
};

GranuleSchema make_schema(GranuleKind kind, std::string_view element, std::string_view description,
                          std::initializer_list<FieldDef> fields) {
  GranuleSchema schema{kind, std::string(element), class_of(kind), std::string(description), {}};
  for (const auto& def : fields) {
    schema.fields.push_back(FieldSpec{std::string(def.name),
                                      std::string(element) + "/" + std::string(def.name),
                                      vocab::tifsem(lower_camel(def.name)), def.type});
  }
  return schema;
}

std::vector<GranuleSchema> core_schemas() {
  using enum FieldType;
  using K = GranuleKind;
  std::vector<GranuleSchema> s;
  s.push_back(make_schema(K::DublinCore, "DublinCore",
                          "Generic descriptive metadata of the resource (title, creator, subject).",
                          {{"Title", Text}, {"Description", Text}, {"Creator", Text},
                           {"Publisher", Text}, {"Subject", Text}, {"Date", Date}, {"Rights", Text}}));
  s.push_back(make_schema(K::Update, "Update",
                          "Revision history and lifecycle state of the record.",
                          {{"Created", Date}, {"Modified", Date}, {"ModifiedBy", Text}, {"Status", Text}}));
  s.push_back(make_schema(K::Multimedia, "Multimedia",
                          "Pictures, videos and other media attached to the resource.",
                          {{"Url", Text}, {"Caption", Text}, {"MediaType", Text}, {"Credit", Text},
                           {"License", Text}}));
  s.push_back(make_schema(K::Contacts, "Contact",
                          "Ways of reaching the resource or the person in charge of it.",
                          {{"Name", Text}, {"Role", Text}, {"Phone", Text}, {"Fax", Text},
                           {"Email", Text}, {"Website", Text}}));
  s.push_back(make_schema(K::LegalInformation, "LegalInformation",
                          "Legal identity of the operating entity and its activity.",
                          {{"LegalName", Text}, {"Siret", Text}, {"LegalForm", Text}, {"VatNumber", Text}}));
  s.push_back(make_schema(K::Classifications, "Classification",
                          "Labels, rankings and quality marks qualifying the resource.",
                          {{"Scheme", Text}, {"Rank", Text}, {"Label", Text}, {"AwardDate", Date}}));
  s.push_back(make_schema(K::RelatedServices, "RelatedService",
                          "Links from the resource to other resources.",
                          {{"Relation", Text}, {"Target", Reference}, {"Label", Text}}));
  s.push_back(make_schema(K::Geolocations, "Geolocation",
                          "Where the resource is and what surrounds it.",
                          {{"AddressLine1", Text}, {"AddressLine2", Text}, {"PostalCode", Text},
                           {"City", Text}, {"Country", Text}, {"Latitude", Decimal},
                           {"Longitude", Decimal}, {"Environment", Text}}));
  s.push_back(make_schema(K::Periods, "Period",
                          "Opening, closing or booking periods.",
                          {{"PeriodType", Text}, {"Start", Date}, {"End", Date}, {"Label", Text}}));
  s.push_back(make_schema(K::Customers, "Customer",
                          "Who the resource is aimed at and who attends it.",
                          {{"Audience", Text}, {"PublicType", Text}, {"AgeGroup", Text},
                           {"ExpectedAttendance", Decimal}}));
  s.push_back(make_schema(K::Languages, "Language",
                          "Languages spoken at the resource.",
                          {{"Code", Text}, {"Label", Text}}));
  s.push_back(make_schema(K::ReservationModes, "ReservationMode",
                          "How customers book the resource and whether booking is mandatory.",
                          {{"Channel", Text}, {"ContactName", Text}, {"Phone", Text}, {"Url", Text},
                           {"Required", Text}}));
  s.push_back(make_schema(K::Prices, "Price",
                          "Prices of the services offered and accepted means of payment.",
                          {{"Label", Text}, {"Amount", Decimal}, {"Currency", Text},
                           {"PaymentMeans", Text}}));
  s.push_back(make_schema(K::Capacity, "Capacity",
                          "How many people or units the resource can take.",
                          {{"Unit", Text}, {"Quantity", Decimal}}));
  s.push_back(make_schema(K::OffersServices, "OfferedService",
                          "Services and equipment available on site or close by.",
                          {{"Name", Text}, {"ServiceType", Text}, {"OnSite", Text}}));
  s.push_back(make_schema(K::AdditionalDescription, "AdditionalDescription",
                          "Free-form complementary description.",
                          {{"Text", Text}, {"TextLanguage", Text}}));
  s.push_back(make_schema(K::Itineraries, "Itinerary",
                          "Routes and outdoor activities tied to the resource, such as hikes.",
                          {{"Name", Text}, {"Activity", Text}, {"LengthKm", Decimal},
                           {"Difficulty", Text}}));
  s.push_back(make_schema(K::Schedules, "Schedule",
                          "Availability of services over given periods.",
                          {{"Day", Text}, {"Opens", Text}, {"Closes", Text}, {"Status", Text}}));
  return s;
}

std::vector<ConceptDescriptor> core_classes(const std::vector<GranuleSchema>& schemas) {
  std::vector<ConceptDescriptor> classes;
  classes.push_back({vocab::kInformationObject, "InformationObject", std::nullopt,
                     "A modular tourism resource (hotel, restaurant, event) built from granules."});
  for (const auto& schema : schemas) {
    classes.push_back({schema.class_iri, std::string(to_string(schema.kind)),
                       vocab::kInformationObject, schema.description});
  }

  auto add = [&](std::string_view local, std::optional<std::string_view> parent) {
    classes.push_back({vocab::schema(local), std::string(local),
                       parent ? std::optional<std::string>(vocab::schema(*parent)) : std::nullopt,
                       "Schema.org " + std::string(local)});
  };
  add("Thing", std::nullopt);
  add("Place", "Thing");
  add("LocalBusiness", "Place");
  add("LodgingBusiness", "LocalBusiness");
  add("Hostel", "LodgingBusiness");
  add("Hotel", "LodgingBusiness");
  add("Motel", "LodgingBusiness");
  add("BedAndBreakfast", "LodgingBusiness");
  add("FoodEstablishment", "LocalBusiness");
  add("Restaurant", "FoodEstablishment");
  add("BarOrPub", "FoodEstablishment");
  add("CafeOrCoffeeShop", "FoodEstablishment");
  add("TouristAttraction", "Place");
  add("Event", "Thing");
  add("MusicEvent", "Event");
  add("SocialEvent", "Event");
  add("SportsEvent", "Event");
  add("Festival", "Event");
  add("Action", "Thing");
  add("AssessAction", "Action");
  add("ReviewAction", "AssessAction");
  add("Intangible", "Thing");
  add("Reservation", "Intangible");
  add("EventReservation", "Reservation");
  add("FoodEstablishmentReservation", "Reservation");
  add("LodgingReservation", "Reservation");
  add("Rating", "Intangible");
  add("Language", "Intangible");
  add("Offer", "Intangible");
  add("StructuredValue", "Intangible");
  add("ContactPoint", "StructuredValue");
  add("PostalAddress", "ContactPoint");
  add("PriceSpecification", "StructuredValue");
  add("GeoCoordinates", "StructuredValue");
  add("CreativeWork", "Thing");
  add("MediaObject", "CreativeWork");
  add("Organization", "Thing");
  return classes;
}

std::vector<PropertyDescriptor> core_properties(const std::vector<GranuleSchema>& schemas) {
  std::vector<PropertyDescriptor> props;
  props.push_back({vocab::kHasGranule, "hasGranule"});
  std::set<std::string> seen{vocab::kHasGranule};
  for (const auto& schema : schemas) {
    for (const auto& field : schema.fields) {
      if (seen.insert(field.predicate).second) {
        props.push_back({field.predicate, field.predicate.substr(vocab::kTifsemNs.size())});
      }
    }
  }
  for (std::string_view local :
       {"address", "latitude", "longitude", "geo", "name", "description", "telephone", "email",
        "faxNumber", "url", "streetAddress", "postalCode", "addressLocality", "addressCountry",
        "price", "priceCurrency", "paymentAccepted", "inLanguage", "ratingValue", "legalName",
        "contentUrl", "caption", "audience", "startDate", "endDate", "openingHours"}) {
    props.push_back({vocab::schema(local), std::string(local)});
  }
  return props;
}

}  // namespace

std::string_view to_string(GranuleKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<GranuleKind> granule_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<GranuleKind>(i);
  }
  return std::nullopt;
}

std::string class_of(GranuleKind kind) { return vocab::tifsem(to_string(kind)); }

GeoPoint::GeoPoint(double latitude, double longitude) : latitude_(latitude), longitude_(longitude) {
  if (!is_valid(latitude, longitude)) {
    throw std::invalid_argument("GeoPoint out of range: (" + std::to_string(latitude) + ", " +
                                std::to_string(longitude) + ")");
  }
}

bool GeoPoint::is_valid(double latitude, double longitude) noexcept {
  return std::isfinite(latitude) && std::isfinite(longitude) && latitude >= -90.0 &&
         latitude <= 90.0 && longitude >= -180.0 && longitude <= 180.0;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string integral;
  std::string fraction;
  bool seen_separator = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      (seen_separator ? fraction : integral).push_back(c);
    } else if ((c == '.' || c == ',') && !seen_separator) {
      seen_separator = true;
    } else {
      return std::nullopt;
    }
  }
  if (integral.empty() && fraction.empty()) return std::nullopt;

  const auto first = integral.find_first_not_of('0');
  integral = first == std::string::npos ? "0" : integral.substr(first);
  const auto last = fraction.find_last_not_of('0');
  fraction = last == std::string::npos ? "0" : fraction.substr(0, last + 1);

  const bool zero = integral == "0" && fraction == "0";
  return Decimal{(negative && !zero ? "-" : "") + integral + "." + fraction};
}

double Decimal::to_double() const { return std::stod(lexical); }

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  }
  const int month = (text[5] - '0') * 10 + (text[6] - '0');
  const int day = (text[8] - '0') * 10 + (text[9] - '0');
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  return Date{std::string(text)};
}

void InformationObject::add_granule(Granule granule) {
  granules[granule.kind].push_back(std::move(granule));
}

std::size_t InformationObject::granule_count() const {
  std::size_t n = 0;
  for (const auto& [kind, list] : granules) n += list.size();
  return n;
}

OntologySnapshot::OntologySnapshot(std::vector<ConceptDescriptor> classes,
                                   std::vector<PropertyDescriptor> properties,
                                   std::vector<GranuleSchema> schemas)
    : schemas_(std::move(schemas)) {
  for (auto& c : classes) {
    const std::string iri = c.iri;
    if (!classes_.emplace(iri, std::move(c)).second) {
      throw Error("ontology: duplicate class " + iri);
    }
  }
  for (const auto& [iri, c] : classes_) {
    std::set<std::string> visited{iri};
    for (auto parent = c.parent; parent; parent = classes_.at(*parent).parent) {
      if (!classes_.contains(*parent)) throw Error("ontology: unknown parent " + *parent);
      if (!visited.insert(*parent).second) throw Error("ontology: cycle through " + iri);
    }
  }
  for (auto& p : properties) {
    const std::string iri = p.iri;
    properties_.emplace(iri, std::move(p));
  }
  for (std::size_t i = 0; i < schemas_.size(); ++i) {
    if (static_cast<std::size_t>(schemas_[i].kind) != i) {
      throw Error("ontology: granule schemas must be ordered by kind");
    }
    for (std::size_t f = 0; f < schemas_[i].fields.size(); ++f) {
      fields_by_path_.emplace(schemas_[i].fields[f].path, FieldIndex{i, f});
      fields_by_predicate_.emplace(schemas_[i].fields[f].predicate, FieldIndex{i, f});
    }
  }
}

bool OntologySnapshot::has_class(std::string_view iri) const { return classes_.contains(iri); }

bool OntologySnapshot::has_property(std::string_view iri) const { return properties_.contains(iri); }

const ConceptDescriptor& OntologySnapshot::concept_of(std::string_view iri) const {
  const auto it = classes_.find(iri);
  if (it == classes_.end()) throw LookupError("unknown class: " + std::string(iri));
  return it->second;
}

bool OntologySnapshot::is_subclass(std::string_view sub, std::string_view super) const {
  concept_of(super);
  for (const ConceptDescriptor* c = &concept_of(sub);;) {
    if (c->iri == super) return true;
    if (!c->parent) return false;
    c = &classes_.find(*c->parent)->second;
  }
}

std::vector<std::string> OntologySnapshot::ancestors(std::string_view iri) const {
  std::vector<std::string> chain;
  for (const ConceptDescriptor* c = &concept_of(iri);;) {
    chain.push_back(c->iri);
    if (!c->parent) return chain;
    c = &classes_.find(*c->parent)->second;
  }
}

std::vector<const ConceptDescriptor*> OntologySnapshot::tifsem_concepts() const {
  std::vector<const ConceptDescriptor*> out;
  for (const auto& [iri, c] : classes_) {
    if (iri.starts_with(vocab::kTifsemNs)) out.push_back(&c);
  }
  return out;
}

const GranuleSchema& OntologySnapshot::schema(GranuleKind kind) const {
  return schemas_.at(static_cast<std::size_t>(kind));
}

std::optional<GranuleKind> OntologySnapshot::granule_by_element(std::string_view element) const {
  for (const auto& s : schemas_) {
    if (s.element == element) return s.kind;
  }
  return std::nullopt;
}

std::optional<GranuleKind> OntologySnapshot::granule_by_class(std::string_view class_iri) const {
  for (const auto& s : schemas_) {
    if (s.class_iri == class_iri) return s.kind;
  }
  return std::nullopt;
}

const FieldSpec* OntologySnapshot::resolve(const std::map<std::string, FieldIndex, std::less<>>& index,
                                           std::string_view key) const {
  const auto it = index.find(key);
  if (it == index.end()) return nullptr;
  return &schemas_[it->second.schema].fields[it->second.field];
}

const FieldSpec* OntologySnapshot::field(std::string_view path) const {
  return resolve(fields_by_path_, path);
}

const FieldSpec* OntologySnapshot::field_by_predicate(std::string_view predicate) const {
  return resolve(fields_by_predicate_, predicate);
}

bool OntologySnapshot::is_canonical_path(std::string_view path) const {
  return path == kInformationObjectTag || path == kIdentifierTag || path == kCategoryTag ||
         granule_by_element(path).has_value() || field(path) != nullptr;
}

std::optional<std::string> OntologySnapshot::resolve_category(std::string_view label) const {
  if (has_class(label)) return std::string(label);
  if (label.starts_with("schema:")) label.remove_prefix(7);
  if (label.starts_with("tifsem:")) {
    const std::string iri = vocab::tifsem(label.substr(7));
    return has_class(iri) ? std::optional(iri) : std::nullopt;
  }
  const std::string iri = vocab::schema(label);
  return has_class(iri) ? std::optional(iri) : std::nullopt;
}

const OntologySnapshot& load_core_ontology() {
  static const OntologySnapshot snapshot = [] {
    auto schemas = core_schemas();
    auto classes = core_classes(schemas);
    auto properties = core_properties(schemas);
    return OntologySnapshot(std::move(classes), std::move(properties), std::move(schemas));
  }();
  return snapshot;
}

}  // namespace tifsem
