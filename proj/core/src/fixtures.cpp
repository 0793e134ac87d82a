#include "tifsem/fixtures.hpp"

#include <array>
#include <cstdio>
#include <random>

#include "tifsem/vocab.hpp"

namespace tifsem {

namespace {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  // [0, 1) with 53 random bits; independent of the standard library's
  // distribution implementations.
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double symmetric() { return unit() * 2.0 - 1.0; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[below(N)];
  }

 private:
  std::mt19937_64 rng_;
};

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

Decimal decimal(double x, int decimals) { return *Decimal::parse(fixed(x, decimals)); }

const std::array<const char*, 12> kStreets = {
    "quai Duperré", "rue du Palais", "rue Saint-Nicolas", "cours des Dames", "rue des Merciers",
    "avenue Coligny", "rue Chaudrier", "quai Valin", "rue Gargoulleau", "allée du Mail",
    "rue de l'Escale", "boulevard Joffre"};

const std::array<const char*, 8> kHotelNames = {"Hôtel du Port",   "Hôtel des Tours", "Le Champlain",
                                                "Hôtel de la Monnaie", "Les Brises", "Hôtel Saint-Nicolas",
                                                "L'Océan",         "Hôtel du Minage"};
const std::array<const char*, 10> kRestaurantNames = {
    "La Marée", "Le Bistrot du Gabut", "Chez Fernand", "L'Entracte", "Le Comptoir des Voyages",
    "La Cuisine de Jules", "Le Petit Rochelais", "Les Flots", "L'Aunis", "Le Boucanier"};
const std::array<const char*, 6> kBarNames = {"Le Corsaire", "La Guinguette", "Le Cap Horn",
                                              "Bar de la Lanterne", "Le Phare", "L'Écluse"};
const std::array<const char*, 8> kEventNames = {
    "Francofolies", "Fête de la Musique au Gabut", "Marché des Producteurs", "Festival du Film",
    "Fête du Cognac", "Régates du Vieux Port", "Foire aux Melons", "Nuit des Musées"};
const std::array<const char*, 4> kEventKinds = {"MusicEvent", "SocialEvent", "SportsEvent", "Festival"};
const std::array<const char*, 3> kOtherAudiences = {"urban", "coastal", "family"};
const std::array<const char*, 4> kPublicTypes = {"families", "seniors", "students", "all"};
const std::array<const char*, 3> kPayments = {"cash", "card", "cheque-vacances"};

std::string label(const char* base, std::size_t index, std::size_t pool) {
  std::string out = base;
  if (index >= pool) out += " " + std::to_string(index / pool + 1);
  return out;
}

Granule make(GranuleKind kind, std::initializer_list<std::pair<const char*, Value>> fields) {
  Granule g{kind, {}};
  for (const auto& [path, value] : fields) g.fields.emplace(path, value);
  return g;
}

Granule place(Source& src, const FixtureOptions& o, double widen = 1.0) {
  const double lat = kLaRochelleLatitude + src.symmetric() * o.spread_lat * widen;
  const double lon = kLaRochelleLongitude + src.symmetric() * o.spread_lon * widen;
  const std::string street = std::to_string(1 + src.below(60)) + " " + src.pick(kStreets);
  return make(GranuleKind::Geolocations, {{"Geolocation/AddressLine1", street},
                                          {"Geolocation/PostalCode", std::string("17000")},
                                          {"Geolocation/City", std::string("La Rochelle")},
                                          {"Geolocation/Country", std::string("France")},
                                          {"Geolocation/Latitude", decimal(lat, 6)},
                                          {"Geolocation/Longitude", decimal(lon, 6)}});
}

std::string phone(Source& src) {
  std::string out = "+33 5 46";
  for (int i = 0; i < 3; ++i) out += " " + fixed(static_cast<double>(10 + src.below(90)), 0);
  return out;
}

std::string slug(std::string_view prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu", i + 1);
  return std::string(prefix) + "-" + buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string value_lexical(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<Decimal>(&v)) return d->lexical;
  if (const auto* d = std::get_if<Date>(&v)) return d->lexical;
  if (const auto* r = std::get_if<IoRef>(&v)) return r->id;
  return {};
}

std::string category_label(const std::string& iri) {
  if (iri.starts_with(vocab::kSchemaNs)) return iri.substr(vocab::kSchemaNs.size());
  if (iri.starts_with(vocab::kTifsemNs)) return "tifsem:" + iri.substr(vocab::kTifsemNs.size());
  return iri;
}

}  // namespace

std::vector<InformationObject> generate_la_rochelle(const FixtureOptions& o) {
  Source src(o.seed);
  std::vector<InformationObject> out;

  for (std::size_t i = 0; i < o.hotels; ++i) {
    InformationObject io;
    io.id = slug("HOT", i);
    io.categories = {vocab::schema("Hotel")};
    const std::string name = label(kHotelNames[i % kHotelNames.size()], i, kHotelNames.size());
    io.add_granule(make(GranuleKind::DublinCore, {{"DublinCore/Title", name},
                                                  {"DublinCore/Description", std::string("Hôtel en centre-ville")}}));
    io.add_granule(place(src, o));
    io.add_granule(make(GranuleKind::Contacts, {{"Contact/Phone", phone(src)},
                                                {"Contact/Email", "contact@" + io.id + ".example.org"}}));
    io.add_granule(make(GranuleKind::Classifications,
                        {{"Classification/Scheme", std::string("Étoiles")},
                         {"Classification/Rank", std::to_string(1 + src.below(5))}}));
    io.add_granule(make(GranuleKind::Prices, {{"Price/Label", std::string("Chambre double")},
                                              {"Price/Amount", decimal(55 + src.below(140), 2)},
                                              {"Price/Currency", std::string("EUR")},
                                              {"Price/PaymentMeans", std::string(src.pick(kPayments))}}));
    io.add_granule(make(GranuleKind::ReservationModes,
                        {{"ReservationMode/Channel", std::string("online")},
                         {"ReservationMode/Url", "https://" + io.id + ".example.org/booking"}}));
    io.add_granule(make(GranuleKind::Multimedia, {{"Multimedia/Url", "https://" + io.id + ".example.org/front.jpg"},
                                                  {"Multimedia/MediaType", std::string("image/jpeg")}}));
    io.add_granule(make(GranuleKind::Languages, {{"Language/Code", std::string("fr")}}));
    io.add_granule(make(GranuleKind::Languages, {{"Language/Code", std::string("en")}}));
    io.add_granule(make(GranuleKind::Capacity, {{"Capacity/Unit", std::string("rooms")},
                                                {"Capacity/Quantity", decimal(12 + src.below(80), 0)}}));
    out.push_back(std::move(io));
  }

  for (std::size_t i = 0; i < o.restaurants; ++i) {
    InformationObject io;
    io.id = slug("RES", i);
    io.categories = {vocab::schema("Restaurant")};
    io.add_granule(make(GranuleKind::DublinCore,
                        {{"DublinCore/Title", label(kRestaurantNames[i % kRestaurantNames.size()], i,
                                                    kRestaurantNames.size())}}));
    io.add_granule(place(src, o));
    io.add_granule(make(GranuleKind::Contacts, {{"Contact/Phone", phone(src)}}));
    io.add_granule(make(GranuleKind::Schedules, {{"Schedule/Day", std::string("Tuesday-Sunday")},
                                                 {"Schedule/Opens", std::string("12:00")},
                                                 {"Schedule/Closes", std::string("22:30")}}));
    io.add_granule(make(GranuleKind::Prices, {{"Price/Label", std::string("Menu du jour")},
                                              {"Price/Amount", decimal(14 + src.below(30), 2)},
                                              {"Price/Currency", std::string("EUR")}}));
    out.push_back(std::move(io));
  }

  for (std::size_t i = 0; i < o.bars; ++i) {
    InformationObject io;
    io.id = slug("BAR", i);
    io.categories = {vocab::schema("BarOrPub")};
    io.add_granule(make(GranuleKind::DublinCore,
                        {{"DublinCore/Title", label(kBarNames[i % kBarNames.size()], i, kBarNames.size())}}));
    io.add_granule(place(src, o));
    io.add_granule(make(GranuleKind::Schedules, {{"Schedule/Day", std::string("Daily")},
                                                 {"Schedule/Opens", std::string("17:00")},
                                                 {"Schedule/Closes", std::string("02:00")}}));
    out.push_back(std::move(io));
  }

  for (std::size_t i = 0; i < o.events; ++i) {
    InformationObject io;
    io.id = slug("EVT", i);
    const bool rural = i % 3 == 0;
    io.categories = {vocab::schema("Event"), vocab::schema(kEventKinds[i % kEventKinds.size()])};
    io.add_granule(make(GranuleKind::DublinCore,
                        {{"DublinCore/Title", label(kEventNames[i % kEventNames.size()], i, kEventNames.size())}}));
    // Rural events sit further out of town.
    Granule where = place(src, o, rural ? 3.0 : 1.0);
    if (rural) where.fields["Geolocation/Environment"] = std::string("countryside");
    io.add_granule(std::move(where));
    const int day = 1 + static_cast<int>(src.below(20));
    char start[32];
    char end[32];
    std::snprintf(start, sizeof start, "2026-07-%02d", day);
    std::snprintf(end, sizeof end, "2026-07-%02d", day + 1 + static_cast<int>(src.below(7)));
    io.add_granule(make(GranuleKind::Periods, {{"Period/PeriodType", std::string("event")},
                                               {"Period/Start", *Date::parse(start)},
                                               {"Period/End", *Date::parse(end)}}));
    io.add_granule(make(GranuleKind::Customers,
                        {{"Customer/Audience", std::string(rural ? kRuralAudience : src.pick(kOtherAudiences))},
                         {"Customer/PublicType", std::string(src.pick(kPublicTypes))},
                         {"Customer/ExpectedAttendance", decimal(100 * (1 + src.below(50)), 0)}}));
    out.push_back(std::move(io));
  }
  return out;
}

std::string write_tif_xml(const std::vector<InformationObject>& ios) {
  const OntologySnapshot& snapshot = load_core_ontology();
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<TourismData>\n";
  for (const auto& io : ios) {
    out += "  <InformationObject>\n";
    out += "    <Identifier>" + xml_escape(io.id) + "</Identifier>\n";
    for (const auto& c : io.categories) out += "    <Category>" + xml_escape(category_label(c)) + "</Category>\n";
    for (const auto& [kind, list] : io.granules) {
      const GranuleSchema& schema = snapshot.schema(kind);
      for (const auto& g : list) {
        if (g.fields.empty()) {
          out += "    <" + schema.element + "/>\n";
          continue;
        }
        out += "    <" + schema.element + ">\n";
        for (const auto& spec : schema.fields) {
          const auto it = g.fields.find(spec.path);
          if (it == g.fields.end()) continue;
          out += "      <" + spec.name + ">" + xml_escape(value_lexical(it->second)) + "</" + spec.name + ">\n";
        }
        out += "    </" + schema.element + ">\n";
      }
    }
    out += "  </InformationObject>\n";
  }
  out += "</TourismData>\n";
  return out;
}

}  // namespace tifsem
