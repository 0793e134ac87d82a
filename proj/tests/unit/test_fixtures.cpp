#include <gtest/gtest.h>

#include <set>

#include "tifsem/fixtures.hpp"
#include "tifsem/geo.hpp"
#include "tifsem/ingest.hpp"
#include "tifsem/vocab.hpp"

using namespace tifsem;

namespace {

std::size_t count_category(const std::vector<InformationObject>& ios, const char* local) {
  std::size_t n = 0;
  for (const auto& io : ios) {
    for (const auto& c : io.categories) n += c == vocab::schema(local) ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST(Fixtures, SameOptionsSameOutput) {
  EXPECT_EQ(generate_la_rochelle(), generate_la_rochelle());
  EXPECT_NE(generate_la_rochelle({.seed = 18}), generate_la_rochelle());
}

TEST(Fixtures, DefaultCounts) {
  const auto ios = generate_la_rochelle();
  EXPECT_EQ(ios.size(), 32u);
  EXPECT_GE(count_category(ios, "Hotel"), 5u);
  const std::size_t amenities =
      count_category(ios, "Restaurant") + count_category(ios, "BarOrPub") + count_category(ios, "Event");
  EXPECT_GE(amenities, 15u);
  std::set<std::string> ids;
  for (const auto& io : ios) ids.insert(io.id);
  EXPECT_EQ(ids.size(), ios.size());
}

TEST(Fixtures, EveryThirdEventIsRural) {
  std::size_t event = 0;
  for (const auto& io : generate_la_rochelle()) {
    if (!io.id.starts_with("EVT")) continue;
    const auto& customers = io.granules.at(GranuleKind::Customers);
    ASSERT_EQ(customers.size(), 1u);
    const auto& audience = std::get<std::string>(customers[0].fields.at("Customer/Audience"));
    EXPECT_EQ(audience == kRuralAudience, event % 3 == 0) << io.id;
    ++event;
  }
  EXPECT_EQ(event, 8u);
}

TEST(Fixtures, CoordinatesStayNearTheHarbour) {
  for (const auto& io : generate_la_rochelle()) {
    const auto& geo = io.granules.at(GranuleKind::Geolocations).at(0);
    const double lat = std::get<Decimal>(geo.fields.at("Geolocation/Latitude")).to_double();
    const double lon = std::get<Decimal>(geo.fields.at("Geolocation/Longitude")).to_double();
    EXPECT_LT(geo_distance(GeoPoint(lat, lon), GeoPoint(kLaRochelleLatitude, kLaRochelleLongitude)), 20000) << io.id;
  }
}

TEST(Fixtures, AllIosValidate) {
  for (const auto& io : generate_la_rochelle()) EXPECT_TRUE(validate_io(io).empty()) << io.id;
}

TEST(Fixtures, WrittenXmlParsesBack) {
  for (std::uint64_t seed : {1u, 17u, 99u}) {
    const auto ios = generate_la_rochelle({.seed = seed});
    const auto r = parse_tif({"mem:fixture", write_tif_xml(ios), std::nullopt}, DialectProfile::identity());
    EXPECT_TRUE(r.issues.empty());
    EXPECT_EQ(r.ios, ios);
  }
}

TEST(Fixtures, EmptyBatchWritesEmptyRoot) {
  const auto r = parse_tif({"mem:empty", write_tif_xml({}), std::nullopt}, DialectProfile::identity());
  EXPECT_TRUE(r.ios.empty());
  EXPECT_TRUE(r.issues.empty());
}
