#include "tifsem/geo.hpp"

#include <cmath>
#include <numbers>

namespace tifsem {

double geo_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double lat1 = a.latitude() * kRad;
  const double lat2 = b.latitude() * kRad;
  const double dlat = std::sin((lat2 - lat1) / 2.0);
  const double dlon = std::sin((b.longitude() - a.longitude()) * kRad / 2.0);
  // The product terms are ordered so that swapping a and b gives the same
  // floating-point result.
  const double h = dlat * dlat + (std::cos(lat1) * std::cos(lat2)) * (dlon * dlon);
  const double clamped = std::fmin(1.0, std::fmax(0.0, h));
  return 2.0 * kEarthRadiusMeters * std::atan2(std::sqrt(clamped), std::sqrt(1.0 - clamped));
}

}  // namespace tifsem
