#pragma once

#include "tifsem/ontology.hpp"

namespace tifsem {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

// Haversine great-circle distance in meters on a sphere of radius
// kEarthRadiusMeters. Symmetric, non-negative, zero for equal coordinates.
double geo_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

// A distance passes the proximity filter only when strictly below the
// threshold; a distance equal to the threshold is rejected.
constexpr bool filter_within(double distance, double threshold) noexcept { return distance < threshold; }

}  // namespace tifsem
