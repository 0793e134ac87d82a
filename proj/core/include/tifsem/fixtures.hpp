#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tifsem/ontology.hpp"

namespace tifsem {

// Synthetic La Rochelle dataset: hotels, restaurants, bars and events with
// coordinates scattered around the old harbour. Same options, same output.
struct FixtureOptions {
  std::uint64_t seed = 17;
  std::size_t hotels = 8;
  std::size_t restaurants = 10;
  std::size_t bars = 6;
  std::size_t events = 8;
  // Half-extent of the scatter box in degrees.
  double spread_lat = 0.018;
  double spread_lon = 0.026;
};

inline constexpr double kLaRochelleLatitude = 46.1591;
inline constexpr double kLaRochelleLongitude = -1.1520;

// Value of Customer/Audience marking events aimed at a rural public.
inline constexpr const char* kRuralAudience = "rural";

std::vector<InformationObject> generate_la_rochelle(const FixtureOptions& options = {});

// Canonical TIF XML for a batch of IOs, readable back with the identity
// profile. Extension fields are not written.
std::string write_tif_xml(const std::vector<InformationObject>& ios);

}  // namespace tifsem
