#pragma once

#include <string>
#include <string_view>

namespace tifsem::vocab {

inline constexpr std::string_view kTifsemNs = "http://example.org/tifsem/ontology#";
inline constexpr std::string_view kSchemaNs = "https://schema.org/";
inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";

inline constexpr std::string_view kDefaultBase = "http://example.org/tifsem";

inline std::string tifsem(std::string_view local) { return std::string(kTifsemNs).append(local); }
inline std::string schema(std::string_view local) { return std::string(kSchemaNs).append(local); }
inline std::string rdf(std::string_view local) { return std::string(kRdfNs).append(local); }
inline std::string rdfs(std::string_view local) { return std::string(kRdfsNs).append(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsdNs).append(local); }
inline std::string owl(std::string_view local) { return std::string(kOwlNs).append(local); }

inline const std::string kRdfType = rdf("type");
inline const std::string kRdfLangString = rdf("langString");
inline const std::string kXsdString = xsd("string");
inline const std::string kXsdDecimal = xsd("decimal");
inline const std::string kXsdInteger = xsd("integer");
inline const std::string kXsdDouble = xsd("double");
inline const std::string kXsdFloat = xsd("float");
inline const std::string kXsdBoolean = xsd("boolean");
inline const std::string kXsdDate = xsd("date");
inline const std::string kXsdDateTime = xsd("dateTime");

inline const std::string kInformationObject = tifsem("InformationObject");
inline const std::string kHasGranule = tifsem("hasGranule");
inline const std::string kLatitude = tifsem("latitude");
inline const std::string kLongitude = tifsem("longitude");
inline const std::string kSchemaLatitude = schema("latitude");
inline const std::string kSchemaLongitude = schema("longitude");

}  // namespace tifsem::vocab
