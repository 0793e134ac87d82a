// Runs the nine primary acceptance checks at their stated tolerances and
// time limits. Prints one PASS/FAIL line per check; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "geo_oracle.hpp"
#include "paths.hpp"
#include "query_oracle.hpp"
#include "rdf_oracles.hpp"
#include "tifsem/errors.hpp"
#include "tifsem/fixtures.hpp"
#include "tifsem/geo.hpp"
#include "tifsem/ingest.hpp"
#include "tifsem/mapping.hpp"
#include "tifsem/ontology.hpp"
#include "tifsem/query.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"

using namespace tifsem;
using namespace tifsem::testing;

namespace {

// Collects the first few failure messages of one check.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 5) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  bool ok() const { return failures_ == 0; }
  std::string notes() const {
    std::string s = notes_.str();
    if (failures_ > 5) s += "; ... " + std::to_string(failures_ - 5) + " more";
    return s;
  }

 private:
  std::size_t failures_ = 0;
  std::ostringstream notes_;
};

std::string S(const char* local) { return vocab::schema(local); }
std::string T(const char* local) { return vocab::tifsem(local); }

Graph fixture_graph(bool materialized) {
  Graph g;
  for (const auto& io : generate_la_rochelle()) assert_io(g, io);
  if (materialized) materialize(g, builtin_rules());
  return g;
}

Graph graph_of(const std::vector<InformationObject>& ios) {
  Graph g;
  for (const auto& io : ios) assert_io(g, io);
  return g;
}

ParseResult parse_fixture(const std::string& name, const DialectProfile& profile) {
  return parse_tif({data_path("fixtures/" + name), read_data("fixtures/" + name), std::nullopt}, profile);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void ontology_census(Check& c) {
  const OntologySnapshot& o = load_core_ontology();
  const auto concepts = o.tifsem_concepts();
  c.expect(concepts.size() == 19, "tifsem concepts: " + std::to_string(concepts.size()));
  std::set<std::string> iris;
  for (const auto* k : concepts) iris.insert(k->iri);
  c.expect(iris.contains(vocab::kInformationObject), "InformationObject missing");
  for (auto kind : kAllGranuleKinds) c.expect(iris.contains(class_of(kind)), "missing " + class_of(kind));
  c.expect(o.ancestors(S("Hotel")) == std::vector<std::string>{S("Hotel"), S("LodgingBusiness"), S("LocalBusiness"),
                                                              S("Place"), S("Thing")},
           "Hotel chain");
  c.expect(o.ancestors(S("Event")) == std::vector<std::string>{S("Event"), S("Thing")}, "Event chain");
  c.expect(o.ancestors(S("ReviewAction")) ==
               std::vector<std::string>{S("ReviewAction"), S("AssessAction"), S("Action"), S("Thing")},
           "ReviewAction chain");
  c.expect(o.ancestors(S("Reservation")) == std::vector<std::string>{S("Reservation"), S("Intangible"), S("Thing")},
           "Reservation chain");
  for (const char* r : {"EventReservation", "FoodEstablishmentReservation", "LodgingReservation"}) {
    c.expect(o.is_subclass(S(r), S("Reservation")), std::string(r) + " under Reservation");
  }
}

void alignment_table(Check& c) {
  using Set = std::set<std::string>;
  const std::map<std::string, Set> table = {
      {T("Multimedia"), {S("MediaObject")}},
      {T("Prices"), {S("Offer"), S("PriceSpecification")}},
      {T("ReservationModes"), {S("Reservation"), S("LodgingReservation")}},
      {T("Classifications"), {S("Rating")}},
      {T("Contacts"), {S("ContactPoint")}},
      {T("LegalInformation"), {S("Organization")}},
      {T("Languages"), {S("Language")}},
      {T("Geolocations"), {S("Place")}},
  };
  for (const auto& [source, targets] : table) {
    c.expect(target_classes(source) == targets, "target_classes " + source);
    Graph g;
    const Term n = Term::blank("n");
    g.insert(Triple(n, Term::iri(vocab::kRdfType), Term::iri(source)));
    materialize(g, builtin_rules());
    Set added;
    for (const auto& t : g.match(n, Term::iri(vocab::kRdfType), std::nullopt)) added.insert(t.object().value());
    added.erase(source);
    c.expect(added == targets, "materialized types of " + source);
    c.expect(g.size() == 1 + targets.size(), "extra triples for " + source);
  }
}

void dialect_equivalence(Check& c) {
  const auto v3 = parse_fixture("fixture_v3.xml", DialectProfile::identity());
  const auto a = parse_fixture("fixture_dialect_a.xml", load_profile(read_data("profiles/profile_a.json")));
  const DialectProfile pb = load_profile(read_data("profiles/profile_b.json"));
  const auto b = parse_fixture("fixture_dialect_b.xml", pb);
  c.expect(error_count(v3.issues) + error_count(a.issues) + error_count(b.issues) == 0, "parse errors");
  const std::string reference = to_ntriples(graph_of(v3.ios));
  c.expect(!reference.empty(), "empty V3 graph");
  c.expect(to_ntriples(graph_of(a.ios)) == reference, "dialect A bytes differ");
  // Dialect B carries one extra tag, kept under its extension namespace.
  Graph without_extensions;
  std::size_t extension_triples = 0;
  for (const auto& t : graph_of(b.ios).triples()) {
    if (pb.extension_namespace && t.predicate().value().starts_with(*pb.extension_namespace)) {
      ++extension_triples;
    } else {
      without_extensions.insert(t);
    }
  }
  c.expect(extension_triples > 0, "dialect B extension not preserved");
  c.expect(to_ntriples(without_extensions) == reference, "dialect B bytes differ outside extensions");
}

void random_queries(Check& c) {
  Rng rng(4242);
  std::size_t errors = 0;
  for (int i = 0; i < 500; ++i) {
    const Graph g = random_graph(rng, {.triples = 1 + rng.below(200), .iris = 14, .blanks = 4, .predicates = 4,
                                       .exotic_text = true, .coordinates = true});
    const std::string text = random_query_text(rng, g, {.max_patterns = 3, .max_filters = 1});
    try {
      const Query q = parse_query(text);
      c.expect(q.patterns.size() <= 3 && q.filters.size() <= 1, "case outside limits: " + text);
      const OracleOutcome expected = brute_force_evaluate(q, g);
      if (expected.type_error) {
        ++errors;
        bool threw = false;
        try {
          evaluate(q, g);
        } catch (const QueryTypeError&) {
          threw = true;
        }
        c.expect(threw, "missing type error: " + text);
      } else {
        c.expect(evaluate(q, g) == expected.table, "differs: " + text);
      }
    } catch (const Error& e) {
      c.expect(false, std::string(e.what()) + ": " + text);
    }
  }
  c.expect(errors < 250, "too many type-error cases: " + std::to_string(errors));
}

void geo_checks(Check& c) {
  const double antipodal = geo_distance(GeoPoint(0, 0), GeoPoint(0, 180));
  c.expect(rel(antipodal, std::numbers::pi * 6371000.0) <= 1e-6, "antipodal distance");
  Rng rng(5151);
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint a(rng.between(-90, 90), rng.between(-180, 180));
    const GeoPoint b(rng.between(-90, 90), rng.between(-180, 180));
    const double d = geo_distance(a, b);
    c.expect(d == geo_distance(b, a), "asymmetric pair");
    c.expect(geo_distance(a, a) == 0.0, "non-zero self distance");
    c.expect(rel(d, vector_distance(a.latitude(), a.longitude(), b.latitude(), b.longitude())) <= 1e-9,
             "oracle disagreement");
  }
}

void example_one(Check& c) {
  const auto ios = generate_la_rochelle();
  struct Site {
    std::string iri;
    double lat;
    double lon;
  };
  auto location = [](const InformationObject& io) {
    const auto& geo = io.granules.at(GranuleKind::Geolocations).at(0);
    return std::pair(std::get<Decimal>(geo.fields.at("Geolocation/Latitude")).to_double(),
                     std::get<Decimal>(geo.fields.at("Geolocation/Longitude")).to_double());
  };
  std::vector<Site> hotels;
  std::vector<Site> amenities;
  for (const auto& io : ios) {
    const auto& cats = io.categories;
    const auto [lat, lon] = location(io);
    const Site site{io_iri(vocab::kDefaultBase, io.id), lat, lon};
    if (std::find(cats.begin(), cats.end(), S("Hotel")) != cats.end()) hotels.push_back(site);
    for (const char* k : {"Restaurant", "BarOrPub", "Event"}) {
      if (std::find(cats.begin(), cats.end(), S(k)) != cats.end()) {
        amenities.push_back(site);
        break;
      }
    }
  }
  c.expect(hotels.size() >= 5, "fewer than 5 hotels");
  c.expect(amenities.size() >= 15, "fewer than 15 amenities");

  // Direct count from the fixture coordinates, strict < 1000 m.
  std::map<std::string, long> direct;
  for (const auto& h : hotels) {
    long n = 0;
    for (const auto& a : amenities) n += vector_distance(h.lat, h.lon, a.lat, a.lon) < 1000 ? 1 : 0;
    if (n > 0) direct[h.iri] = n;
  }

  std::vector<std::pair<long, std::string>> expected;
  for (const auto& [iri, n] : direct) expected.emplace_back(-n, iri);
  std::sort(expected.begin(), expected.end());

  const SolutionTable table = evaluate(parse_query(read_data("queries/example1.rq")), fixture_graph(true));
  std::vector<std::pair<long, std::string>> ranked;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto count = numeric_value(table.rows[i][2]);
    c.expect(count.has_value(), "non-numeric count");
    ranked.emplace_back(-static_cast<long>(count.value_or(0)), table.rows[i][0].value());
    if (i > 0) c.expect(*numeric_value(table.rows[i - 1][2]) >= count.value_or(0), "not descending");
  }
  c.expect(!ranked.empty(), "empty ranking");
  c.expect(ranked == expected, "ranking differs from the coordinate brute force");
}

void example_two(Check& c) {
  std::set<std::string> rural;
  for (const auto& io : generate_la_rochelle()) {
    const auto it = io.granules.find(GranuleKind::Customers);
    if (it == io.granules.end()) continue;
    for (const auto& g : it->second) {
      const auto f = g.fields.find("Customer/Audience");
      if (f != g.fields.end() && std::get<std::string>(f->second) == kRuralAudience) {
        rural.insert(io_iri(vocab::kDefaultBase, io.id));
      }
    }
  }
  const SolutionTable table = evaluate(parse_query(read_data("queries/example2.rq")), fixture_graph(true));
  std::set<std::string> got;
  const auto audience = std::find(table.columns.begin(), table.columns.end(), "audience") - table.columns.begin();
  c.expect(static_cast<std::size_t>(audience) < table.columns.size(), "no audience column");
  for (const auto& row : table.rows) {
    got.insert(row[0].value());
    if (static_cast<std::size_t>(audience) < row.size()) {
      c.expect(row[audience] == Term::literal(kRuralAudience), "audience not bound to rural");
    }
  }
  c.expect(!rural.empty(), "fixture has no rural events");
  c.expect(got == rural, "result set differs from the rural events");
  c.expect(table.rows.size() == rural.size(), "duplicate rows");
}

void round_trips(Check& c) {
  Rng rng(8080);
  for (int i = 0; i < 1000; ++i) {
    const Graph g = random_graph(rng, {.triples = 1 + rng.below(150)});
    try {
      const Graph back = from_ntriples(to_ntriples(g));
      c.expect(equal_up_to_blanks(back.triples(), g.triples()), "N-Triples round trip " + std::to_string(i));
    } catch (const Error& e) {
      c.expect(false, e.what());
    }
  }
  const Graph g = fixture_graph(true);
  for (const auto& io : generate_la_rochelle()) {
    const Term root = Term::iri(io_iri(vocab::kDefaultBase, io.id));
    const auto doc = nlohmann::json::parse(to_jsonld(g, root).dump());
    c.expect(equal_up_to_blanks(expand_jsonld(doc), blank_closure(g, root)), "JSON-LD expansion " + io.id);
  }
}

void materialization_laws(Check& c) {
  auto laws = [&c](Graph g, const std::vector<MappingRule>& rules, const std::string& name) {
    const auto before = g.triples();
    materialize(g, rules);
    const auto once = g.triples();
    c.expect(std::includes(once.begin(), once.end(), before.begin(), before.end()), "not monotone: " + name);
    c.expect(materialize(g, rules).inferred_triples == 0 && g.triples() == once, "not idempotent: " + name);
  };
  laws(fixture_graph(false), builtin_rules(), "la rochelle");
  for (const char* f : {"fixture_v3.xml", "fixture_dialect_a.xml", "fixture_dialect_b.xml"}) {
    const std::string profile = std::string(f) == "fixture_v3.xml"       ? ""
                                : std::string(f) == "fixture_dialect_a.xml" ? "profile_a.json"
                                                                            : "profile_b.json";
    const auto p = profile.empty() ? DialectProfile::identity() : load_profile(read_data("profiles/" + profile));
    laws(graph_of(parse_fixture(f, p).ios), builtin_rules(), f);
  }
  Rng rng(9090);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_graph(rng, {.triples = 1 + rng.below(400), .iris = 30, .blanks = 6, .predicates = 6,
                                 .exotic_text = false});
    // Types and predicates the graph uses, plus builtin rules over them.
    std::vector<std::string> classes;
    std::vector<std::string> predicates;
    for (const auto& t : g.triples()) {
      if (t.predicate().value() == vocab::kRdfType) classes.push_back(t.object().value());
      predicates.push_back(t.predicate().value());
    }
    std::vector<MappingRule> rules = builtin_rules();
    for (std::size_t k = 0; k < 10 && !classes.empty(); ++k) {
      const auto r = static_cast<MappingRelation>(rng.below(4));
      const auto& pool = is_class_relation(r) ? classes : predicates;
      rules.push_back({rng.pick(pool), rng.pick(pool), r});
    }
    laws(std::move(g), rules, "random graph " + std::to_string(i));
  }
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"ontology census", 1, ontology_census},
      {"alignment table fidelity", 1, alignment_table},
      {"dialect equivalence", 1, dialect_equivalence},
      {"query engine vs brute force (500 cases)", 60, random_queries},
      {"geodesic distance", 5, geo_checks},
      {"example 1 ranking", 1, example_one},
      {"example 2 rural events", 1, example_two},
      {"serialization round trips", 30, round_trips},
      {"materialization idempotence and monotonicity", 10, materialization_laws},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& k = criteria[i];
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect(seconds < k.limit_seconds, "over the time limit");
    std::printf("%s %zu %s (%.3f s, limit %.0f s)%s%s\n", check.ok() ? "PASS" : "FAIL", i + 1, k.name, seconds,
                k.limit_seconds, check.ok() ? "" : ": ", check.notes().c_str());
    failed += check.ok() ? 0 : 1;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
