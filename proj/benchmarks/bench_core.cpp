#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "tifsem/fixtures.hpp"
#include "tifsem/geo.hpp"
#include "tifsem/ingest.hpp"
#include "tifsem/mapping.hpp"
#include "tifsem/query.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"

using namespace tifsem;

namespace {

std::string read_data(const std::string& rel) {
  std::ifstream in(std::string(TIFSEM_DATA_DIR) + "/" + rel, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// The La Rochelle dataset scaled by `factor` in every category.
Graph scaled_fixture(std::size_t factor, bool materialized) {
  FixtureOptions o;
  o.hotels *= factor;
  o.restaurants *= factor;
  o.bars *= factor;
  o.events *= factor;
  Graph g;
  for (const auto& io : generate_la_rochelle(o)) assert_io(g, io);
  if (materialized) materialize(g, builtin_rules());
  return g;
}

void BM_GraphInsert(benchmark::State& state) {
  const auto ios = generate_la_rochelle();
  for (auto _ : state) {
    Graph g;
    for (const auto& io : ios) assert_io(g, io);
    benchmark::DoNotOptimize(g.size());
  }
}
BENCHMARK(BM_GraphInsert);

void BM_GraphMatchByPredicate(benchmark::State& state) {
  const Graph g = scaled_fixture(static_cast<std::size_t>(state.range(0)), true);
  const Term type = Term::iri(vocab::kRdfType);
  for (auto _ : state) benchmark::DoNotOptimize(g.match(std::nullopt, type, std::nullopt).size());
  state.counters["triples"] = static_cast<double>(g.size());
}
BENCHMARK(BM_GraphMatchByPredicate)->Arg(1)->Arg(8);

void BM_Materialize(benchmark::State& state) {
  const Graph base = scaled_fixture(static_cast<std::size_t>(state.range(0)), false);
  for (auto _ : state) {
    Graph g = base;
    benchmark::DoNotOptimize(materialize(g, builtin_rules()).inferred_triples);
  }
}
BENCHMARK(BM_Materialize)->Arg(1)->Arg(8);

void BM_ExampleOneQuery(benchmark::State& state) {
  const Graph g = scaled_fixture(static_cast<std::size_t>(state.range(0)), true);
  const Query q = parse_query(read_data("queries/example1.rq"));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(q, g).rows.size());
}
BENCHMARK(BM_ExampleOneQuery)->Arg(1)->Arg(4);

void BM_ToNTriples(benchmark::State& state) {
  const Graph g = scaled_fixture(static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(to_ntriples(g).size());
}
BENCHMARK(BM_ToNTriples)->Arg(1)->Arg(8);

void BM_ParseTif(benchmark::State& state) {
  const RawDocument doc{"mem:bench", write_tif_xml(generate_la_rochelle()), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(parse_tif(doc, DialectProfile::identity()).ios.size());
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.bytes.size()));
}
BENCHMARK(BM_ParseTif);

void BM_Haversine(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-90, 90);
  std::uniform_real_distribution<double> lon(-180, 180);
  std::vector<GeoPoint> points;
  for (int i = 0; i < 1024; ++i) points.emplace_back(lat(rng), lon(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo_distance(points[i & 1023], points[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Haversine);

}  // namespace

BENCHMARK_MAIN();
