#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <thread>

#include "rdf_oracles.hpp"
#include "tifsem/errors.hpp"
#include "tifsem/fixtures.hpp"
#include "tifsem/graph.hpp"
#include "tifsem/vocab.hpp"

using namespace tifsem;
using namespace tifsem::testing;

namespace {

Term iri(const std::string& s) { return Term::iri(s); }
Term type() { return iri(vocab::kRdfType); }

InformationObject hotel_with_place() {
  InformationObject io;
  io.id = "HOT-LR-0001";
  Granule g{GranuleKind::Geolocations, {}};
  g.fields.emplace("Geolocation/Latitude", *Decimal::parse("46.15892"));
  g.fields.emplace("Geolocation/Longitude", *Decimal::parse("-1.15153"));
  g.fields.emplace("Geolocation/City", std::string("La Rochelle"));
  io.add_granule(std::move(g));
  return io;
}

}  // namespace

TEST(Term, FactoriesEnforceInvariants) {
  EXPECT_THROW(Term::iri("http://example.org/a b"), std::invalid_argument);
  EXPECT_THROW(Term::iri(""), std::invalid_argument);
  EXPECT_THROW(Term::iri("http://example.org/<x>"), std::invalid_argument);
  EXPECT_THROW(Term::blank(""), std::invalid_argument);
  EXPECT_THROW(Term::blank("a."), std::invalid_argument);
  EXPECT_THROW(Term::literal("x", vocab::kRdfLangString), std::invalid_argument);
  EXPECT_THROW(Term::lang_literal("x", ""), std::invalid_argument);
  EXPECT_THROW(Term::lang_literal("x", "-en"), std::invalid_argument);
  EXPECT_EQ(Term::literal("x").datatype(), vocab::kXsdString);
  EXPECT_EQ(Term::lang_literal("x", "FR-ca").language(), "fr-ca");
  EXPECT_TRUE(Term::lang_literal("x", "en").language().size() > 0);
}

TEST(Term, TripleRejectsLiteralSubjectAndNonIriPredicate) {
  EXPECT_THROW(Triple(Term::literal("x"), type(), iri("http://e/x")), std::invalid_argument);
  EXPECT_THROW(Triple(iri("http://e/x"), Term::blank("b"), iri("http://e/x")), std::invalid_argument);
  EXPECT_NO_THROW(Triple(Term::blank("b"), type(), Term::literal("x")));
}

TEST(Graph, InsertIntoEmpty) {
  Graph g;
  EXPECT_TRUE(g.insert(Triple(iri("http://e/s"), type(), iri("http://e/C"))));
  EXPECT_EQ(g.size(), 1u);
}

TEST(Graph, InsertTwiceKeepsSetSemantics) {
  Graph g;
  const Triple t(iri("http://e/s"), type(), iri("http://e/C"));
  EXPECT_TRUE(g.insert(t));
  EXPECT_FALSE(g.insert(t));
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.contains(t));
}

TEST(Graph, EmptyMatchIsEmpty) {
  Graph g;
  EXPECT_TRUE(g.match(std::nullopt, std::nullopt, std::nullopt).empty());
  EXPECT_TRUE(g.empty());
}

TEST(Graph, FullyBoundMatch) {
  Graph g;
  const Triple t(iri("http://e/s"), iri("http://e/p"), Term::literal("v", vocab::kXsdInteger));
  g.insert(t);
  g.insert(Triple(iri("http://e/s"), iri("http://e/p"), Term::literal("v")));
  const auto m = g.match(t.subject(), t.predicate(), t.object());
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], t);
}

TEST(Graph, InsertionOrderDoesNotMatter) {
  Rng rng(11);
  const Graph source = random_graph(rng, {.triples = 1000, .iris = 60, .blanks = 12, .predicates = 8});
  std::vector<Triple> ts = source.triples();
  ASSERT_EQ(ts.size(), 1000u);
  Graph forward;
  for (const auto& t : ts) forward.insert(t);
  std::shuffle(ts.begin(), ts.end(), rng.engine());
  Graph shuffled;
  for (const auto& t : ts) shuffled.insert(t);
  EXPECT_EQ(forward.triples(), shuffled.triples());
  EXPECT_TRUE(forward.indexes_consistent());
  EXPECT_TRUE(shuffled.indexes_consistent());
}

TEST(Graph, MatchAgreesWithLinearScan) {
  Rng rng(12);
  for (int round = 0; round < 40; ++round) {
    const Graph g = random_graph(rng, {.triples = 150, .iris = 16, .blanks = 4, .predicates = 4});
    const auto ts = g.triples();
    for (int probe = 0; probe < 40; ++probe) {
      const Triple& seed = rng.pick(ts);
      std::optional<Term> s;
      std::optional<Term> p;
      std::optional<Term> o;
      if (rng.chance(0.5)) s = rng.chance(0.9) ? seed.subject() : iri("http://e/missing");
      if (rng.chance(0.5)) p = seed.predicate();
      if (rng.chance(0.5)) o = seed.object();
      ASSERT_EQ(g.match(s, p, o), scan_match(g, s, p, o));
    }
  }
}

TEST(Graph, MatchIdsStopsEarly) {
  Rng rng(13);
  const Graph g = random_graph(rng);
  std::size_t seen = 0;
  g.match_ids(std::nullopt, std::nullopt, std::nullopt, [&](const Graph::IdTriple&) { return ++seen < 5; });
  EXPECT_EQ(seen, 5u);
}

TEST(Graph, SizeEqualsDistinctCountUnderRepeatedInserts) {
  Rng rng(14);
  const Graph source = random_graph(rng, {.triples = 300});
  const auto ts = source.triples();
  Graph g;
  std::set<Triple> reference;
  for (int i = 0; i < 2000; ++i) {
    const Triple& t = rng.pick(ts);
    EXPECT_EQ(g.insert(t), reference.insert(t).second);
    ASSERT_EQ(g.size(), reference.size());
  }
  EXPECT_TRUE(g.indexes_consistent());
}

TEST(Graph, ConcurrentReadersSeeTheSameAnswers) {
  Rng rng(15);
  const Graph g = random_graph(rng, {.triples = 200});
  const auto expected = g.match(std::nullopt, type(), std::nullopt);
  std::vector<std::thread> readers;
  std::vector<bool> ok(8, false);
  for (int i = 0; i < 8; ++i) {
    readers.emplace_back([&, i] {
      bool same = true;
      for (int k = 0; k < 50; ++k) same = same && g.match(std::nullopt, type(), std::nullopt) == expected;
      ok[i] = same;
    });
  }
  for (auto& t : readers) t.join();
  EXPECT_TRUE(std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }));
}

TEST(AssertIo, ZeroGranulesGivesOneTriple) {
  Graph g;
  InformationObject io;
  io.id = "X";
  EXPECT_EQ(assert_io(g, io), 1u);
  EXPECT_TRUE(g.contains(Triple(iri(io_iri(vocab::kDefaultBase, "X")), type(), iri(vocab::kInformationObject))));
}

TEST(AssertIo, HotelWithPlaceGivesSixTriples) {
  Graph g;
  const auto io = hotel_with_place();
  // IO type, hasGranule, granule type, then one triple per field.
  std::size_t fields = 0;
  for (const auto& [kind, list] : io.granules) {
    for (const auto& gr : list) fields += gr.fields.size();
  }
  EXPECT_EQ(assert_io(g, io), 1 + 2 * io.granule_count() + fields);
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(assert_io(g, io), 0u);
  EXPECT_EQ(g.size(), 6u);
}

TEST(AssertIo, RejectsBadIos) {
  Graph g;
  InformationObject io = hotel_with_place();
  io.id.clear();
  EXPECT_THROW(assert_io(g, io), AssertionError);
  io = hotel_with_place();
  io.granules.begin()->second.front().fields["Geolocation/Latitude"] = *Decimal::parse("91");
  EXPECT_THROW(assert_io(g, io), AssertionError);
  EXPECT_TRUE(g.empty());
}

TEST(AssertIo, DistinctIosNeverShareNodes) {
  const auto ios = generate_la_rochelle();
  std::map<Term, std::string> owner;
  for (const auto& io : ios) {
    Graph g;
    assert_io(g, io);
    for (const auto& t : g.triples()) {
      if (t.subject().is_blank() || t.predicate().value() == vocab::kRdfType) {
        const auto [it, fresh] = owner.emplace(t.subject(), io.id);
        ASSERT_TRUE(fresh || it->second == io.id) << "shared subject between " << it->second << " and " << io.id;
      }
    }
  }
}

TEST(AssertIo, LabelsAndIrisAreInjective) {
  const std::vector<std::string> ids = {"a_b", "a-5Fb", "a b", "a-20b", "A", "a", "é", "%C3%A9"};
  std::set<std::string> iris;
  std::set<std::string> labels;
  for (const auto& id : ids) {
    iris.insert(io_iri("http://e", id));
    labels.insert(granule_label(id, GranuleKind::Prices, 0));
    EXPECT_TRUE(is_valid_blank_label(granule_label(id, GranuleKind::Prices, 3)));
    EXPECT_TRUE(is_valid_iri(io_iri("http://e", id)));
  }
  EXPECT_EQ(iris.size(), ids.size());
  EXPECT_EQ(labels.size(), ids.size());
  EXPECT_NE(granule_label("a", GranuleKind::Prices, 1), granule_label("a", GranuleKind::Prices, 11));
}

TEST(AssertIo, HotelMatchReturnsExactlyTheHotels) {
  const auto ios = generate_la_rochelle();
  Graph g;
  std::set<Term> hotels;
  for (const auto& io : ios) {
    assert_io(g, io);
    if (std::find(io.categories.begin(), io.categories.end(), vocab::schema("Hotel")) != io.categories.end()) {
      hotels.insert(iri(io_iri(vocab::kDefaultBase, io.id)));
    }
  }
  std::set<Term> found;
  for (const auto& t : g.match(std::nullopt, type(), iri(vocab::schema("Hotel")))) found.insert(t.subject());
  EXPECT_EQ(found, hotels);
  EXPECT_EQ(g.match(std::nullopt, type(), iri(vocab::schema("Hotel"))),
            scan_match(g, std::nullopt, type(), iri(vocab::schema("Hotel"))));
  EXPECT_GE(hotels.size(), 5u);
}

TEST(Graph, NodesAreSubjectsAndObjects) {
  Graph g;
  g.insert(Triple(iri("http://e/a"), iri("http://e/p"), Term::literal("x")));
  const auto nodes = g.nodes();
  EXPECT_EQ(nodes.size(), 2u);
}
