#include <gtest/gtest.h>

#include "rdf_oracles.hpp"
#include "tifsem/errors.hpp"
#include "tifsem/fixtures.hpp"
#include "tifsem/mapping.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"

using namespace tifsem;
using namespace tifsem::testing;

namespace {

Graph fixture_graph(bool materialized) {
  Graph g;
  for (const auto& io : generate_la_rochelle()) assert_io(g, io);
  if (materialized) materialize(g, builtin_rules());
  return g;
}

Graph from_triples(const std::vector<Triple>& ts) {
  Graph g;
  for (const auto& t : ts) g.insert(t);
  return g;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(NTriples, EmptyGraphIsEmptyText) {
  EXPECT_EQ(to_ntriples(Graph{}), "");
  EXPECT_TRUE(from_ntriples("").empty());
}

TEST(NTriples, OneTripleIsOneLine) {
  Graph g;
  g.insert(Triple(Term::iri("http://e/s"), Term::iri("http://e/p"), Term::literal("v")));
  const std::string text = to_ntriples(g);
  EXPECT_EQ(text, "<http://e/s> <http://e/p> \"v\" .\n");
  EXPECT_EQ(count_lines(text), 1u);
}

TEST(NTriples, TermForms) {
  EXPECT_EQ(term_to_ntriples(Term::blank("b1")), "_:b1");
  EXPECT_EQ(term_to_ntriples(Term::lang_literal("été", "fr")), "\"été\"@fr");
  EXPECT_EQ(term_to_ntriples(Term::literal("1", vocab::kXsdInteger)),
            "\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(term_to_ntriples(Term::literal("a\"b\\c\nd\te\r")), "\"a\\\"b\\\\c\\nd\\te\\r\"");
  EXPECT_EQ(term_to_ntriples(Term::literal("été"), {.ascii = true}), "\"\\u00E9t\\u00E9\"");
  EXPECT_EQ(term_to_ntriples(Term::literal("\xF0\x9F\x98\x80"), {.ascii = true}), "\"\\U0001F600\"");
}

TEST(NTriples, ParsesEscapesAndComments) {
  const Graph g = from_ntriples(
      "# comment\n"
      "\n"
      "<http://e/s> <http://e/p> \"caf\\u00E9 \\\"x\\\"\" .\n"
      "_:b <http://e/p> \"1\"^^<http://www.w3.org/2001/XMLSchema#integer> . # trailing\n"
      "<http://e/s> <http://e/q> \"hi\"@EN .\r\n");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_TRUE(g.contains(Triple(Term::iri("http://e/s"), Term::iri("http://e/p"), Term::literal("café \"x\""))));
  EXPECT_TRUE(g.contains(Triple(Term::iri("http://e/s"), Term::iri("http://e/q"), Term::lang_literal("hi", "en"))));
}

TEST(NTriples, DuplicateLinesCollapse) {
  const std::string line = "<http://e/s> <http://e/p> <http://e/o> .\n";
  EXPECT_EQ(from_ntriples(line + line + line).size(), 1u);
}

TEST(NTriples, MissingDotReportsTheLine) {
  try {
    from_ntriples("<http://e/s> <http://e/p> <http://e/o> .\n<http://e/s> <http://e/p> <http://e/x>\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(NTriples, RejectsMalformedInput) {
  for (const char* bad : {"<http://e/s> <http://e/p> .\n", "\"lit\" <http://e/p> <http://e/o> .\n",
                          "<http://e/s> _:p <http://e/o> .\n", "<http://e/s> <http://e/p> \"open .\n",
                          "<http://e/s> <http://e/p> \"x\"^^ .\n", "<http://e/s> <http://e/p> \"\\q\" .\n",
                          "<http://e/s> <http://e/p> <http://e/o> . extra\n", "<http://e/s <http://e/p> <o> .\n"}) {
    EXPECT_THROW(from_ntriples(bad), ParseError) << bad;
  }
}

TEST(NTriples, RoundTripOnRandomGraphs) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const Graph g = random_graph(rng, {.triples = 1 + rng.below(200)});
    const std::string text = to_ntriples(g);
    const Graph back = from_ntriples(text);
    ASSERT_EQ(back, g) << text;
    ASSERT_EQ(to_ntriples(back), text);
    ASSERT_EQ(from_ntriples(to_ntriples(g, {.ascii = true})), g);
  }
}

TEST(NTriples, EqualGraphsGiveIdenticalBytes) {
  Rng rng(22);
  const Graph g = random_graph(rng);
  auto ts = g.triples();
  std::reverse(ts.begin(), ts.end());
  EXPECT_EQ(to_ntriples(from_triples(ts)), to_ntriples(g));
}

TEST(NTriples, OutputIsSortedBySerializedForm) {
  Rng rng(23);
  const std::string text = to_ntriples(random_graph(rng));
  std::vector<std::string> lines;
  std::string line;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(line);
      line.clear();
    } else {
      line += c;
    }
  }
  EXPECT_TRUE(std::is_sorted(lines.begin(), lines.end()));
}

TEST(Turtle, EmptyGraphHasOnlyPrefixes) {
  const std::string ttl = to_turtle(Graph{});
  std::size_t pos = 0;
  std::size_t lines = 0;
  while ((pos = ttl.find('\n', pos)) != std::string::npos) {
    ++pos;
    ++lines;
  }
  EXPECT_EQ(lines, default_prefixes().size());
  EXPECT_TRUE(read_turtle(ttl).empty());
}

TEST(Turtle, FixtureGraphReadsBack) {
  const Graph g = fixture_graph(true);
  EXPECT_EQ(from_triples(read_turtle(to_turtle(g))), g);
}

TEST(Turtle, RandomGraphsReadBack) {
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    const Graph g = random_graph(rng);
    ASSERT_EQ(from_triples(read_turtle(to_turtle(g))), g);
  }
}

TEST(Turtle, PrefixedGraphHasNoAbsoluteIrisInBody) {
  Graph g;
  g.insert(Triple(Term::iri(vocab::tifsem("a")), Term::iri(vocab::kRdfType), Term::iri(vocab::schema("Hotel"))));
  g.insert(Triple(Term::iri(vocab::tifsem("a")), Term::iri(vocab::schema("name")), Term::iri(vocab::tifsem("b"))));
  const std::string ttl = to_turtle(g);
  const std::string body = ttl.substr(ttl.rfind("@prefix"));
  EXPECT_EQ(body.substr(body.find('\n')).find('<'), std::string::npos) << ttl;
}

TEST(JsonLd, RootWithOnlyTypeHasIdAndType) {
  Graph g;
  const Term root = Term::iri(io_iri(vocab::kDefaultBase, "X"));
  g.insert(Triple(root, Term::iri(vocab::kRdfType), Term::iri(vocab::kInformationObject)));
  const auto doc = to_jsonld(g, root);
  EXPECT_EQ(doc.body.size(), 2u);
  EXPECT_EQ(doc.body["@id"], root.value());
  EXPECT_EQ(doc.body["@type"], "tifsem:InformationObject");
  EXPECT_TRUE(doc.context.contains("schema"));
  EXPECT_EQ(doc.context.at("schema"), vocab::kSchemaNs);
}

TEST(JsonLd, UnknownRootThrows) {
  EXPECT_THROW(to_jsonld(Graph{}, Term::iri("http://e/none")), Error);
}

TEST(JsonLd, MaterializedHotelCarriesMappedTypes) {
  const Graph g = fixture_graph(true);
  const Term root = Term::iri(io_iri(vocab::kDefaultBase, "HOT-001"));
  const auto doc = to_jsonld(g, root);
  const auto types = doc.body["@type"];
  ASSERT_TRUE(types.is_array());
  EXPECT_NE(std::find(types.begin(), types.end(), "tifsem:InformationObject"), types.end());
  EXPECT_NE(std::find(types.begin(), types.end(), "schema:Hotel"), types.end());
  const std::string text = doc.dump();
  for (const char* mapped : {"schema:MediaObject", "schema:Offer", "schema:PriceSpecification", "schema:Place",
                             "schema:ContactPoint", "schema:Rating", "tifsem:Multimedia"}) {
    EXPECT_NE(text.find(mapped), std::string::npos) << mapped;
  }
}

TEST(JsonLd, ExpansionEqualsBlankClosureOnFixtureIos) {
  const Graph g = fixture_graph(true);
  for (const auto& io : generate_la_rochelle()) {
    const Term root = Term::iri(io_iri(vocab::kDefaultBase, io.id));
    const auto expanded = expand_jsonld(to_jsonld(g, root).to_json());
    ASSERT_TRUE(equal_up_to_blanks(expanded, blank_closure(g, root))) << io.id;
  }
}

TEST(JsonLd, ExpansionEqualsBlankClosureOnRandomGraphs) {
  Rng rng(25);
  for (int i = 0; i < 60; ++i) {
    const Graph g = random_graph(rng, {.triples = 120, .iris = 12, .blanks = 8, .predicates = 4});
    for (int k = 0; k < 5; ++k) {
      const Term root = rng.pick(g.triples()).subject();
      const auto doc = to_jsonld(g, root);
      // Through text, as a page would carry it.
      const auto reparsed = nlohmann::json::parse(doc.dump());
      ASSERT_TRUE(equal_up_to_blanks(expand_jsonld(reparsed), blank_closure(g, root))) << doc.dump();
    }
  }
}

TEST(BlankIsomorphism, DistinguishesStructure) {
  const Term p = Term::iri("http://e/p");
  const Term q = Term::iri("http://e/q");
  const std::vector<Triple> a = {Triple(Term::blank("x"), p, Term::blank("y")), Triple(Term::blank("y"), q, Term::literal("1"))};
  const std::vector<Triple> b = {Triple(Term::blank("m"), p, Term::blank("n")), Triple(Term::blank("n"), q, Term::literal("1"))};
  const std::vector<Triple> c = {Triple(Term::blank("m"), p, Term::blank("n")), Triple(Term::blank("m"), q, Term::literal("1"))};
  EXPECT_TRUE(equal_up_to_blanks(a, b));
  EXPECT_FALSE(equal_up_to_blanks(a, c));
}

TEST(Ontology, ExportsClassesAndSubclassLinks) {
  const Graph g = ontology_to_graph(load_core_ontology());
  const auto& classes = load_core_ontology().classes();
  const auto declared = g.match(std::nullopt, Term::iri(vocab::kRdfType), Term::iri(vocab::owl("Class")));
  EXPECT_EQ(declared.size(), classes.size());
  EXPECT_TRUE(g.contains(Triple(Term::iri(vocab::schema("Hotel")), Term::iri(vocab::rdfs("subClassOf")),
                                Term::iri(vocab::schema("LodgingBusiness")))));
  EXPECT_EQ(from_triples(read_turtle(to_turtle(g))), g);
}
