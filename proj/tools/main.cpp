// tifsem: ingest TIF XML, align it to Schema.org, query and export it.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tifsem/errors.hpp"
#include "tifsem/fixtures.hpp"
#include "tifsem/graph.hpp"
#include "tifsem/ingest.hpp"
#include "tifsem/mapping.hpp"
#include "tifsem/query.hpp"
#include "tifsem/serialize.hpp"
#include "tifsem/vocab.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Usage and file-system failures, reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw UsageError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << content;
  if (!out) throw UsageError("cannot write " + path);
}

std::string default_base() {
  if (const char* env = std::getenv("TIFSEM_BASE_IRI"); env != nullptr && *env != '\0') return env;
  return std::string(tifsem::vocab::kDefaultBase);
}

tifsem::DialectProfile profile_from(const std::string& path) {
  if (path.empty()) return tifsem::DialectProfile::identity();
  return tifsem::load_profile(read_file(path));
}

tifsem::Graph load_graph(const std::string& path) { return tifsem::from_ntriples(read_file(path)); }

std::string issues_path_for(const std::string& out) {
  if (out == "-") return "";
  fs::path p(out);
  p.replace_extension(".issues.tsv");
  return p.string();
}

std::optional<std::string> format_of_extension(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".nt") return "nt";
  if (ext == ".ttl") return "ttl";
  if (ext == ".jsonld") return "jsonld";
  return std::nullopt;
}

struct ParsedInputs {
  std::vector<tifsem::InformationObject> ios;
  std::vector<tifsem::ValidationIssue> issues;
};

// Files are parsed concurrently; results are merged in input order.
ParsedInputs parse_inputs(const std::vector<std::string>& inputs, const tifsem::DialectProfile& profile) {
  std::vector<tifsem::RawDocument> docs;
  for (const auto& path : inputs) docs.push_back({path, read_file(path), std::nullopt});
  std::vector<std::future<tifsem::ParseResult>> jobs;
  for (const auto& doc : docs) {
    jobs.push_back(std::async(std::launch::async, [&doc, &profile] { return tifsem::parse_tif(doc, profile); }));
  }
  ParsedInputs out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    tifsem::ParseResult r = jobs[i].get();
    out.issues.insert(out.issues.end(), r.issues.begin(), r.issues.end());
    for (auto& io : r.ios) {
      if (!ids.insert(io.id).second) {
        out.issues.push_back({tifsem::Severity::Error, io.id, std::string(tifsem::kIdentifierTag),
                              "identifier also used in an earlier input (" + inputs[i] + ")"});
      }
      out.ios.push_back(std::move(io));
    }
  }
  return out;
}

int cmd_ingest(const std::vector<std::string>& inputs, const std::string& profile_path, const std::string& base,
               const std::string& out, std::string issues_path) {
  if (inputs.empty()) throw UsageError("ingest needs at least one input file");
  const auto profile = profile_from(profile_path);
  ParsedInputs parsed = parse_inputs(inputs, profile);

  tifsem::Graph graph;
  std::set<std::string> failed;
  for (const auto& issue : parsed.issues) {
    if (issue.severity == tifsem::Severity::Error && issue.io_id) failed.insert(*issue.io_id);
  }
  for (const auto& io : parsed.ios) {
    if (failed.contains(io.id)) continue;
    tifsem::assert_io(graph, io, base);
  }
  write_file(out, tifsem::to_ntriples(graph));
  if (issues_path.empty()) issues_path = issues_path_for(out);
  if (!issues_path.empty()) write_file(issues_path, tifsem::format_issues(parsed.issues));
  const std::size_t errors = tifsem::error_count(parsed.issues);
  std::cerr << parsed.ios.size() << " resource(s), " << graph.size() << " triple(s), " << errors << " error(s), "
            << parsed.issues.size() - errors << " warning(s)\n";
  return errors == 0 ? kOk : kDomainError;
}

int cmd_validate(const std::vector<std::string>& inputs, const std::string& profile_path) {
  if (inputs.empty()) throw UsageError("validate needs at least one input file");
  const auto profile = profile_from(profile_path);
  const ParsedInputs parsed = parse_inputs(inputs, profile);
  std::cout << tifsem::format_issues(parsed.issues);
  return tifsem::error_count(parsed.issues) == 0 ? kOk : kDomainError;
}

int cmd_map(const std::string& input, const std::string& rules_path, const std::string& out) {
  tifsem::Graph graph = load_graph(input);
  std::vector<tifsem::MappingRule> rules = tifsem::builtin_rules();
  if (!rules_path.empty()) rules = tifsem::merge_rules(std::move(rules), tifsem::load_rules(read_file(rules_path)));
  std::size_t mismatches = 0;
  for (const auto& entry : tifsem::check_consistency(rules)) {
    if (entry.starts_with("mismatch: ")) {
      std::cerr << entry << "\n";
      ++mismatches;
    }
  }
  if (mismatches != 0) return kDomainError;

  const tifsem::MappingReport report = tifsem::materialize(graph, rules);
  write_file(out, tifsem::to_ntriples(graph));
  std::ostream& log = out == "-" ? std::cerr : std::cout;
  log << "inferred triples: " << report.inferred_triples << "\n";
  log << "unmapped sources:";
  for (const auto& s : report.unmapped_sources) log << " " << s;
  log << "\n";
  log << "lacking granules:";
  for (auto k : tifsem::lacking_granules(rules)) log << " " << tifsem::to_string(k);
  log << "\n";
  for (const auto& entry : report.inconsistencies) {
    if (!entry.starts_with("lacking: ")) log << entry << "\n";
  }
  return kOk;
}

int cmd_query(const std::string& graph_path, const std::string& query_path, const std::string& format,
              const std::string& out) {
  const tifsem::Graph graph = load_graph(graph_path);
  const tifsem::Query query = tifsem::parse_query(read_file(query_path));
  const tifsem::SolutionTable table = tifsem::evaluate(query, graph);
  write_file(out, format == "csv" ? tifsem::format_csv(table) : tifsem::format_table(table));
  return kOk;
}

int cmd_export(const std::string& input, bool ontology, std::string format, const std::string& out,
               const std::string& root, const std::string& base) {
  if (auto by_ext = out == "-" ? std::nullopt : format_of_extension(out)) {
    if (format.empty()) format = *by_ext;
    if (format != *by_ext) throw UsageError("--format " + format + " does not match output file " + out);
  }
  if (format.empty()) format = "nt";
  if (ontology == !input.empty()) throw UsageError("export needs either a graph file or --ontology");
  const tifsem::Graph graph =
      ontology ? tifsem::ontology_to_graph(tifsem::load_core_ontology()) : load_graph(input);
  if (format == "nt") {
    write_file(out, tifsem::to_ntriples(graph));
  } else if (format == "ttl") {
    write_file(out, tifsem::to_turtle(graph));
  } else {
    if (root.empty()) throw UsageError("jsonld export needs --root");
    const std::string iri = root.find(':') == std::string::npos ? tifsem::io_iri(base, root) : root;
    write_file(out, tifsem::to_jsonld(graph, tifsem::Term::iri(iri)).dump(2));
  }
  return kOk;
}

int cmd_fixtures(std::uint64_t seed, const std::string& out) {
  tifsem::FixtureOptions options;
  options.seed = seed;
  write_file(out, tifsem::write_tif_xml(tifsem::generate_la_rochelle(options)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TIF tourism data to Schema.org knowledge graph"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::vector<std::string> inputs;
  std::string profile;
  std::string rules;
  std::string base = default_base();
  std::string out = "-";
  std::string issues;
  std::string format;
  std::string graph_path;
  std::string query_path;
  std::string root;
  bool ontology = false;
  std::uint64_t seed = tifsem::FixtureOptions{}.seed;

  auto* ingest = app.add_subcommand("ingest", "Parse TIF XML files into an N-Triples graph");
  ingest->add_option("inputs", inputs, "TIF XML files");
  ingest->add_option("--profile", profile, "Dialect profile (JSON)");
  ingest->add_option("--base", base, "Base IRI for resources (default $TIFSEM_BASE_IRI)");
  ingest->add_option("--out", out, "Output .nt file")->required();
  ingest->add_option("--issues", issues, "Issue report (default: <out>.issues.tsv)");

  auto* validate = app.add_subcommand("validate", "Report validation issues of TIF XML files");
  validate->add_option("inputs", inputs, "TIF XML files");
  validate->add_option("--profile", profile, "Dialect profile (JSON)");

  auto* map = app.add_subcommand("map", "Materialize Schema.org types and properties");
  map->add_option("graph", graph_path, "Input .nt graph")->required();
  map->add_option("--rules", rules, "Extra mapping rules (JSON), appended to the built-in ones");
  map->add_option("--out", out, "Output .nt file")->required();

  auto* query = app.add_subcommand("query", "Evaluate a query against a graph");
  query->add_option("--graph", graph_path, "Input .nt graph")->required();
  query->add_option("--query", query_path, "Query file")->required();
  query->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  query->add_option("--out", out, "Output file (default stdout)");

  auto* exp = app.add_subcommand("export", "Write a graph as N-Triples, Turtle or JSON-LD");
  exp->add_option("graph", graph_path, "Input .nt graph");
  exp->add_flag("--ontology", ontology, "Export the core ontology instead of a graph");
  exp->add_option("--format", format, "nt, ttl or jsonld")->check(CLI::IsMember({"nt", "ttl", "jsonld"}));
  exp->add_option("--root", root, "Root node for JSON-LD: an IRI or a resource identifier");
  exp->add_option("--base", base, "Base IRI used to resolve --root identifiers");
  exp->add_option("--out", out, "Output file (default stdout)");

  auto* fixtures = app.add_subcommand("fixtures", "Synthetic datasets");
  fixtures->require_subcommand(1);
  auto* generate = fixtures->add_subcommand("generate", "Write the La Rochelle dataset as TIF XML");
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*ingest) return cmd_ingest(inputs, profile, base, out, issues);
    if (*validate) return cmd_validate(inputs, profile);
    if (*map) return cmd_map(graph_path, rules, out);
    if (*query) return cmd_query(graph_path, query_path, format, out);
    if (*exp) return cmd_export(graph_path, ontology, format, out, root, base);
    if (*generate) return cmd_fixtures(seed, out);
  } catch (const UsageError& e) {
    std::cerr << "tifsem: " << e.what() << "\n";
    return kUsageError;
  } catch (const tifsem::Error& e) {
    std::cerr << "tifsem: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "tifsem: " << e.what() << "\n";
    return kDomainError;
  }
  std::cerr << app.help();
  return kUsageError;
}
