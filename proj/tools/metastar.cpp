// metastar: command-line front end for the metastar library.
//
// Exit codes: 0 success, 1 domain failure (or a non-isomorphic diff, or a
// parse error reported by `validate`), 2 I/O, usage or parse failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metastar/metastar.hpp"
#include "metastar/report_json.hpp"

namespace {

using namespace metastar;

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kInput = 2;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An input-level problem (bad shape file, bad argument term) with a message.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileParseError {
  std::string file;
  ParseError error;
};

struct Loaded {
  Dataset dataset;
  PrefixMap prefixes;
};

std::string display_name(const std::string& path) { return path == "-" ? "<stdin>" : path; }

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    if (std::cin.bad()) throw IoFailure("cannot read standard input");
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("cannot read '" + path + "'");
  return text;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoFailure("cannot write standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoFailure("cannot write '" + path + "'");
}

ParseOptions parse_options() {
  ParseOptions opts;
  if (const char* env = std::getenv("METASTAR_MAX_DEPTH")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1)
      throw InputFailure(std::string("METASTAR_MAX_DEPTH must be a positive integer, got '") + env +
                         "'");
    opts.max_quote_depth = static_cast<std::size_t>(value);
  }
  return opts;
}

bool later(const ParseError& a, const ParseError& b) {
  return a.line() != b.line() ? a.line() > b.line() : a.column() > b.column();
}

// `from` is "trig", "nquads" or empty (infer: TriG first, then N-Quads; on
// double failure the error that got further wins).
Loaded load(const std::string& path, const std::string& from) {
  const std::string text = read_input(path);
  const ParseOptions opts = parse_options();
  try {
    if (from == "nquads") return {parse_nquads_star(text, opts), PrefixMap{}};
    if (from == "trig") {
      auto r = parse(text, opts);
      return {std::move(r.dataset), std::move(r.prefixes)};
    }
    try {
      auto r = parse(text, opts);
      return {std::move(r.dataset), std::move(r.prefixes)};
    } catch (const ParseError& trig_error) {
      try {
        return {parse_nquads_star(text, opts), PrefixMap{}};
      } catch (const ParseError& nq_error) {
        throw later(nq_error, trig_error) ? nq_error : trig_error;
      }
    }
  } catch (const ParseError& e) {
    throw FileParseError{display_name(path), e};
  }
}

struct OutputFlags {
  std::string to = "trig";
  bool canonical = false;
  std::string output = "-";
};

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--to", flags.to, "Output format")->check(CLI::IsMember({"trig", "nquads"}));
  cmd->add_flag("--canonical", flags.canonical, "Canonical blank labels and ordering");
  cmd->add_option("-o,--output", flags.output, "Output file ('-' for stdout)");
}

void emit(const Dataset& ds, const PrefixMap& prefixes, const OutputFlags& flags) {
  write_output(flags.output, flags.to == "nquads" ? serialize_nquads(ds, flags.canonical)
                                                  : serialize_trig(ds, prefixes, flags.canonical));
}

// Accepts anything the TriG term grammar does, plus a bare absolute IRI.
Term argument_term(const std::string& text, const PrefixMap& prefixes) {
  try {
    return parse_term(text, prefixes, parse_options());
  } catch (const ParseError& e) {
    if (detail::is_valid_iri(text)) return Iri(text);
    throw InputFailure("cannot read term '" + text + "': " + e.message());
  }
}

Iri argument_iri(const std::string& text, const PrefixMap& prefixes) {
  Term t = argument_term(text, prefixes);
  if (!t.is_iri()) throw InputFailure("expected an IRI, got '" + text + "'");
  return t.as_iri();
}

NaryShape load_shape(const std::string& path, const PrefixMap& prefixes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_input(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputFailure("shape file '" + path + "': " + e.what());
  }
  auto field = [&](const char* key) -> std::string {
    if (!j.is_object() || !j.contains(key) || !j[key].is_string())
      throw InputFailure(std::string("shape file '") + path + "' lacks string field '" + key + "'");
    return j[key].get<std::string>();
  };
  NaryShape shape{argument_iri(field("recordClass"), prefixes),
                  argument_iri(field("linkPred"), prefixes),
                  argument_iri(field("topicPred"), prefixes),
                  argument_iri(field("starPred"), prefixes)};
  if (j.contains("mintSuffix")) shape.mint_suffix = field("mintSuffix");
  try {
    shape.validate();
  } catch (const std::invalid_argument& e) {
    throw InputFailure(std::string("shape file '") + path + "': " + e.what());
  }
  return shape;
}

// "p=o", split at the first '=' outside <...>.
std::pair<Iri, Term> prov_pair(const std::string& text, const PrefixMap& prefixes) {
  bool in_iri = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') in_iri = true;
    if (text[i] == '>') in_iri = false;
    if (text[i] == '=' && !in_iri)
      return {argument_iri(text.substr(0, i), prefixes), argument_term(text.substr(i + 1), prefixes)};
  }
  throw InputFailure("--prov expects predicate=object, got '" + text + "'");
}

int cmd_validate(const std::string& input, const std::string& from) {
  Loaded in;
  try {
    in = load(input, from);
  } catch (const FileParseError& e) {
    std::cerr << e.file << ":" << e.error.line() << ":" << e.error.column() << ": "
              << e.error.message() << "\n";
    return kDomain;
  }
  std::cout << in.dataset.size() << " quads, " << in.dataset.graph_names().size()
            << " named graphs\n";
  return kOk;
}

int cmd_detect(const std::string& input, const std::string& from, bool json) {
  Loaded in = load(input, from);
  MetaReport r = detect_meta(in.dataset);
  if (json) {
    std::cout << to_json(r).dump() << "\n";
    return kOk;
  }
  std::cout << "quoted subjects: " << r.subject_quoted_count << "\n"
            << "quoted objects: " << r.object_quoted_count << "\n"
            << "named graphs: " << r.named_graph_count << "\n";
  for (const auto& g : r.graphs_with_meta) std::cout << "described graph: " << to_string(g) << "\n";
  std::cout << "meta-level: " << (r.has_meta_level ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_diff(const std::string& a_path, const std::string& b_path, const std::string& from) {
  Loaded a = load(a_path, from);
  Loaded b = load(b_path, from);
  const auto la = canonical_lines(a.dataset);
  const auto lb = canonical_lines(b.dataset);
  if (la == lb) return kOk;
  std::size_t i = 0;
  while (i < la.size() && i < lb.size() && la[i] == lb[i]) ++i;
  if (i < la.size() && (i >= lb.size() || la[i] < lb[i])) {
    std::cout << "< " << la[i];
  } else {
    std::cout << "> " << lb[i];
  }
  return kDomain;
}

int run(int argc, char** argv) {
  CLI::App app{"RDF-star and named graph toolkit"};
  app.require_subcommand(1);
  std::string from;
  app.add_option("--from", from, "Input format (default: inferred)")
      ->check(CLI::IsMember({"trig", "nquads"}));

  std::string input = "-";
  std::string second;
  OutputFlags out;

  auto* validate = app.add_subcommand("validate", "Parse and report quad counts");
  validate->add_option("input", input, "Input file ('-' for stdin)");

  auto* convert = app.add_subcommand("convert", "Re-serialize a dataset");
  convert->add_option("input", input, "Input file ('-' for stdin)");
  add_output_flags(convert, out);

  bool json = false;
  auto* detect = app.add_subcommand("detect", "Report meta-level usage");
  detect->add_option("input", input, "Input file ('-' for stdin)");
  detect->add_flag("--json", json, "Emit the report as JSON");

  std::string shape_path;
  auto* lift = app.add_subcommand("lift", "Fold n-ary records into quoted-triple annotations");
  lift->add_option("input", input, "Input file ('-' for stdin)");
  lift->add_option("--shape", shape_path, "Shape JSON file")->required();
  add_output_flags(lift, out);

  auto* lower = app.add_subcommand("lower", "Expand quoted-triple annotations into n-ary records");
  lower->add_option("input", input, "Input file ('-' for stdin)");
  lower->add_option("--shape", shape_path, "Shape JSON file")->required();
  add_output_flags(lower, out);

  std::string report_path;
  auto* fix = app.add_subcommand("fix", "Apply ex:replaceSubjectBy directives");
  fix->add_option("input", input, "Input file ('-' for stdin)");
  fix->add_option("--report", report_path, "Write the replacement report (JSON) here");
  add_output_flags(fix, out);

  std::string graph;
  std::vector<std::string> subjects, prov, excluded;
  auto* wrap = app.add_subcommand("prov-wrap", "Move statements into a graph and describe it");
  wrap->add_option("input", input, "Input file ('-' for stdin)");
  wrap->add_option("--graph", graph, "Graph name (IRI)")->required();
  wrap->add_option("--subject", subjects, "Subject whose statements move")->required();
  wrap->add_option("--prov", prov, "Provenance statement predicate=object");
  wrap->add_option("--exclude", excluded, "Predicate to leave in place");
  add_output_flags(wrap, out);

  auto* diff = app.add_subcommand("diff", "Compare two datasets up to blank node renaming");
  diff->add_option("a", input, "First file ('-' for stdin)")->required();
  diff->add_option("b", second, "Second file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    if (*validate) return cmd_validate(input, from);
    if (*detect) return cmd_detect(input, from, json);
    if (*diff) return cmd_diff(input, second, from);

    Loaded in = load(input, from);
    if (*convert) {
      emit(in.dataset, in.prefixes, out);
      return kOk;
    }
    if (*lift || *lower) {
      NaryShape shape = load_shape(shape_path, in.prefixes);
      Dataset result = *lift ? lift_nary_to_star(in.dataset, shape)
                             : lower_star_to_nary(in.dataset, shape);
      emit(result, in.prefixes, out);
      return kOk;
    }
    if (*fix) {
      auto [result, report] = apply_subject_replacements(in.dataset);
      if (!report_path.empty()) write_output(report_path, to_json(report).dump(2) + "\n");
      if (report.aborted()) {
        for (const auto& t : report.conflicts)
          std::cerr << "conflicting replacement targets for << " << to_string(t) << " >>\n";
        return kDomain;
      }
      for (const auto& t : report.vacuous)
        std::cerr << "note: << " << to_string(t) << " >> is not asserted; directive dropped\n";
      emit(result, in.prefixes, out);
      return kOk;
    }
    if (*wrap) {
      Term g = argument_term(graph, in.prefixes);
      if (!g.is_iri() && !g.is_blank()) throw InputFailure("--graph must be an IRI or blank node");
      std::set<Term> subject_set;
      for (const auto& s : subjects) subject_set.insert(argument_term(s, in.prefixes));
      std::vector<std::pair<Iri, Term>> pairs;
      for (const auto& p : prov) pairs.push_back(prov_pair(p, in.prefixes));
      std::set<Iri> excluded_set;
      for (const auto& e : excluded) excluded_set.insert(argument_iri(e, in.prefixes));
      auto r = wrap_provenance(in.dataset, subject_set, GraphName::from_term(g), pairs, excluded_set);
      if (r.vacuous) std::cerr << "note: no statements matched the given subjects\n";
      emit(r.dataset, in.prefixes, out);
      return kOk;
    }
  } catch (const FileParseError& e) {
    std::cerr << e.file << ":" << e.error.line() << ":" << e.error.column() << ": "
              << e.error.message() << "\n";
    return kInput;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InputFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const MintCollision& e) {
    std::cerr << "mint collision: " << e.what() << "\n";
    return kDomain;
  } catch (const MalformedRecord& e) {
    std::cerr << "malformed record: " << e.what() << "\n";
    return kDomain;
  } catch (const GraphNameCollision& e) {
    std::cerr << "graph name collision: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
