#pragma once

// TriG-star and N-Quads-star output.
//
// Canonical mode relabels blank nodes canonically, orders graphs, subjects,
// predicates and objects by the total term order, and never uses annotation
// syntax. Compact mode keeps store order, groups with ';' and ',' and nests
// annotations as {| ... |} whenever the annotated triple is asserted in the
// same graph.

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metastar/canonical.hpp"
#include "metastar/dataset.hpp"
#include "metastar/format.hpp"
#include "metastar/prefix_map.hpp"
#include "metastar/vocab.hpp"

namespace metastar {

inline std::string serialize_nquads(const Dataset& ds, bool canonical) {
  std::string out;
  if (canonical) {
    for (const auto& line : canonical_lines(ds)) out += line;
    return out;
  }
  for (const auto& q : ds.quads()) append_quad_line(out, q);
  return out;
}

namespace detail {

class TrigWriter {
 public:
  TrigWriter(const PrefixMap& prefixes, bool canonical)
      : prefixes_(prefixes), canonical_(canonical) {}

  std::string write(const Dataset& input) {
    const Dataset ds = canonical_ ? canonicalize(input) : input;
    std::string out;
    for (const auto& [label, ns] : prefixes_.entries()) {
      out += "@prefix " + label + ": ";
      append_iri(out, Iri(ns));
      out += " .\n";
    }

    std::map<GraphName, std::vector<Quad>> graphs;
    for (auto& q : ds.quads()) graphs[q.graph].push_back(std::move(q));

    bool first_block = prefixes_.empty();
    for (auto& [graph, quads] : graphs) {
      if (!first_block) out += '\n';
      first_block = false;
      if (graph.is_default()) {
        write_graph(out, quads, "");
      } else {
        write_term(out, *graph.to_term(), false);
        out += " {\n";
        write_graph(out, quads, "    ");
        out += "}\n";
      }
    }
    return out;
  }

 private:
  void write_iri(std::string& out, const Iri& iri, bool predicate) const {
    if (predicate && iri.str() == vocab::rdf::type) {
      out += 'a';
      return;
    }
    if (auto pname = prefixes_.compact(iri)) {
      out += pname->first;
      out += ':';
      out += pname->second;
      return;
    }
    append_iri(out, iri);
  }

  void write_term(std::string& out, const Term& term, bool predicate) const {
    switch (term.kind()) {
      case Term::Kind::Iri: write_iri(out, term.as_iri(), predicate); break;
      case Term::Kind::BlankNode:
        out += "_:";
        out += term.as_blank().label();
        break;
      case Term::Kind::Literal: {
        const auto& lit = term.as_literal();
        out += '"';
        append_escaped_string(out, lit.lexical());
        out += '"';
        if (lit.has_language()) {
          out += '@';
          out += lit.language();
        } else if (lit.datatype().str() != vocab::xsd::string) {
          out += "^^";
          write_iri(out, lit.datatype(), false);
        }
        break;
      }
      case Term::Kind::QuotedTriple: {
        const auto& q = term.as_quoted();
        out += "<< ";
        write_term(out, q.subject(), false);
        out += ' ';
        write_iri(out, q.predicate(), true);
        out += ' ';
        write_term(out, q.object(), false);
        out += " >>";
        break;
      }
    }
  }

  using PredicateGroups = std::vector<std::pair<Iri, std::vector<Term>>>;

  // Groups consecutive quads by subject, then by predicate in order of first
  // appearance within the subject.
  static std::vector<std::pair<Term, PredicateGroups>> group(const std::vector<Quad>& quads) {
    std::vector<std::pair<Term, PredicateGroups>> out;
    std::unordered_map<Term, std::size_t> subject_index;
    for (const auto& q : quads) {
      auto [it, inserted] = subject_index.emplace(q.subject(), out.size());
      if (inserted) out.emplace_back(q.subject(), PredicateGroups{});
      auto& groups = out[it->second].second;
      auto g = std::find_if(groups.begin(), groups.end(),
                            [&](const auto& e) { return e.first == q.predicate(); });
      if (g == groups.end()) {
        groups.emplace_back(q.predicate(), std::vector<Term>{q.object()});
      } else {
        g->second.push_back(q.object());
      }
    }
    return out;
  }

  void write_graph(std::string& out, std::vector<Quad> quads, const std::string& indent) {
    annotations_.clear();
    if (canonical_) {
      std::sort(quads.begin(), quads.end(), [](const Quad& a, const Quad& b) {
        return a.triple < b.triple;
      });
    } else {
      std::unordered_set<Triple> asserted;
      for (const auto& q : quads) asserted.insert(q.triple);
      std::vector<Quad> roots;
      for (const auto& q : quads) {
        const auto* quoted = q.subject().if_quoted();
        if (quoted && asserted.count(quoted->triple())) {
          annotations_[quoted->triple()].push_back(q);
        } else {
          roots.push_back(q);
        }
      }
      quads = std::move(roots);
    }

    for (const auto& [subject, groups] : group(quads)) {
      out += indent;
      write_term(out, subject, false);
      out += ' ';
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (gi > 0) out += " ;\n" + indent + "    ";
        write_predicate_objects(out, subject, groups[gi]);
      }
      out += " .\n";
    }
  }

  void write_predicate_objects(std::string& out, const Term& subject,
                               const std::pair<Iri, std::vector<Term>>& group) {
    write_iri(out, group.first, true);
    out += ' ';
    for (std::size_t oi = 0; oi < group.second.size(); ++oi) {
      if (oi > 0) out += " , ";
      const Term& object = group.second[oi];
      write_term(out, object, false);
      if (!canonical_) write_annotation(out, Triple(subject, group.first, object));
    }
  }

  void write_annotation(std::string& out, const Triple& triple) {
    auto it = annotations_.find(triple);
    if (it == annotations_.end()) return;
    out += " {| ";
    const Term quoted = quote(triple);
    auto groups = group(it->second);
    const auto& predicate_groups = groups.front().second;
    for (std::size_t gi = 0; gi < predicate_groups.size(); ++gi) {
      if (gi > 0) out += " ; ";
      write_predicate_objects(out, quoted, predicate_groups[gi]);
    }
    out += " |}";
  }

  const PrefixMap& prefixes_;
  bool canonical_;
  std::unordered_map<Triple, std::vector<Quad>> annotations_;
};

}  // namespace detail

inline std::string serialize_trig(const Dataset& ds, const PrefixMap& prefixes, bool canonical) {
  return detail::TrigWriter(prefixes, canonical).write(ds);
}

}  // namespace metastar
