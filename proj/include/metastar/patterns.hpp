#pragma once

// Meta-level modeling transformations: detection, provenance wrapping into a
// named graph, statement annotation, subject replacement with lineage, and
// the lower/lift pair between n-ary records and quoted-triple annotations.
//
// All operations are pure (Dataset in, Dataset out). Unless a graph scope is
// given they read and write the default graph only.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metastar/dataset.hpp"
#include "metastar/format.hpp"
#include "metastar/term.hpp"
#include "metastar/vocab.hpp"

namespace metastar {

class GraphNameCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MintCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Detection

struct MetaReport {
  std::size_t subject_quoted_count = 0;
  std::size_t object_quoted_count = 0;
  std::size_t named_graph_count = 0;
  std::vector<GraphName> graphs_with_meta;
  bool has_meta_level = false;
};

// Quads with a quoted subject and with a quoted object are counted
// separately (a quad with both counts in both). graphs_with_meta lists the
// named graphs that are the subject of some default-graph quad.
inline MetaReport detect_meta(const Dataset& ds) {
  MetaReport r;
  for (const auto& q : ds.quads()) {
    if (q.subject().is_quoted()) ++r.subject_quoted_count;
    if (q.object().is_quoted()) ++r.object_quoted_count;
  }
  const auto graphs = ds.graph_names();
  r.named_graph_count = graphs.size();
  for (const auto& g : graphs) {
    auto id = ds.lookup(*g.to_term());
    bool described = false;
    ds.scan({id, std::nullopt, std::nullopt, Dataset::kDefaultGraph},
            [&](const Dataset::Key&) { described = true; });
    if (described) r.graphs_with_meta.push_back(g);
  }
  r.has_meta_level =
      r.subject_quoted_count + r.object_quoted_count > 0 || r.named_graph_count > 0;
  return r;
}

// ---------------------------------------------------------------------------
// Provenance via named graphs

struct ProvenanceResult {
  Dataset dataset;
  std::size_t moved = 0;     // quads moved from the default graph into the named graph
  std::size_t absorbed = 0;  // subject-level copies of the provenance statements, dropped
  bool vacuous = false;      // no quad matched the subjects
};

// Moves the default-graph quads about `subjects` into `graph` and states
// `prov` about the graph itself. A subject quad whose (predicate, object)
// equals a provenance pair is superseded by the graph-level statement and
// dropped. Quads whose predicate is in `excluded` stay where they are.
inline ProvenanceResult wrap_provenance(const Dataset& ds, const std::set<Term>& subjects,
                                        const GraphName& graph,
                                        const std::vector<std::pair<Iri, Term>>& prov,
                                        const std::set<Iri>& excluded = {}) {
  if (graph.is_default()) throw std::invalid_argument("provenance graph must be named");
  if (subjects.empty()) throw std::invalid_argument("no subjects given");
  if (ds.graph_size(graph) != 0)
    throw GraphNameCollision("graph " + to_string(graph) + " is already populated");

  ProvenanceResult r;
  r.dataset = ds;
  std::set<std::pair<Iri, Term>> prov_pairs(prov.begin(), prov.end());
  for (const auto& q : ds.graph_quads(GraphName{})) {
    if (!subjects.count(q.subject()) || excluded.count(q.predicate())) continue;
    r.dataset.erase(q);
    if (prov_pairs.count({q.predicate(), q.object()})) {
      ++r.absorbed;
    } else {
      r.dataset.insert(Quad(q.triple, graph));
      ++r.moved;
    }
  }
  const Term label = *graph.to_term();
  for (const auto& [p, o] : prov) r.dataset.insert(Quad(label, p, o));
  r.vacuous = r.moved == 0 && r.absorbed == 0;
  return r;
}

// ---------------------------------------------------------------------------
// Statement annotation

// Adds (<<target>>, p, o) for each annotation, and the target itself when
// `assert_target` is set. Existing quads are never touched.
inline Dataset annotate(const Dataset& ds, const Triple& target,
                        const std::vector<std::pair<Iri, Term>>& annotations, bool assert_target,
                        const GraphName& graph = {}) {
  Dataset out = ds;
  if (assert_target) out.insert(Quad(target, graph));
  const Term quoted = quote(target);
  for (const auto& [p, o] : annotations) out.insert(Quad(quoted, p, o, graph));
  return out;
}

// ---------------------------------------------------------------------------
// Subject replacement

struct ReplacementReport {
  std::vector<std::pair<Quad, Quad>> applied;             // (removed, added)
  std::vector<Triple> conflicts;                          // quoted triples with >1 target
  std::vector<std::pair<Triple, Triple>> lineage;         // (replacing, replaced)
  std::vector<Triple> vacuous;                            // directives about unasserted triples
  std::vector<Quad> invalid;                              // directives whose target cannot be a subject
  bool aborted() const noexcept { return !conflicts.empty(); }
};

// Executes every (<<s p o>>, ex:replaceSubjectBy, t) directive: the asserted
// (s, p, o) becomes (t, p, o), the directive is dropped and
// (<<t p o>>, ex:replaced, <<s p o>>) records the change. All directives are
// evaluated against the input at once. If one quoted triple has several
// distinct targets nothing is changed and the conflicts are reported.
inline std::pair<Dataset, ReplacementReport> apply_subject_replacements(
    const Dataset& ds, const GraphName& graph = {}) {
  const Iri directive_pred(vocab::ex::replace_subject_by);
  const Iri replaced_pred(vocab::ex::replaced);

  std::map<Triple, std::vector<Quad>> directives;
  ReplacementReport report;
  for (const auto& q : ds.graph_quads(graph)) {
    if (q.predicate() != directive_pred || !q.subject().is_quoted()) continue;
    if (q.object().is_literal()) {
      report.invalid.push_back(q);
      continue;
    }
    directives[q.subject().as_quoted().triple()].push_back(q);
  }

  for (const auto& [target, qs] : directives) {
    std::set<Term> distinct;
    for (const auto& q : qs) distinct.insert(q.object());
    if (distinct.size() > 1) report.conflicts.push_back(target);
  }
  if (report.aborted()) return {ds, std::move(report)};

  Dataset out = ds;
  std::vector<Quad> additions;
  for (const auto& [old_triple, qs] : directives) {
    for (const auto& q : qs) out.erase(q);
    const Quad old_quad(old_triple, graph);
    if (!ds.contains(old_quad)) {
      report.vacuous.push_back(old_triple);
      continue;
    }
    Triple new_triple(qs.front().object(), old_triple.predicate(), old_triple.object());
    out.erase(old_quad);
    Quad new_quad(new_triple, graph);
    additions.push_back(new_quad);
    additions.emplace_back(quote(new_triple), replaced_pred, quote(old_triple), graph);
    report.applied.emplace_back(old_quad, new_quad);
    report.lineage.emplace_back(new_triple, old_triple);
  }
  for (const auto& q : additions) out.insert(q);
  return {std::move(out), std::move(report)};
}

struct LineageReport {
  std::vector<std::vector<Triple>> chains;  // newest first
  std::vector<std::vector<Triple>> cycles;
};

// Maximal paths along (<<new>>, ex:replaced, <<old>>) quads, newest to
// oldest. Cycles are reported and not followed.
inline LineageReport replacement_lineage(const Dataset& ds, const GraphName& graph = {}) {
  const Iri replaced_pred(vocab::ex::replaced);
  std::map<Triple, std::vector<Triple>> older;
  std::set<Triple> has_newer;
  std::set<Triple> nodes;
  for (const auto& q : ds.graph_quads(graph)) {
    if (q.predicate() != replaced_pred) continue;
    const auto* from = q.subject().if_quoted();
    const auto* to = q.object().if_quoted();
    if (!from || !to) continue;
    older[from->triple()].push_back(to->triple());
    has_newer.insert(to->triple());
    nodes.insert(from->triple());
    nodes.insert(to->triple());
  }
  for (auto& [k, v] : older) std::sort(v.begin(), v.end());

  LineageReport report;
  std::set<std::vector<Triple>> seen_cycles;
  std::set<Triple> visited;

  auto record_cycle = [&](std::vector<Triple> cycle) {
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    if (seen_cycles.insert(cycle).second) report.cycles.push_back(std::move(cycle));
  };

  std::vector<Triple> path;
  std::set<Triple> on_path;
  auto walk = [&](auto&& self, const Triple& node) -> void {
    visited.insert(node);
    path.push_back(node);
    on_path.insert(node);
    bool extended = false;
    auto it = older.find(node);
    if (it != older.end()) {
      for (const auto& next : it->second) {
        if (on_path.count(next)) {
          auto start = std::find(path.begin(), path.end(), next);
          record_cycle(std::vector<Triple>(start, path.end()));
          continue;
        }
        extended = true;
        self(self, next);
      }
    }
    if (!extended && path.size() > 1) report.chains.push_back(path);
    on_path.erase(node);
    path.pop_back();
  };

  for (const auto& node : nodes) {
    if (!has_newer.count(node)) walk(walk, node);
  }
  // Nodes never reached from a chain head only lie on (or below) cycles.
  for (const auto& node : nodes) {
    if (visited.count(node)) continue;
    auto chains_before = report.chains.size();
    walk(walk, node);
    report.chains.resize(chains_before);
  }
  return report;
}

// ---------------------------------------------------------------------------
// N-ary records <-> quoted-triple annotations

struct NaryShape {
  Iri record_class;
  Iri link_pred;   // host -> record
  Iri topic_pred;  // record -> target
  Iri star_pred;   // host -> target
  std::string mint_suffix = "/record";

  void validate() const {
    const Iri* all[4] = {&record_class, &link_pred, &topic_pred, &star_pred};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (*all[i] == *all[j])
          throw std::invalid_argument("shape IRIs must be pairwise distinct: " + all[i]->str());
      }
    }
  }
};

// Every quoted triple <<h star t>> (t an IRI) that is the subject of some
// quad becomes a record <t ++ suffix> linked from h, carrying the
// annotations; the annotation quads and the asserted (h, star, t) go away.
inline Dataset lower_star_to_nary(const Dataset& ds, const NaryShape& shape,
                                  const GraphName& graph = {}) {
  shape.validate();
  std::map<Triple, std::vector<Quad>> annotated;
  for (const auto& q : ds.graph_quads(graph)) {
    const auto* k = q.subject().if_quoted();
    if (!k || k->predicate() != shape.star_pred || !k->object().is_iri()) continue;
    annotated[k->triple()].push_back(q);
  }

  std::map<Iri, Triple> minted;
  for (const auto& [k, qs] : annotated) {
    Iri record(k.object().as_iri().str() + shape.mint_suffix);
    auto [it, inserted] = minted.emplace(record, k);
    if (!inserted)
      throw MintCollision("record IRI " + to_string(Term(record)) + " minted by both " +
                          to_string(it->second) + " and " + to_string(k));
    if (ds.occurs(Term(record)))
      throw MintCollision("record IRI " + to_string(Term(record)) + " already occurs");
  }

  Dataset out = ds;
  for (const auto& [record, k] : minted) {
    for (const auto& q : annotated.at(k)) {
      out.erase(q);
    }
    out.erase(Quad(k, graph));
  }
  for (const auto& [record, k] : minted) {
    out.insert(Quad(k.subject(), shape.link_pred, Term(record), graph));
    out.insert(Quad(Term(record), shape.topic_pred, k.object(), graph));
    for (const auto& q : annotated.at(k)) out.insert(Quad(Term(record), q.predicate(), q.object(), graph));
  }
  return out;
}

// Every (h, link, r) whose record r has exactly one (r, topic, t) becomes the
// asserted (h, star, t); the remaining quads about r move onto <<h star t>>.
inline Dataset lift_nary_to_star(const Dataset& ds, const NaryShape& shape,
                                 const GraphName& graph = {}) {
  shape.validate();
  const auto quads = ds.graph_quads(graph);
  std::map<Term, std::vector<Quad>> about;
  for (const auto& q : quads) about[q.subject()].push_back(q);

  Dataset out = ds;
  std::vector<Quad> additions;
  std::set<Term> records;
  for (const auto& link : quads) {
    if (link.predicate() != shape.link_pred) continue;
    const Term& r = link.object();
    std::vector<const Quad*> topics;
    if (auto it = about.find(r); it != about.end()) {
      for (const auto& q : it->second) {
        if (q.predicate() == shape.topic_pred) topics.push_back(&q);
      }
    }
    if (topics.size() != 1)
      throw MalformedRecord("record " + to_string(r) + " has " + std::to_string(topics.size()) +
                            " topic links, expected exactly one");
    Triple star(link.subject(), shape.star_pred, topics.front()->object());
    additions.emplace_back(star, graph);
    const Term k = quote(star);
    for (const auto& q : about.at(r)) {
      if (q.predicate() == shape.topic_pred) continue;
      additions.emplace_back(k, q.predicate(), q.object(), graph);
    }
    out.erase(link);
    records.insert(r);
  }
  for (const auto& r : records) {
    for (const auto& q : about.at(r)) out.erase(q);
  }
  for (const auto& q : additions) out.insert(q);
  return out;
}

}  // namespace metastar
