#pragma once

// Random datasets and brute-force oracles for property tests. The oracles
// deliberately avoid the library's own unification and canonicalization.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "metastar/metastar.hpp"

namespace mtest {

using namespace metastar;

struct GenConfig {
  std::size_t max_quads = 200;
  std::size_t max_depth = 4;
  std::size_t max_graphs = 3;
  std::size_t max_blanks = 8;
  std::size_t iri_pool = 0;  // extra synthetic IRIs beyond the fixed ones
};

inline const std::vector<std::string>& tricky_iris() {
  static const std::vector<std::string> v = {
      "http://example.org/a",
      "http://example.org/b",
      "http://example.org/c",
      "http://example.org/",
      "http://example.org/a.b",
      "http://example.org/path/to#frag",
      "http://example.org/q?x=1&y=2",
      "urn:isbn:0451450523",
      "http://example.org/%F0%9F%98%80",
      "http://example.org/\xC3\xBC\xC3\xA9",
      "http://example.org/odd{}|^`\\\"<>",
      "https://sws.geonames.org/2940132/",
  };
  return v;
}

inline const std::vector<std::string>& predicate_iris() {
  static const std::vector<std::string> v = {
      std::string(vocab::rdf::type),
      "http://example.org/p",
      "http://example.org/q",
      "http://purl.org/dc/terms/issued",
      "http://example.org/odd#pred",
  };
  return v;
}

inline const std::vector<std::string>& tricky_strings() {
  static const std::vector<std::string> v = {
      "",
      "plain",
      "with \"quotes\" and 'single'",
      "line1\nline2\r\n",
      "tab\there",
      "back\\slash",
      "\xE2\x82\xAC uro \xF0\x9F\x98\x80",
      "ctrl\x01\x1f\x7f",
      "\"\"\"triple\"\"\"",
      "ends with quote\"",
      "Karl-Marx-Stadt",
      "05.04.2022",
  };
  return v;
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(cfg) {
    for (const auto& s : tricky_iris()) iris_.emplace_back(s);
    for (std::size_t i = 0; i < cfg_.iri_pool; ++i)
      iris_.emplace_back("http://example.org/n/" + std::to_string(i));
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  Iri iri() { return iris_[uniform(0, iris_.size() - 1)]; }
  Iri predicate() { return Iri(predicate_iris()[uniform(0, predicate_iris().size() - 1)]); }
  BlankNode blank() { return BlankNode("g" + std::to_string(uniform(0, blanks_ - 1))); }

  Literal literal() {
    const auto& strs = tricky_strings();
    std::string lex = strs[uniform(0, strs.size() - 1)];
    switch (uniform(0, 4)) {
      case 0: return Literal(lex);
      case 1: return Literal::with_language(lex, chance(0.5) ? "de" : "en-GB");
      case 2: return Literal(std::to_string(uniform(0, 99)), Iri(vocab::xsd::integer));
      case 3: return Literal(lex, Iri(vocab::xsd::date));
      default: return Literal(lex, Iri("http://example.org/dt"));
    }
  }

  Term subject(std::size_t depth) {
    std::size_t pick = uniform(0, depth > 0 ? 2 : 1);
    if (pick == 0) return iri();
    if (pick == 1 && blanks_ > 0) return blank();
    if (pick == 1) return iri();
    return quoted(depth - 1);
  }

  Term object(std::size_t depth) {
    std::size_t pick = uniform(0, depth > 0 ? 3 : 2);
    if (pick == 0) return iri();
    if (pick == 1) return blanks_ > 0 ? Term(blank()) : Term(iri());
    if (pick == 2) return literal();
    return quoted(depth - 1);
  }

  Term quoted(std::size_t depth) { return quote(Triple(subject(depth), predicate(), object(depth))); }

  Dataset dataset() { return dataset(uniform(0, cfg_.max_quads)); }

  Dataset dataset(std::size_t n) {
    blanks_ = uniform(0, cfg_.max_blanks);
    std::vector<GraphName> graphs{GraphName{}};
    std::size_t named = uniform(0, cfg_.max_graphs);
    for (std::size_t i = 0; i < named; ++i) {
      if (blanks_ > 0 && chance(0.3)) {
        graphs.emplace_back(blank());
      } else {
        graphs.emplace_back(Iri("http://example.org/graph/" + std::to_string(i)));
      }
    }
    Dataset ds;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t depth = uniform(0, cfg_.max_depth);
      ds.insert(Quad(subject(depth), predicate(), object(depth), graphs[uniform(0, graphs.size() - 1)]));
    }
    return ds;
  }

 private:
  std::mt19937_64 rng_;
  GenConfig cfg_;
  std::vector<Iri> iris_;
  std::size_t blanks_ = 8;
};

// ---------------------------------------------------------------------------
// Isomorphism by exhaustive bijection search (pruned only by occurrence
// counts, which every bijection must preserve).

inline void collect_blanks(const Term& t, std::map<std::string, std::size_t>& count) {
  if (const auto* b = t.if_blank()) {
    ++count[b->label()];
  } else if (const auto* q = t.if_quoted()) {
    collect_blanks(q->subject(), count);
    collect_blanks(q->object(), count);
  }
}

inline std::map<std::string, std::size_t> blank_counts(const Dataset& ds) {
  std::map<std::string, std::size_t> count;
  for (const auto& q : ds.quads()) {
    collect_blanks(q.subject(), count);
    collect_blanks(q.object(), count);
    if (const auto* b = q.graph.if_blank()) ++count[b->label()];
  }
  return count;
}

inline bool brute_force_isomorphic(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size()) return false;
  auto ca = blank_counts(a);
  auto cb = blank_counts(b);
  if (ca.size() != cb.size()) return false;
  std::vector<std::pair<std::string, std::size_t>> la(ca.begin(), ca.end());
  std::vector<std::pair<std::string, std::size_t>> lb(cb.begin(), cb.end());
  const auto target = b.quads();
  const std::set<Quad> target_set(target.begin(), target.end());
  const auto source = a.quads();

  BlankRenaming mapping;
  std::vector<bool> used(lb.size(), false);
  auto check = [&]() {
    for (const auto& q : source)
      if (!target_set.count(relabel(q, mapping))) return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == la.size()) return check();
    for (std::size_t j = 0; j < lb.size(); ++j) {
      if (used[j] || lb[j].second != la[i].second) continue;
      used[j] = true;
      mapping[la[i].first] = lb[j].first;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    mapping.erase(la[i].first);
    return false;
  };
  return rec(rec, 0);
}

// ---------------------------------------------------------------------------
// Matching by exhaustive scan with an independent unifier.

using Solution = std::map<std::string, Term>;

inline bool oracle_unify(const TermPattern& p, const Term& t, Solution& s) {
  if (const auto* g = p.if_term()) return *g == t;
  if (const auto* v = p.if_variable()) {
    auto it = s.find(v->name);
    if (it == s.end()) {
      s.emplace(v->name, t);
      return true;
    }
    return it->second == t;
  }
  const auto* qp = p.if_quoted();
  if (!t.is_quoted()) return false;
  const auto& qt = t.as_quoted();
  return oracle_unify(qp->subject, qt.subject(), s) &&
         oracle_unify(qp->predicate, Term(qt.predicate()), s) &&
         oracle_unify(qp->object, qt.object(), s);
}

inline std::set<Solution> oracle_match(const Dataset& ds, const QuadPattern& pattern) {
  std::set<Solution> out;
  for (const auto& q : ds.quads()) {
    Solution s;
    if (!oracle_unify(pattern.subject, q.subject(), s)) continue;
    if (!oracle_unify(pattern.predicate, Term(q.predicate()), s)) continue;
    if (!oracle_unify(pattern.object, q.object(), s)) continue;
    if (const auto* g = std::get_if<GraphName>(&pattern.graph)) {
      if (!(*g == q.graph)) continue;
    } else if (const auto* v = std::get_if<Variable>(&pattern.graph)) {
      auto t = q.graph.to_term();
      if (!t) continue;
      auto it = s.find(v->name);
      if (it == s.end()) {
        s.emplace(v->name, *t);
      } else if (!(it->second == *t)) {
        continue;
      }
    }
    out.insert(s);
  }
  return out;
}

// A pattern derived from a quad of `ds` (so it usually matches), with
// positions replaced by variables, possibly inside quoted triples, and
// variable names drawn from a small pool so co-reference happens.
class PatternGenerator {
 public:
  explicit PatternGenerator(Generator& gen) : gen_(gen) {}

  TermPattern abstract(const Term& t, bool allow_quoted_pattern) {
    if (gen_.chance(0.35)) return var();
    if (const auto* q = t.if_quoted(); q && allow_quoted_pattern && gen_.chance(0.7)) {
      return TermPattern::quoted(abstract(q->subject(), true), abstract(Term(q->predicate()), false),
                                 abstract(q->object(), true));
    }
    return t;
  }

  QuadPattern from(const Dataset& ds) {
    auto quads = ds.quads();
    Quad seed = quads.empty() || gen_.chance(0.1)
                    ? Quad(gen_.subject(2), gen_.predicate(), gen_.object(2))
                    : quads[gen_.uniform(0, quads.size() - 1)];
    QuadPattern p{abstract(seed.subject(), true), abstract(Term(seed.predicate()), false),
                  abstract(seed.object(), true)};
    switch (gen_.uniform(0, 3)) {
      case 0: p.graph = seed.graph; break;
      case 1: p.graph = AnyGraph{}; break;
      case 2: p.graph = var(); break;
      default: p.graph = GraphName{}; break;
    }
    return p;
  }

 private:
  Variable var() { return Variable{std::string(1, static_cast<char>('a' + gen_.uniform(0, 3)))}; }
  Generator& gen_;
};

// ---------------------------------------------------------------------------
// Detection by direct enumeration.

inline MetaReport oracle_detect(const Dataset& ds) {
  MetaReport r;
  std::set<GraphName> names;
  std::set<Term> default_subjects;
  for (const auto& q : ds.quads()) {
    r.subject_quoted_count += q.subject().kind() == Term::Kind::QuotedTriple;
    r.object_quoted_count += q.object().kind() == Term::Kind::QuotedTriple;
    if (!q.graph.is_default()) names.insert(q.graph);
    if (q.graph.is_default()) default_subjects.insert(q.subject());
  }
  r.named_graph_count = names.size();
  for (const auto& g : names)
    if (default_subjects.count(*g.to_term())) r.graphs_with_meta.push_back(g);
  r.has_meta_level = r.subject_quoted_count > 0 || r.object_quoted_count > 0 || !names.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Datasets in n-ary normal form: every record r = <t ++ suffix> has one
// link, one topic and at least one further property; nothing else mentions
// r or uses the shape predicates.

inline NaryShape dcat_shape() {
  return NaryShape{Iri("http://www.w3.org/ns/dcat#CatalogRecord"),
                   Iri("http://www.w3.org/ns/dcat#record"),
                   Iri("http://xmlns.com/foaf/0.1/primaryTopic"),
                   Iri("http://www.w3.org/ns/dcat#dataset"), "/record"};
}

inline Dataset nary_normal_form(Generator& gen, const NaryShape& shape) {
  Dataset ds;
  const std::size_t records = gen.uniform(0, 6);
  for (std::size_t i = 0; i < records; ++i) {
    Iri host("http://example.org/catalog/" + std::to_string(gen.uniform(0, 3)));
    std::string target = "http://example.org/dataset/" + std::to_string(i);
    Iri record(target + shape.mint_suffix);
    ds.insert(Quad(host, shape.link_pred, record));
    ds.insert(Quad(record, shape.topic_pred, Iri(target)));
    ds.insert(Quad(record, Iri(vocab::rdf::type), shape.record_class));
    const std::size_t props = gen.uniform(0, 3);
    for (std::size_t k = 0; k < props; ++k) {
      Term o = gen.object(1);
      ds.insert(Quad(record, Iri("http://purl.org/dc/terms/p" + std::to_string(gen.uniform(0, 4))), o));
    }
  }
  const std::size_t background = gen.uniform(0, 20);
  for (std::size_t i = 0; i < background; ++i) {
    ds.insert(Quad(gen.subject(1), Iri("http://example.org/bg" + std::to_string(gen.uniform(0, 2))),
                   gen.object(1)));
  }
  return ds;
}

}  // namespace mtest
