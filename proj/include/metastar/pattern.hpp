#pragma once

// Variable-bearing quad patterns and their solutions. Variables may occur
// inside quoted-triple patterns; unification descends into them.

#include <algorithm>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metastar/dataset.hpp"
#include "metastar/term.hpp"

namespace metastar {

struct Variable {
  std::string name;

  friend bool operator==(const Variable&, const Variable&) = default;
  friend std::strong_ordering operator<=>(const Variable&, const Variable&) = default;
};

inline Variable var(std::string name) { return Variable{std::move(name)}; }

struct QuotedTriplePattern;

class TermPattern {
 public:
  TermPattern(Term term) : value_(std::move(term)) {}
  TermPattern(Iri iri) : value_(Term(std::move(iri))) {}
  TermPattern(BlankNode blank) : value_(Term(std::move(blank))) {}
  TermPattern(Literal literal) : value_(Term(std::move(literal))) {}
  TermPattern(Variable v) : value_(std::move(v)) {}

  // A fully ground quoted pattern collapses into the quoted term it denotes,
  // which also enforces the positional rules.
  static TermPattern quoted(TermPattern subject, TermPattern predicate, TermPattern object);

  const Term* if_term() const noexcept { return std::get_if<Term>(&value_); }
  const Variable* if_variable() const noexcept { return std::get_if<Variable>(&value_); }
  const QuotedTriplePattern* if_quoted() const noexcept {
    auto* p = std::get_if<std::shared_ptr<const QuotedTriplePattern>>(&value_);
    return p ? p->get() : nullptr;
  }

  bool is_ground() const noexcept { return if_term() != nullptr; }

 private:
  TermPattern() = default;
  std::variant<Term, Variable, std::shared_ptr<const QuotedTriplePattern>> value_{
      Term(Iri("urn:x:unset"))};
};

struct QuotedTriplePattern {
  TermPattern subject;
  TermPattern predicate;
  TermPattern object;
};

inline TermPattern TermPattern::quoted(TermPattern subject, TermPattern predicate,
                                       TermPattern object) {
  if (const auto* s = subject.if_term(); s && s->is_literal())
    throw PositionError(PositionError::Kind::SubjectLiteral,
                        "literal in quoted-triple subject pattern");
  if (const auto* p = predicate.if_term(); (p && !p->is_iri()) || predicate.if_quoted())
    throw PositionError(PositionError::Kind::PredicateNotIri,
                        "quoted-triple predicate pattern is not an IRI");
  TermPattern out;
  if (subject.is_ground() && predicate.is_ground() && object.is_ground()) {
    out.value_ = quote(make_triple(*subject.if_term(), *predicate.if_term(), *object.if_term()));
  } else {
    out.value_ = std::make_shared<const QuotedTriplePattern>(
        QuotedTriplePattern{std::move(subject), std::move(predicate), std::move(object)});
  }
  return out;
}

struct AnyGraph {};

// Graph position: a fixed graph, a variable (binds named graphs only), or
// any graph including the default one.
using GraphPattern = std::variant<GraphName, Variable, AnyGraph>;

struct QuadPattern {
  TermPattern subject;
  TermPattern predicate;
  TermPattern object;
  GraphPattern graph = GraphName{};
};

// A solution: each variable bound at most once.
class Binding {
 public:
  const Term* find(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
  }
  const Term& at(const std::string& name) const { return values_.at(name); }
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::map<std::string, Term>& values() const noexcept { return values_; }

  // Fails (returns false) if the variable is already bound to another term.
  bool bind(const std::string& name, const Term& value) {
    auto [it, inserted] = values_.emplace(name, value);
    return inserted || it->second == value;
  }

  friend bool operator==(const Binding&, const Binding&) = default;
  friend auto operator<=>(const Binding& a, const Binding& b) { return a.values_ <=> b.values_; }

 private:
  std::map<std::string, Term> values_;
};

// Star functions.

inline bool is_quoted(const Term& term) noexcept { return term.is_quoted(); }

inline const QuotedTriple& require_quoted(const Term& term) {
  if (const auto* q = term.if_quoted()) return *q;
  throw NotAQuotedTriple("term is not a quoted triple");
}

inline Term subject_of(const Term& term) { return require_quoted(term).subject(); }
inline Term predicate_of(const Term& term) { return Term(require_quoted(term).predicate()); }
inline Term object_of(const Term& term) { return require_quoted(term).object(); }

inline Term make_quoted(Term subject, Term predicate, Term object) {
  return quote(make_triple(std::move(subject), std::move(predicate), std::move(object)));
}

namespace detail {

inline bool unify(const TermPattern& pattern, const Term& term, Binding& binding) {
  if (const auto* t = pattern.if_term()) return *t == term;
  if (const auto* v = pattern.if_variable()) return binding.bind(v->name, term);
  const auto* qp = pattern.if_quoted();
  const auto* qt = term.if_quoted();
  if (!qt) return false;
  return unify(qp->subject, qt->subject(), binding) &&
         unify(qp->predicate, Term(qt->predicate()), binding) &&
         unify(qp->object, qt->object(), binding);
}

inline bool unify_graph(const GraphPattern& pattern, const GraphName& graph, Binding& binding) {
  if (const auto* g = std::get_if<GraphName>(&pattern)) return *g == graph;
  if (const auto* v = std::get_if<Variable>(&pattern)) {
    auto term = graph.to_term();
    return term && binding.bind(v->name, *term);
  }
  return true;
}

// nullopt when the substitution places a term where no quoted triple can
// hold it (e.g. a literal bound into a quoted subject).
inline std::optional<TermPattern> substitute(const TermPattern& pattern, const Binding& binding) {
  if (pattern.is_ground()) return pattern;
  if (const auto* v = pattern.if_variable()) {
    if (const Term* t = binding.find(v->name)) return TermPattern(*t);
    return pattern;
  }
  const auto* qp = pattern.if_quoted();
  auto s = substitute(qp->subject, binding);
  auto p = substitute(qp->predicate, binding);
  auto o = substitute(qp->object, binding);
  if (!s || !p || !o) return std::nullopt;
  try {
    return TermPattern::quoted(std::move(*s), std::move(*p), std::move(*o));
  } catch (const PositionError&) {
    return std::nullopt;
  }
}

inline void sorted_intersect(std::optional<std::vector<Dataset::Id>>& acc,
                             std::vector<Dataset::Id> next) {
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  if (!acc) {
    acc = std::move(next);
    return;
  }
  std::vector<Dataset::Id> out;
  std::set_intersection(acc->begin(), acc->end(), next.begin(), next.end(),
                        std::back_inserter(out));
  acc = std::move(out);
}

// Sorted ids of interned quoted triples structurally compatible with `qp`,
// ignoring variable co-reference. Computed from the side index only.
inline std::vector<Dataset::Id> quoted_candidates(const Dataset& ds,
                                                  const QuotedTriplePattern& qp) {
  std::optional<std::vector<Dataset::Id>> acc;
  const TermPattern* parts[3] = {&qp.subject, &qp.predicate, &qp.object};
  const Dataset::Role roles[3] = {Dataset::Role::Subject, Dataset::Role::Predicate,
                                  Dataset::Role::Object};
  for (std::size_t i = 0; i < 3; ++i) {
    const TermPattern& part = *parts[i];
    if (part.if_variable()) continue;
    std::vector<Dataset::Id> ids;
    if (const auto* t = part.if_term()) {
      auto id = ds.lookup(*t);
      if (!id) return {};
      const auto& c = ds.quoted_containing(roles[i], *id);
      ids.assign(c.begin(), c.end());
    } else {
      for (Dataset::Id inner : quoted_candidates(ds, *part.if_quoted())) {
        const auto& c = ds.quoted_containing(roles[i], inner);
        ids.insert(ids.end(), c.begin(), c.end());
      }
    }
    sorted_intersect(acc, std::move(ids));
    if (acc->empty()) return {};
  }
  if (!acc) {
    std::vector<Dataset::Id> all = ds.quoted_ids();
    std::sort(all.begin(), all.end());
    return all;
  }
  return *acc;
}

}  // namespace detail

// All distinct bindings that make `pattern` a quad of `ds`, in index order.
inline std::vector<Binding> match(const Dataset& ds, const QuadPattern& pattern) {
  std::vector<Binding> out;
  std::set<Binding> seen;

  std::array<std::optional<Dataset::Id>, 4> bound{};
  const TermPattern* positions[3] = {&pattern.subject, &pattern.predicate, &pattern.object};
  for (std::size_t i = 0; i < 3; ++i) {
    if (const auto* t = positions[i]->if_term()) {
      auto id = ds.lookup(*t);
      if (!id) return out;
      bound[i] = *id;
    }
  }
  if (const auto* g = std::get_if<GraphName>(&pattern.graph)) {
    auto id = ds.graph_id(*g);
    if (!id) return out;
    bound[3] = *id;
  }

  auto visit = [&](const Dataset::Key& key) {
    if (std::holds_alternative<Variable>(pattern.graph) && key[3] == Dataset::kDefaultGraph)
      return;
    Binding b;
    if (!detail::unify(pattern.subject, ds.term(key[0]), b)) return;
    if (!detail::unify(pattern.predicate, ds.term(key[1]), b)) return;
    if (!detail::unify(pattern.object, ds.term(key[2]), b)) return;
    if (!detail::unify_graph(pattern.graph, ds.graph_of(key[3]), b)) return;
    if (seen.insert(b).second) out.push_back(std::move(b));
  };

  // Drive the scan from the most selective quoted-triple pattern, if any.
  std::optional<std::size_t> driver;
  std::vector<Dataset::Id> driver_ids;
  for (std::size_t i = 0; i < 3; ++i) {
    if (const auto* qp = positions[i]->if_quoted()) {
      auto ids = detail::quoted_candidates(ds, *qp);
      if (!driver || ids.size() < driver_ids.size()) {
        driver = i;
        driver_ids = std::move(ids);
      }
    }
  }

  if (driver) {
    for (Dataset::Id id : driver_ids) {
      auto b = bound;
      b[*driver] = id;
      ds.scan(b, visit);
    }
  } else {
    ds.scan(bound, visit);
  }
  return out;
}

// Conjunctive (basic graph pattern) evaluation by nested substitution.
inline std::vector<Binding> solve(const Dataset& ds, const std::vector<QuadPattern>& patterns) {
  std::vector<Binding> partial{Binding{}};
  for (const auto& pattern : patterns) {
    std::vector<Binding> next;
    std::set<Binding> seen;
    for (const auto& b : partial) {
      auto s = detail::substitute(pattern.subject, b);
      auto pr = detail::substitute(pattern.predicate, b);
      auto o = detail::substitute(pattern.object, b);
      if (!s || !pr || !o) continue;
      QuadPattern p{std::move(*s), std::move(*pr), std::move(*o), pattern.graph};
      if (const auto* v = std::get_if<Variable>(&pattern.graph)) {
        if (const Term* t = b.find(v->name)) {
          if (t->is_literal() || t->is_quoted()) continue;
          p.graph = GraphName::from_term(*t);
        }
      }
      for (const auto& extra : match(ds, p)) {
        Binding merged = b;
        bool ok = true;
        for (const auto& [name, term] : extra.values()) {
          if (!merged.bind(name, term)) {
            ok = false;
            break;
          }
        }
        if (ok && seen.insert(merged).second) next.push_back(std::move(merged));
      }
    }
    partial = std::move(next);
    if (partial.empty()) break;
  }
  return partial;
}

}  // namespace metastar
