#pragma once

// Indexed in-memory quad store.
//
// Terms are interned into dense ids (0 is reserved for the default graph).
// Quads are kept in four orderings (SPOG, POSG, OSPG, GSPO) so that any
// combination of bound positions can be answered by a range scan over the
// index with the longest bound prefix. Quoted triples are interned as opaque
// ids; a side index maps each interned component id to the quoted-triple
// ids that contain it directly, which lets patterns with variables inside
// << >> find candidates without scanning every quad.
//
// Contract: single writer, many readers. Concurrent const access is safe;
// mutation requires exclusive access. There is no internal locking.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metastar/term.hpp"

namespace metastar {

class Dataset {
 public:
  using Id = std::uint32_t;
  static constexpr Id kDefaultGraph = 0;

  enum class Index : std::uint8_t { SPOG, POSG, OSPG, GSPO };
  enum class Role : std::uint8_t { Subject, Predicate, Object };

  // Key positions are always (s, p, o, g) regardless of index.
  using Key = std::array<Id, 4>;

  Dataset() { terms_.emplace_back(Iri("urn:metastar:default-graph")); }

  // Returns true when the quad was not already present.
  bool insert(const Quad& quad) {
    Key key{intern(quad.subject()), intern(Term(quad.predicate())), intern(quad.object()),
            intern_graph(quad.graph)};
    if (!spog_.insert(permute(Index::SPOG, key)).second) return false;
    posg_.insert(permute(Index::POSG, key));
    ospg_.insert(permute(Index::OSPG, key));
    gspo_.insert(permute(Index::GSPO, key));
    return true;
  }

  bool insert(Term s, Iri p, Term o, GraphName g = {}) {
    return insert(Quad(std::move(s), std::move(p), std::move(o), std::move(g)));
  }

  bool erase(const Quad& quad) {
    auto key = key_of(quad);
    if (!key || !spog_.erase(permute(Index::SPOG, *key))) return false;
    posg_.erase(permute(Index::POSG, *key));
    ospg_.erase(permute(Index::OSPG, *key));
    gspo_.erase(permute(Index::GSPO, *key));
    return true;
  }

  bool contains(const Quad& quad) const {
    auto key = key_of(quad);
    return key && spog_.count(permute(Index::SPOG, *key)) != 0;
  }

  std::size_t size() const noexcept { return spog_.size(); }
  bool empty() const noexcept { return spog_.empty(); }

  void clear() { *this = Dataset(); }

  // All quads in SPOG id order (deterministic for a given insertion history).
  std::vector<Quad> quads() const {
    std::vector<Quad> out;
    out.reserve(size());
    for (const auto& k : spog_) out.push_back(to_quad(unpermute(Index::SPOG, k)));
    return out;
  }

  // Distinct non-default graph names, in term order.
  std::vector<GraphName> graph_names() const {
    std::vector<GraphName> out;
    auto it = gspo_.lower_bound(Key{1, 0, 0, 0});
    while (it != gspo_.end()) {
      Id g = (*it)[0];
      out.push_back(graph_of(g));
      it = gspo_.lower_bound(Key{g + 1, 0, 0, 0});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t graph_size(const GraphName& graph) const {
    auto g = graph_id(graph);
    if (!g) return 0;
    std::size_t n = 0;
    scan({std::nullopt, std::nullopt, std::nullopt, *g}, [&n](const Key&) { ++n; });
    return n;
  }

  std::vector<Quad> graph_quads(const GraphName& graph) const {
    std::vector<Quad> out;
    auto g = graph_id(graph);
    if (!g) return out;
    scan({std::nullopt, std::nullopt, std::nullopt, *g},
         [&](const Key& k) { out.push_back(to_quad(k)); });
    return out;
  }

  // True if `term` appears in any stored quad, including inside quoted triples.
  bool occurs(const Term& term) const {
    for (const auto& k : spog_) {
      for (std::size_t i = 0; i < 4; ++i) {
        Id id = k[i];
        if (i == 3 && id == kDefaultGraph) continue;
        if (term_contains(terms_[id], term)) return true;
      }
    }
    return false;
  }

  // Low-level access used by the pattern matcher.

  std::optional<Id> lookup(const Term& term) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Id> graph_id(const GraphName& graph) const {
    if (graph.is_default()) return kDefaultGraph;
    return lookup(*graph.to_term());
  }

  const Term& term(Id id) const { return terms_.at(id); }

  GraphName graph_of(Id id) const {
    if (id == kDefaultGraph) return GraphName{};
    return GraphName::from_term(terms_.at(id));
  }

  Quad to_quad(const Key& k) const {
    return Quad(terms_[k[0]], terms_[k[1]].as_iri(), terms_[k[2]], graph_of(k[3]));
  }

  // Quoted-triple ids having `component` directly in `role`.
  const std::vector<Id>& quoted_containing(Role role, Id component) const {
    static const std::vector<Id> kEmpty;
    const auto& side = side_[static_cast<std::size_t>(role)];
    auto it = side.find(component);
    return it == side.end() ? kEmpty : it->second;
  }

  const std::vector<Id>& quoted_ids() const noexcept { return quoted_; }

  // Visits keys (in s,p,o,g order) matching the bound positions, using the
  // index with the longest bound prefix. Visit order is that index's order.
  template <class Visitor>
  void scan(const std::array<std::optional<Id>, 4>& bound, Visitor&& visit) const {
    scan_with(choose_index(bound), bound, std::forward<Visitor>(visit));
  }

  // Same as scan() on a caller-chosen index; bound positions that do not
  // form a prefix of that index are filtered.
  template <class Visitor>
  void scan_with(Index index, const std::array<std::optional<Id>, 4>& bound,
                 Visitor&& visit) const {
    const auto& set = index_set(index);
    std::array<std::optional<Id>, 4> ordered{};
    const auto& order = order_of(index);
    for (std::size_t i = 0; i < 4; ++i) ordered[i] = bound[order[i]];

    std::size_t prefix = 0;
    while (prefix < 4 && ordered[prefix]) ++prefix;

    Key lo{0, 0, 0, 0};
    for (std::size_t i = 0; i < prefix; ++i) lo[i] = *ordered[i];
    for (auto it = set.lower_bound(lo); it != set.end(); ++it) {
      const Key& k = *it;
      bool in_range = true;
      for (std::size_t i = 0; i < prefix; ++i) {
        if (k[i] != lo[i]) {
          in_range = false;
          break;
        }
      }
      if (!in_range) break;
      bool ok = true;
      for (std::size_t i = prefix; i < 4; ++i) {
        if (ordered[i] && k[i] != *ordered[i]) {
          ok = false;
          break;
        }
      }
      if (ok) visit(unpermute(index, k));
    }
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.size() != b.size()) return false;
    for (const auto& k : a.spog_) {
      if (!b.contains(a.to_quad(unpermute(Index::SPOG, k)))) return false;
    }
    return true;
  }

 private:
  using Order = std::array<std::size_t, 4>;

  static const Order& order_of(Index index) noexcept {
    static constexpr Order kOrders[4] = {{0, 1, 2, 3}, {1, 2, 0, 3}, {2, 0, 1, 3}, {3, 0, 1, 2}};
    return kOrders[static_cast<std::size_t>(index)];
  }

  static Key permute(Index index, const Key& k) noexcept {
    const auto& order = order_of(index);
    return {k[order[0]], k[order[1]], k[order[2]], k[order[3]]};
  }

  static Key unpermute(Index index, const Key& k) noexcept {
    const auto& order = order_of(index);
    Key out{};
    for (std::size_t i = 0; i < 4; ++i) out[order[i]] = k[i];
    return out;
  }

  static Index choose_index(const std::array<std::optional<Id>, 4>& bound) noexcept {
    Index best = Index::SPOG;
    std::size_t best_len = 0;
    for (Index index : {Index::SPOG, Index::POSG, Index::OSPG, Index::GSPO}) {
      const auto& order = order_of(index);
      std::size_t len = 0;
      while (len < 4 && bound[order[len]]) ++len;
      if (len > best_len) {
        best = index;
        best_len = len;
      }
    }
    return best;
  }

  const std::set<Key>& index_set(Index index) const noexcept {
    switch (index) {
      case Index::SPOG: return spog_;
      case Index::POSG: return posg_;
      case Index::OSPG: return ospg_;
      case Index::GSPO: return gspo_;
    }
    return spog_;
  }

  static bool term_contains(const Term& haystack, const Term& needle) {
    if (haystack == needle) return true;
    if (const auto* q = haystack.if_quoted()) {
      return term_contains(q->subject(), needle) ||
             (needle.is_iri() && q->predicate() == needle.as_iri()) ||
             term_contains(q->object(), needle);
    }
    return false;
  }

  Id intern(const Term& term) {
    if (auto it = ids_.find(term); it != ids_.end()) return it->second;
    std::optional<std::array<Id, 3>> parts;
    if (const auto* q = term.if_quoted()) {
      parts = std::array<Id, 3>{intern(q->subject()), intern(Term(q->predicate())),
                                intern(q->object())};
    }
    Id id = static_cast<Id>(terms_.size());
    terms_.push_back(term);
    ids_.emplace(term, id);
    if (parts) {
      quoted_.push_back(id);
      for (std::size_t r = 0; r < 3; ++r) side_[r][(*parts)[r]].push_back(id);
    }
    return id;
  }

  Id intern_graph(const GraphName& graph) {
    if (graph.is_default()) return kDefaultGraph;
    return intern(*graph.to_term());
  }

  std::optional<Key> key_of(const Quad& quad) const {
    auto s = lookup(quad.subject());
    auto p = lookup(Term(quad.predicate()));
    auto o = lookup(quad.object());
    auto g = graph_id(quad.graph);
    if (!s || !p || !o || !g) return std::nullopt;
    return Key{*s, *p, *o, *g};
  }

  // Interned terms are never dropped, so ids stay stable across erase().
  std::vector<Term> terms_;
  std::unordered_map<Term, Id> ids_;
  std::vector<Id> quoted_;
  std::array<std::unordered_map<Id, std::vector<Id>>, 3> side_;
  std::set<Key> spog_, posg_, ospg_, gspo_;
};

}  // namespace metastar
