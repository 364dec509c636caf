#pragma once

// Canonical blank-node labeling and dataset isomorphism.
//
// Blank nodes are first partitioned by iterated color refinement: a node's
// color is rehashed from the multiset of the quads it occurs in, with itself
// marked and every other blank node replaced by its current color. When the
// partition is stable but not discrete, the search individualizes each member
// of the first non-trivial cell in turn and recurses; every leaf yields a
// candidate labeling, and the lexicographically smallest sorted N-Quads
// rendering wins. Members of a cell that are interchangeable by a
// transposition automorphism ("twins") lead to identical leaves and are
// explored once.
//
// All hashing is label-independent, so the result depends only on the
// isomorphism class of the input. Final labels are _:b0, _:b1, ... in
// first-use order of the canonically sorted quads.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metastar/dataset.hpp"
#include "metastar/format.hpp"
#include "metastar/term.hpp"

namespace metastar {

using BlankRenaming = std::map<std::string, std::string>;

inline Term relabel(const Term& term, const BlankRenaming& renaming) {
  switch (term.kind()) {
    case Term::Kind::BlankNode: {
      auto it = renaming.find(term.as_blank().label());
      return it == renaming.end() ? term : Term(BlankNode(it->second));
    }
    case Term::Kind::QuotedTriple: {
      const auto& q = term.as_quoted();
      return quote(Triple(relabel(q.subject(), renaming), q.predicate(),
                          relabel(q.object(), renaming)));
    }
    default: return term;
  }
}

inline GraphName relabel(const GraphName& graph, const BlankRenaming& renaming) {
  if (const auto* b = graph.if_blank()) {
    auto it = renaming.find(b->label());
    if (it != renaming.end()) return GraphName(BlankNode(it->second));
  }
  return graph;
}

inline Quad relabel(const Quad& quad, const BlankRenaming& renaming) {
  return Quad(relabel(quad.subject(), renaming), quad.predicate(),
              relabel(quad.object(), renaming), relabel(quad.graph, renaming));
}

inline Dataset relabel(const Dataset& ds, const BlankRenaming& renaming) {
  Dataset out;
  for (const auto& q : ds.quads()) out.insert(relabel(q, renaming));
  return out;
}

namespace detail {

inline bool term_has_blank(const Term& term) {
  if (term.is_blank()) return true;
  if (const auto* q = term.if_quoted()) return term_has_blank(q->subject()) || term_has_blank(q->object());
  return false;
}

inline bool quad_has_blank(const Quad& quad) {
  return term_has_blank(quad.subject()) || term_has_blank(quad.object()) ||
         quad.graph.if_blank() != nullptr;
}

template <class F>
void for_each_blank(const Term& term, F&& f) {
  if (const auto* b = term.if_blank()) {
    f(b->label());
  } else if (const auto* q = term.if_quoted()) {
    for_each_blank(q->subject(), f);
    for_each_blank(q->object(), f);
  }
}

template <class F>
void for_each_blank(const Quad& quad, F&& f) {
  for_each_blank(quad.subject(), f);
  for_each_blank(quad.object(), f);
  if (const auto* b = quad.graph.if_blank()) f(b->label());
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const std::vector<Quad>& quads) {
    for (const auto& q : quads) {
      if (!quad_has_blank(q)) {
        ground_lines_.push_back(quad_line(q));
        continue;
      }
      blank_quads_.push_back(q);
      blank_set_.insert(q);
    }
    std::map<std::string, std::size_t> index;
    for (const auto& q : blank_quads_) {
      for_each_blank(q, [&](const std::string& label) { index.emplace(label, 0); });
    }
    for (auto& [label, i] : index) {
      i = labels_.size();
      labels_.push_back(label);
    }
    occurrences_.resize(labels_.size());
    for (std::size_t qi = 0; qi < blank_quads_.size(); ++qi) {
      templates_.push_back(flatten(blank_quads_[qi], index));
      for (std::size_t b : templates_.back().distinct) occurrences_[b].push_back(qi);
    }
  }

  // Original label -> canonical label, and the canonical sorted lines.
  std::pair<BlankRenaming, std::vector<std::string>> run() {
    std::vector<std::string> lines = ground_lines_;
    if (labels_.empty()) {
      std::sort(lines.begin(), lines.end());
      return {{}, lines};
    }
    std::vector<std::uint64_t> colors(labels_.size(), 0);
    search(colors);
    lines.insert(lines.end(), best_lines_.begin(), best_lines_.end());
    std::sort(lines.begin(), lines.end());
    return {best_renaming_, lines};
  }

 private:
  static constexpr std::uint64_t kSelf = 0x5e1f5e1f5e1f5e1full;
  static constexpr std::uint64_t kIndividual = 0x1d1d1d1d1d1d1d1dull;

  struct Template {
    std::vector<std::uint64_t> segments;  // slots.size() + 1 entries
    std::vector<std::size_t> slots;       // blank index per gap
    std::vector<std::size_t> distinct;
  };

  static void flatten_term(const Term& term, const std::map<std::string, std::size_t>& index,
                           std::string& pending, Template& t) {
    switch (term.kind()) {
      case Term::Kind::BlankNode:
        t.segments.push_back(fnv1a(pending));
        pending.clear();
        t.slots.push_back(index.at(term.as_blank().label()));
        break;
      case Term::Kind::QuotedTriple: {
        const auto& q = term.as_quoted();
        pending += "<< ";
        flatten_term(q.subject(), index, pending, t);
        pending += ' ';
        append_iri(pending, q.predicate());
        pending += ' ';
        flatten_term(q.object(), index, pending, t);
        pending += " >>";
        break;
      }
      default: append_term(pending, term);
    }
  }

  static Template flatten(const Quad& q, const std::map<std::string, std::size_t>& index) {
    Template t;
    std::string pending;
    flatten_term(q.subject(), index, pending, t);
    pending += ' ';
    append_iri(pending, q.predicate());
    pending += ' ';
    flatten_term(q.object(), index, pending, t);
    pending += ' ';
    if (auto g = q.graph.to_term()) flatten_term(*g, index, pending, t);
    t.segments.push_back(fnv1a(pending));
    t.distinct = t.slots;
    std::sort(t.distinct.begin(), t.distinct.end());
    t.distinct.erase(std::unique(t.distinct.begin(), t.distinct.end()), t.distinct.end());
    return t;
  }

  static std::size_t count_distinct(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  }

  void refine(std::vector<std::uint64_t>& colors) const {
    std::size_t cells = count_distinct(colors);
    std::vector<std::vector<std::uint64_t>> sigs(colors.size());
    while (true) {
      for (auto& s : sigs) s.clear();
      for (const auto& t : templates_) {
        for (std::size_t self : t.distinct) {
          std::uint64_t h = 0x7e7e;
          for (std::size_t i = 0; i < t.slots.size(); ++i) {
            h = mix(h, t.segments[i]);
            h = mix(h, t.slots[i] == self ? kSelf : colors[t.slots[i]]);
          }
          h = mix(h, t.segments.back());
          sigs[self].push_back(h);
        }
      }
      std::vector<std::uint64_t> next(colors.size());
      for (std::size_t b = 0; b < colors.size(); ++b) {
        std::sort(sigs[b].begin(), sigs[b].end());
        std::uint64_t h = mix(colors[b], sigs[b].size());
        for (std::uint64_t s : sigs[b]) h = mix(h, s);
        next[b] = h;
      }
      std::size_t refined = count_distinct(next);
      colors = std::move(next);
      if (refined == cells) return;
      cells = refined;
    }
  }

  bool twins(std::size_t x, std::size_t y) {
    auto key = std::make_pair(std::min(x, y), std::max(x, y));
    if (auto it = twin_memo_.find(key); it != twin_memo_.end()) return it->second;
    BlankRenaming swap{{labels_[x], labels_[y]}, {labels_[y], labels_[x]}};
    bool ok = occurrences_[x].size() == occurrences_[y].size();
    for (std::size_t b : {x, y}) {
      for (std::size_t qi = 0; ok && qi < occurrences_[b].size(); ++qi) {
        ok = blank_set_.count(relabel(blank_quads_[occurrences_[b][qi]], swap)) != 0;
      }
    }
    twin_memo_.emplace(key, ok);
    return ok;
  }

  void search(std::vector<std::uint64_t> colors) {
    refine(colors);
    std::map<std::uint64_t, std::vector<std::size_t>> cells;
    for (std::size_t b = 0; b < colors.size(); ++b) cells[colors[b]].push_back(b);
    const std::vector<std::size_t>* target = nullptr;
    for (const auto& [color, members] : cells) {
      if (members.size() > 1) {
        target = &members;
        break;
      }
    }
    if (!target) {
      leaf(colors);
      return;
    }
    std::vector<std::size_t> explored;
    for (std::size_t m : *target) {
      bool redundant = std::any_of(explored.begin(), explored.end(),
                                   [&](std::size_t e) { return twins(e, m); });
      if (redundant) continue;
      auto next = colors;
      next[m] = mix(next[m], kIndividual);
      search(std::move(next));
      explored.push_back(m);
    }
  }

  void leaf(const std::vector<std::uint64_t>& colors) {
    std::vector<std::size_t> order(colors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return colors[a] < colors[b]; });

    const std::size_t width = std::to_string(order.size()).size();
    BlankRenaming ranked;
    for (std::size_t r = 0; r < order.size(); ++r) {
      std::string digits = std::to_string(r);
      ranked[labels_[order[r]]] = "t" + std::string(width - digits.size(), '0') + digits;
    }
    std::vector<Quad> quads;
    quads.reserve(blank_quads_.size());
    for (const auto& q : blank_quads_) quads.push_back(relabel(q, ranked));
    std::sort(quads.begin(), quads.end());

    BlankRenaming first_use;
    for (const auto& q : quads) {
      for_each_blank(q, [&](const std::string& label) {
        if (!first_use.count(label)) first_use.emplace(label, "b" + std::to_string(first_use.size()));
      });
    }
    std::vector<std::string> lines;
    lines.reserve(quads.size());
    for (const auto& q : quads) lines.push_back(quad_line(relabel(q, first_use)));
    std::sort(lines.begin(), lines.end());

    if (have_best_ && lines >= best_lines_) return;
    have_best_ = true;
    best_lines_ = std::move(lines);
    best_renaming_.clear();
    for (const auto& [original, tmp] : ranked) best_renaming_[original] = first_use.at(tmp);
  }

  std::vector<std::string> ground_lines_;
  std::vector<Quad> blank_quads_;
  std::unordered_set<Quad> blank_set_;
  std::vector<std::string> labels_;
  std::vector<Template> templates_;
  std::vector<std::vector<std::size_t>> occurrences_;
  std::map<std::pair<std::size_t, std::size_t>, bool> twin_memo_;

  bool have_best_ = false;
  std::vector<std::string> best_lines_;
  BlankRenaming best_renaming_;
};

}  // namespace detail

// Original blank label -> canonical label (_:b0, _:b1, ...).
inline BlankRenaming canonical_labels(const Dataset& ds) {
  return detail::Canonicalizer(ds.quads()).run().first;
}

inline Dataset canonicalize(const Dataset& ds) { return relabel(ds, canonical_labels(ds)); }

// Bytewise-sorted N-Quads-star lines of the canonically labeled dataset.
inline std::vector<std::string> canonical_lines(const Dataset& ds) {
  return detail::Canonicalizer(ds.quads()).run().second;
}

// True iff a bijection over blank-node labels maps `a` onto `b` exactly.
inline bool isomorphic(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size()) return false;
  return canonical_lines(a) == canonical_lines(b);
}

}  // namespace metastar
