#pragma once

// RDF-star terms: IRIs, blank nodes, literals and quoted triples, plus the
// triple / quad / graph-name carriers built from them. All types are
// immutable values; quoted triples share their inner node, so copying a
// deeply nested term is cheap.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "metastar/vocab.hpp"

namespace metastar {

// A value that does not satisfy the syntactic rules of its term kind.
class InvalidTerm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A term placed where RDF-star forbids its kind.
class PositionError : public std::invalid_argument {
 public:
  enum class Kind { SubjectLiteral, PredicateNotIri, InvalidGraphName };

  PositionError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class NotAQuotedTriple : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// Stable across builds and platforms; canonical output depends on it.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t value) noexcept {
  std::uint64_t x = seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline bool is_ascii_alpha(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(char c) noexcept { return c >= '0' && c <= '9'; }
inline bool is_ascii_alnum(char c) noexcept { return is_ascii_alpha(c) || is_ascii_digit(c); }

// scheme ":" where scheme = ALPHA *( ALPHA / DIGIT / "+" / "-" / "." )
inline bool has_scheme(std::string_view s) noexcept {
  if (s.empty() || !is_ascii_alpha(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (c == ':') return true;
    if (!(is_ascii_alnum(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  return false;
}

inline bool is_valid_iri(std::string_view s) noexcept {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (c <= 0x20 || c == 0x7f) return false;
  }
  return has_scheme(s);
}

inline bool is_valid_blank_label(std::string_view s) noexcept {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return is_ascii_alnum(c) || c == '_'; });
}

// [a-zA-Z]+ ('-' [a-zA-Z0-9]+)*
inline bool is_valid_language_tag(std::string_view s) noexcept {
  std::size_t i = 0;
  while (i < s.size() && is_ascii_alpha(s[i])) ++i;
  if (i == 0) return false;
  while (i < s.size()) {
    if (s[i] != '-') return false;
    std::size_t start = ++i;
    while (i < s.size() && is_ascii_alnum(s[i])) ++i;
    if (i == start) return false;
  }
  return true;
}

}  // namespace detail

class Iri {
 public:
  explicit Iri(std::string value) : value_(std::move(value)) {
    if (!detail::is_valid_iri(value_)) throw InvalidTerm("invalid IRI: '" + value_ + "'");
  }
  explicit Iri(std::string_view value) : Iri(std::string(value)) {}
  explicit Iri(const char* value) : Iri(std::string(value)) {}

  const std::string& str() const noexcept { return value_; }
  std::uint64_t hash() const noexcept { return detail::fnv1a(value_, 0x1111); }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend std::strong_ordering operator<=>(const Iri&, const Iri&) = default;

 private:
  std::string value_;
};

class BlankNode {
 public:
  explicit BlankNode(std::string label) : label_(std::move(label)) {
    if (!detail::is_valid_blank_label(label_))
      throw InvalidTerm("invalid blank node label: '" + label_ + "'");
  }

  const std::string& label() const noexcept { return label_; }
  std::uint64_t hash() const noexcept { return detail::fnv1a(label_, 0x2222); }

  friend bool operator==(const BlankNode&, const BlankNode&) = default;
  friend std::strong_ordering operator<=>(const BlankNode&, const BlankNode&) = default;

 private:
  std::string label_;
};

// Equality is lexical: "1"^^xsd:integer and "01"^^xsd:integer differ.
class Literal {
 public:
  explicit Literal(std::string lexical)
      : lexical_(std::move(lexical)), datatype_(vocab::xsd::string) {}

  Literal(std::string lexical, Iri datatype)
      : lexical_(std::move(lexical)), datatype_(std::move(datatype)) {
    if (datatype_.str() == vocab::rdf::lang_string)
      throw InvalidTerm("rdf:langString literal requires a language tag");
  }

  static Literal with_language(std::string lexical, std::string language) {
    if (!detail::is_valid_language_tag(language))
      throw InvalidTerm("invalid language tag: '" + language + "'");
    Literal lit(std::move(lexical));
    lit.datatype_ = Iri(vocab::rdf::lang_string);
    lit.language_ = std::move(language);
    return lit;
  }

  const std::string& lexical() const noexcept { return lexical_; }
  const Iri& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }
  bool has_language() const noexcept { return !language_.empty(); }

  std::uint64_t hash() const noexcept {
    std::uint64_t h = detail::fnv1a(lexical_, 0x3333);
    h = detail::mix(h, datatype_.hash());
    return detail::mix(h, detail::fnv1a(language_));
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal&, const Literal&) = default;

 private:
  std::string lexical_;
  Iri datatype_;
  std::string language_;
};

class Term;
class Triple;

// A triple used as a term. Quoting does not assert.
class QuotedTriple {
 public:
  explicit QuotedTriple(Triple triple);

  const Triple& triple() const noexcept { return *node_; }
  const Term& subject() const noexcept;
  const Iri& predicate() const noexcept;
  const Term& object() const noexcept;
  std::uint64_t hash() const noexcept { return hash_; }

  friend bool operator==(const QuotedTriple& a, const QuotedTriple& b) noexcept;
  friend std::strong_ordering operator<=>(const QuotedTriple& a, const QuotedTriple& b) noexcept;

 private:
  std::shared_ptr<const Triple> node_;
  std::uint64_t hash_;
};

// Tagged union over the four node kinds. The total order is
// IRI < blank node < literal < quoted triple, each kind ordered by content.
class Term {
 public:
  enum class Kind : std::uint8_t { Iri = 0, BlankNode = 1, Literal = 2, QuotedTriple = 3 };

  Term(Iri iri) : value_(std::move(iri)) {}
  Term(BlankNode blank) : value_(std::move(blank)) {}
  Term(Literal literal) : value_(std::move(literal)) {}
  Term(QuotedTriple quoted) : value_(std::move(quoted)) {}

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_iri() const noexcept { return kind() == Kind::Iri; }
  bool is_blank() const noexcept { return kind() == Kind::BlankNode; }
  bool is_literal() const noexcept { return kind() == Kind::Literal; }
  bool is_quoted() const noexcept { return kind() == Kind::QuotedTriple; }

  const Iri& as_iri() const { return std::get<Iri>(value_); }
  const BlankNode& as_blank() const { return std::get<BlankNode>(value_); }
  const Literal& as_literal() const { return std::get<Literal>(value_); }
  const QuotedTriple& as_quoted() const { return std::get<QuotedTriple>(value_); }

  const Iri* if_iri() const noexcept { return std::get_if<Iri>(&value_); }
  const BlankNode* if_blank() const noexcept { return std::get_if<BlankNode>(&value_); }
  const Literal* if_literal() const noexcept { return std::get_if<Literal>(&value_); }
  const QuotedTriple* if_quoted() const noexcept { return std::get_if<QuotedTriple>(&value_); }

  std::uint64_t hash() const noexcept {
    return std::visit([](const auto& v) { return v.hash(); }, value_);
  }

  friend bool operator==(const Term& a, const Term& b) noexcept { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (a.value_.index() != b.value_.index()) return a.value_.index() <=> b.value_.index();
    return std::visit(
        [&b](const auto& lhs) -> std::strong_ordering {
          using T = std::decay_t<decltype(lhs)>;
          return lhs <=> std::get<T>(b.value_);
        },
        a.value_);
  }

 private:
  std::variant<Iri, BlankNode, Literal, QuotedTriple> value_;
};

// An RDF-star triple. The predicate is an IRI by type; the constructor
// rejects literal subjects.
class Triple {
 public:
  Triple(Term subject, Iri predicate, Term object)
      : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
    if (subject_.is_literal())
      throw PositionError(PositionError::Kind::SubjectLiteral, "literal in subject position");
  }

  const Term& subject() const noexcept { return subject_; }
  const Iri& predicate() const noexcept { return predicate_; }
  const Term& object() const noexcept { return object_; }

  std::uint64_t hash() const noexcept {
    std::uint64_t h = detail::mix(0x4444, subject_.hash());
    h = detail::mix(h, predicate_.hash());
    return detail::mix(h, object_.hash());
  }

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;

 private:
  Term subject_;
  Iri predicate_;
  Term object_;
};

inline QuotedTriple::QuotedTriple(Triple triple)
    : node_(std::make_shared<const Triple>(std::move(triple))),
      hash_(detail::mix(0x5555, node_->hash())) {}

inline const Term& QuotedTriple::subject() const noexcept { return node_->subject(); }
inline const Iri& QuotedTriple::predicate() const noexcept { return node_->predicate(); }
inline const Term& QuotedTriple::object() const noexcept { return node_->object(); }

inline bool operator==(const QuotedTriple& a, const QuotedTriple& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash_ != b.hash_) return false;
  return *a.node_ == *b.node_;
}

inline std::strong_ordering operator<=>(const QuotedTriple& a, const QuotedTriple& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  return *a.node_ <=> *b.node_;
}

inline Term quote(Triple triple) { return Term(QuotedTriple(std::move(triple))); }

// Validating constructor for triples whose components arrive as generic terms.
inline Triple make_triple(Term subject, Term predicate, Term object) {
  if (subject.is_literal())
    throw PositionError(PositionError::Kind::SubjectLiteral, "literal in subject position");
  if (!predicate.is_iri())
    throw PositionError(PositionError::Kind::PredicateNotIri, "predicate is not an IRI");
  return Triple(std::move(subject), predicate.as_iri(), std::move(object));
}

std::size_t nesting_depth(const Triple& triple) noexcept;

// 0 for non-quoted terms; 1 + depth of the inner triple otherwise.
inline std::size_t nesting_depth(const Term& term) noexcept {
  if (const auto* q = term.if_quoted()) return 1 + nesting_depth(q->triple());
  return 0;
}

inline std::size_t nesting_depth(const Triple& triple) noexcept {
  return std::max(nesting_depth(triple.subject()), nesting_depth(triple.object()));
}

struct DefaultGraph {
  friend bool operator==(DefaultGraph, DefaultGraph) = default;
  friend std::strong_ordering operator<=>(DefaultGraph, DefaultGraph) = default;
};

// The default graph sorts before every named graph.
class GraphName {
 public:
  GraphName() = default;
  GraphName(DefaultGraph) {}
  GraphName(Iri iri) : value_(std::move(iri)) {}
  GraphName(BlankNode blank) : value_(std::move(blank)) {}

  static GraphName from_term(const Term& term) {
    if (const auto* iri = term.if_iri()) return GraphName(*iri);
    if (const auto* blank = term.if_blank()) return GraphName(*blank);
    throw PositionError(PositionError::Kind::InvalidGraphName,
                        "graph name must be an IRI or blank node");
  }

  bool is_default() const noexcept { return value_.index() == 0; }
  const Iri* if_iri() const noexcept { return std::get_if<Iri>(&value_); }
  const BlankNode* if_blank() const noexcept { return std::get_if<BlankNode>(&value_); }

  std::optional<Term> to_term() const {
    if (const auto* iri = if_iri()) return Term(*iri);
    if (const auto* blank = if_blank()) return Term(*blank);
    return std::nullopt;
  }

  std::uint64_t hash() const noexcept {
    if (const auto* iri = if_iri()) return iri->hash();
    if (const auto* blank = if_blank()) return blank->hash();
    return 0x6666;
  }

  friend bool operator==(const GraphName&, const GraphName&) = default;
  friend std::strong_ordering operator<=>(const GraphName&, const GraphName&) = default;

 private:
  std::variant<DefaultGraph, Iri, BlankNode> value_;
};

struct Quad {
  Triple triple;
  GraphName graph;

  Quad(Triple t, GraphName g = {}) : triple(std::move(t)), graph(std::move(g)) {}
  Quad(Term s, Iri p, Term o, GraphName g = {})
      : triple(std::move(s), std::move(p), std::move(o)), graph(std::move(g)) {}

  const Term& subject() const noexcept { return triple.subject(); }
  const Iri& predicate() const noexcept { return triple.predicate(); }
  const Term& object() const noexcept { return triple.object(); }

  std::uint64_t hash() const noexcept { return detail::mix(triple.hash(), graph.hash()); }

  friend bool operator==(const Quad&, const Quad&) = default;
  friend std::strong_ordering operator<=>(const Quad&, const Quad&) = default;
};

}  // namespace metastar

template <>
struct std::hash<metastar::Iri> {
  std::size_t operator()(const metastar::Iri& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::BlankNode> {
  std::size_t operator()(const metastar::BlankNode& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::Literal> {
  std::size_t operator()(const metastar::Literal& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::Term> {
  std::size_t operator()(const metastar::Term& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::Triple> {
  std::size_t operator()(const metastar::Triple& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::GraphName> {
  std::size_t operator()(const metastar::GraphName& v) const noexcept { return v.hash(); }
};
template <>
struct std::hash<metastar::Quad> {
  std::size_t operator()(const metastar::Quad& v) const noexcept { return v.hash(); }
};
