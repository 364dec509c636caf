#pragma once

// N-Triples-star style rendering of single terms and quads. Shared by the
// serializers and by canonicalization, which compares rendered lines.

#include <string>
#include <string_view>

#include "metastar/term.hpp"
#include "metastar/vocab.hpp"

namespace metastar {

namespace detail {

inline void append_hex4(std::string& out, unsigned value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  out += "\\u";
  for (int shift = 12; shift >= 0; shift -= 4) out += kHex[(value >> shift) & 0xF];
}

}  // namespace detail

inline void append_escaped_string(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          detail::append_hex4(out, c);
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

// Characters IRIREF cannot carry literally are written as \u escapes.
inline void append_escaped_iri(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    switch (c) {
      case '<': case '>': case '"': case '{': case '}':
      case '|': case '^': case '`': case '\\':
        detail::append_hex4(out, c);
        break;
      default:
        if (c <= 0x20 || c == 0x7f) {
          detail::append_hex4(out, c);
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

inline void append_iri(std::string& out, const Iri& iri) {
  out += '<';
  append_escaped_iri(out, iri.str());
  out += '>';
}

inline void append_term(std::string& out, const Term& term);

inline void append_literal(std::string& out, const Literal& lit) {
  out += '"';
  append_escaped_string(out, lit.lexical());
  out += '"';
  if (lit.has_language()) {
    out += '@';
    out += lit.language();
  } else if (lit.datatype().str() != vocab::xsd::string) {
    out += "^^";
    append_iri(out, lit.datatype());
  }
}

inline void append_term(std::string& out, const Term& term) {
  switch (term.kind()) {
    case Term::Kind::Iri: append_iri(out, term.as_iri()); break;
    case Term::Kind::BlankNode:
      out += "_:";
      out += term.as_blank().label();
      break;
    case Term::Kind::Literal: append_literal(out, term.as_literal()); break;
    case Term::Kind::QuotedTriple: {
      const auto& q = term.as_quoted();
      out += "<< ";
      append_term(out, q.subject());
      out += ' ';
      append_iri(out, q.predicate());
      out += ' ';
      append_term(out, q.object());
      out += " >>";
      break;
    }
  }
}

inline std::string to_string(const Term& term) {
  std::string out;
  append_term(out, term);
  return out;
}

inline std::string to_string(const Triple& triple) {
  std::string out;
  append_term(out, triple.subject());
  out += ' ';
  append_iri(out, triple.predicate());
  out += ' ';
  append_term(out, triple.object());
  return out;
}

inline std::string to_string(const GraphName& graph) {
  if (auto t = graph.to_term()) return to_string(*t);
  return "DEFAULT";
}

// One N-Quads-star line, including the terminating " .\n".
inline void append_quad_line(std::string& out, const Quad& quad) {
  append_term(out, quad.subject());
  out += ' ';
  append_iri(out, quad.predicate());
  out += ' ';
  append_term(out, quad.object());
  if (auto g = quad.graph.to_term()) {
    out += ' ';
    append_term(out, *g);
  }
  out += " .\n";
}

inline std::string quad_line(const Quad& quad) {
  std::string out;
  append_quad_line(out, quad);
  return out;
}

}  // namespace metastar
