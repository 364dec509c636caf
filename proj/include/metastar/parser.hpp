#pragma once

// TriG-star and N-Quads-star parsing.
//
// The TriG-star reader accepts the Turtle family as subsets: @prefix/PREFIX,
// @base/BASE, graph blocks with or without GRAPH, predicate and object lists,
// blank-node property lists, numeric and boolean shorthand, quoted triples
// with nesting, and annotation blocks {| ... |}, which assert the annotated
// triple and attach the annotation to its quoted form. Blank-node labels are
// replaced by fresh labels (_:b0, _:b1, ...) scoped to one parse. The first
// error aborts the parse.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "metastar/dataset.hpp"
#include "metastar/prefix_map.hpp"
#include "metastar/term.hpp"
#include "metastar/vocab.hpp"

namespace metastar {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Lexical, UnknownPrefix, BadPosition, DepthExceeded, UnterminatedConstruct };

  ParseError(Kind kind, std::size_t line, std::size_t column, std::string message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column),
        message_(std::move(message)) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

inline const char* to_string(ParseError::Kind kind) noexcept {
  switch (kind) {
    case ParseError::Kind::Lexical: return "Lexical";
    case ParseError::Kind::UnknownPrefix: return "UnknownPrefix";
    case ParseError::Kind::BadPosition: return "BadPosition";
    case ParseError::Kind::DepthExceeded: return "DepthExceeded";
    case ParseError::Kind::UnterminatedConstruct: return "UnterminatedConstruct";
  }
  return "?";
}

struct ParseOptions {
  std::optional<Iri> base;
  std::size_t max_quote_depth = 32;  // must be >= 1
  bool allow_annotation_syntax = true;
};

struct ParseResult {
  Dataset dataset;
  PrefixMap prefixes;
};

namespace detail {

// RFC 3986 reference resolution. `base` must be absolute.
inline std::string remove_dot_segments(std::string_view path) {
  std::string input(path);
  std::string output;
  while (!input.empty()) {
    if (input.rfind("../", 0) == 0) {
      input.erase(0, 3);
    } else if (input.rfind("./", 0) == 0) {
      input.erase(0, 2);
    } else if (input.rfind("/./", 0) == 0) {
      input.erase(0, 2);
    } else if (input == "/.") {
      input = "/";
    } else if (input.rfind("/../", 0) == 0 || input == "/..") {
      input = input.size() == 3 ? std::string("/") : input.substr(3);
      auto slash = output.rfind('/');
      output.erase(slash == std::string::npos ? 0 : slash);
    } else if (input == "." || input == "..") {
      input.clear();
    } else {
      std::size_t start = input[0] == '/' ? 1 : 0;
      std::size_t next = input.find('/', start);
      if (next == std::string::npos) next = input.size();
      output += input.substr(0, next);
      input.erase(0, next);
    }
  }
  return output;
}

struct IriParts {
  std::optional<std::string> scheme, authority, query, fragment;
  std::string path;
};

inline IriParts split_iri(std::string_view s) {
  IriParts p;
  if (has_scheme(s)) {
    auto colon = s.find(':');
    p.scheme = std::string(s.substr(0, colon));
    s.remove_prefix(colon + 1);
  }
  if (s.rfind("//", 0) == 0) {
    s.remove_prefix(2);
    auto end = s.find_first_of("/?#");
    if (end == std::string_view::npos) end = s.size();
    p.authority = std::string(s.substr(0, end));
    s.remove_prefix(end);
  }
  auto hash = s.find('#');
  if (hash != std::string_view::npos) {
    p.fragment = std::string(s.substr(hash + 1));
    s = s.substr(0, hash);
  }
  auto q = s.find('?');
  if (q != std::string_view::npos) {
    p.query = std::string(s.substr(q + 1));
    s = s.substr(0, q);
  }
  p.path = std::string(s);
  return p;
}

inline std::string resolve_iri(std::string_view base, std::string_view ref) {
  if (has_scheme(ref)) return std::string(ref);
  IriParts b = split_iri(base);
  IriParts r = split_iri(ref);
  IriParts t;
  t.scheme = b.scheme;
  if (r.authority) {
    t.authority = r.authority;
    t.path = remove_dot_segments(r.path);
    t.query = r.query;
  } else {
    t.authority = b.authority;
    if (r.path.empty()) {
      t.path = b.path;
      t.query = r.query ? r.query : b.query;
    } else {
      if (r.path[0] == '/') {
        t.path = remove_dot_segments(r.path);
      } else {
        std::string merged;
        if (b.authority && b.path.empty()) {
          merged = "/" + r.path;
        } else {
          auto slash = b.path.rfind('/');
          merged = (slash == std::string::npos ? std::string() : b.path.substr(0, slash + 1)) + r.path;
        }
        t.path = remove_dot_segments(merged);
      }
      t.query = r.query;
    }
  }
  t.fragment = r.fragment;
  std::string out = *t.scheme + ":";
  if (t.authority) out += "//" + *t.authority;
  out += t.path;
  if (t.query) out += "?" + *t.query;
  if (t.fragment) out += "#" + *t.fragment;
  return out;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

enum class Tok {
  Eof, IriRef, PName, BlankLabel, String, LangTag, DoubleCaret, Integer, Decimal, Double,
  True, False, A, AtPrefix, AtBase, SparqlPrefix, SparqlBase, Graph, Dot, Semicolon, Comma,
  LBracket, RBracket, LBrace, RBrace, LParen, RParen, QuoteOpen, QuoteClose, AnnotOpen,
  AnnotClose
};

inline const char* describe(Tok t) noexcept {
  switch (t) {
    case Tok::Eof: return "end of input";
    case Tok::IriRef: return "IRI";
    case Tok::PName: return "prefixed name";
    case Tok::BlankLabel: return "blank node";
    case Tok::String: return "string literal";
    case Tok::LangTag: return "language tag";
    case Tok::DoubleCaret: return "'^^'";
    case Tok::Integer: case Tok::Decimal: case Tok::Double: return "numeric literal";
    case Tok::True: case Tok::False: return "boolean literal";
    case Tok::A: return "'a'";
    case Tok::AtPrefix: return "'@prefix'";
    case Tok::AtBase: return "'@base'";
    case Tok::SparqlPrefix: return "'PREFIX'";
    case Tok::SparqlBase: return "'BASE'";
    case Tok::Graph: return "'GRAPH'";
    case Tok::Dot: return "'.'";
    case Tok::Semicolon: return "';'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::QuoteOpen: return "'<<'";
    case Tok::QuoteClose: return "'>>'";
    case Tok::AnnotOpen: return "'{|'";
    case Tok::AnnotClose: return "'|}'";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::Eof;
  std::string text;   // decoded IRI / string / label / lexical form / prefix
  std::string local;  // local part of a prefixed name
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek() {
    if (!lookahead_) lookahead_ = lex();
    return *lookahead_;
  }

  Token next() {
    Token t = lookahead_ ? std::move(*lookahead_) : lex();
    lookahead_.reset();
    return t;
  }

  [[noreturn]] static void fail(ParseError::Kind kind, std::size_t line, std::size_t column,
                                const std::string& message) {
    throw ParseError(kind, line, column, message);
  }

 private:
  bool at_end() const noexcept { return pos_ >= src_.size(); }
  char cur() const noexcept { return at_end() ? '\0' : src_[pos_]; }
  char ahead(std::size_t n) const noexcept {
    return pos_ + n < src_.size() ? src_[pos_ + n] : '\0';
  }

  void advance() {
    unsigned char c = static_cast<unsigned char>(src_[pos_++]);
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  [[noreturn]] void fail_here(ParseError::Kind kind, const std::string& message) const {
    fail(kind, line_, column_, message);
  }

  void skip_space() {
    while (!at_end()) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && cur() != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool is_name_char(char c) noexcept {
    return is_ascii_alnum(c) || c == '_' || c == '-' || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool is_name_start(char c) noexcept {
    return is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool is_hex(char c) noexcept {
    return is_ascii_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  }

  std::uint32_t read_hex(std::size_t digits) {
    std::uint32_t value = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = cur();
      if (!is_hex(c)) fail_here(ParseError::Kind::Lexical, "invalid hex digit in escape");
      value = value * 16 + static_cast<std::uint32_t>(
                               is_ascii_digit(c) ? c - '0' : (c | 0x20) - 'a' + 10);
      advance();
    }
    return value;
  }

  // After the backslash of a \u / \U escape.
  void read_uchar(std::string& out) {
    std::size_t line = line_, col = column_ - 1;
    char kind = cur();
    advance();
    std::uint32_t cp = read_hex(kind == 'u' ? 4 : 8);
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
      fail(ParseError::Kind::Lexical, line, col, "escape denotes an invalid code point");
    append_utf8(out, cp);
  }

  Token make(Tok kind, std::size_t line, std::size_t col, std::string text = {}) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.column = col;
    return t;
  }

  Token lex() {
    Token t = lex_raw();
    last_ = t.kind;
    return t;
  }

  Token lex_raw() {
    skip_space();
    const std::size_t line = line_, col = column_;
    if (at_end()) return make(Tok::Eof, line, col);
    const char c = cur();
    switch (c) {
      case '<':
        if (ahead(1) == '<') {
          advance();
          advance();
          return make(Tok::QuoteOpen, line, col);
        }
        return lex_iri(line, col);
      case '>':
        if (ahead(1) == '>') {
          advance();
          advance();
          return make(Tok::QuoteClose, line, col);
        }
        fail_here(ParseError::Kind::Lexical, "unexpected '>'");
      case '{':
        advance();
        if (cur() == '|') {
          advance();
          return make(Tok::AnnotOpen, line, col);
        }
        return make(Tok::LBrace, line, col);
      case '|':
        if (ahead(1) == '}') {
          advance();
          advance();
          return make(Tok::AnnotClose, line, col);
        }
        fail_here(ParseError::Kind::Lexical, "unexpected '|'");
      case '}': advance(); return make(Tok::RBrace, line, col);
      case '[': advance(); return make(Tok::LBracket, line, col);
      case ']': advance(); return make(Tok::RBracket, line, col);
      case '(': advance(); return make(Tok::LParen, line, col);
      case ')': advance(); return make(Tok::RParen, line, col);
      case ',': advance(); return make(Tok::Comma, line, col);
      case ';': advance(); return make(Tok::Semicolon, line, col);
      case '.':
        if (is_ascii_digit(ahead(1))) return lex_number(line, col);
        advance();
        return make(Tok::Dot, line, col);
      case '"':
      case '\'': return lex_string(line, col);
      case '@': return lex_at(line, col);
      case '^':
        if (ahead(1) == '^') {
          advance();
          advance();
          return make(Tok::DoubleCaret, line, col);
        }
        fail_here(ParseError::Kind::Lexical, "expected '^^'");
      case '_':
        if (ahead(1) == ':') return lex_blank(line, col);
        fail_here(ParseError::Kind::Lexical, "unexpected '_'");
      default: break;
    }
    if (is_ascii_digit(c) || c == '+' || c == '-') return lex_number(line, col);
    if (c == ':' || is_name_start(c)) return lex_name(line, col);
    fail_here(ParseError::Kind::Lexical, std::string("unexpected character '") + c + "'");
  }

  Token lex_iri(std::size_t line, std::size_t col) {
    advance();  // '<'
    std::string value;
    while (true) {
      if (at_end()) fail(ParseError::Kind::UnterminatedConstruct, line, col, "unterminated IRI");
      char c = cur();
      unsigned char u = static_cast<unsigned char>(c);
      if (c == '>') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (cur() != 'u' && cur() != 'U')
          fail_here(ParseError::Kind::Lexical, "only \\u and \\U escapes are allowed in IRIs");
        read_uchar(value);
        continue;
      }
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`')
        fail_here(ParseError::Kind::Lexical, "invalid character in IRI");
      value += c;
      advance();
    }
    return make(Tok::IriRef, line, col, std::move(value));
  }

  Token lex_string(std::size_t line, std::size_t col) {
    const char quote = cur();
    const bool is_long = ahead(1) == quote && ahead(2) == quote;
    for (int i = 0; i < (is_long ? 3 : 1); ++i) advance();
    std::string value;
    while (true) {
      if (at_end()) fail(ParseError::Kind::UnterminatedConstruct, line, col, "unterminated string");
      char c = cur();
      if (is_long) {
        if (c == quote && ahead(1) == quote && ahead(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\n' || c == '\r')
          fail(ParseError::Kind::UnterminatedConstruct, line, col, "unterminated string");
      }
      if (c == '\\') {
        advance();
        char e = cur();
        switch (e) {
          case 't': value += '\t'; advance(); break;
          case 'b': value += '\b'; advance(); break;
          case 'n': value += '\n'; advance(); break;
          case 'r': value += '\r'; advance(); break;
          case 'f': value += '\f'; advance(); break;
          case '"': value += '"'; advance(); break;
          case '\'': value += '\''; advance(); break;
          case '\\': value += '\\'; advance(); break;
          case 'u':
          case 'U': read_uchar(value); break;
          default: fail_here(ParseError::Kind::Lexical, "invalid string escape");
        }
        continue;
      }
      value += c;
      advance();
    }
    return make(Tok::String, line, col, std::move(value));
  }

  Token lex_at(std::size_t line, std::size_t col) {
    advance();  // '@'
    std::string word;
    while (is_ascii_alpha(cur())) {
      word += cur();
      advance();
    }
    if (word.empty()) fail(ParseError::Kind::Lexical, line, col, "expected language tag or directive");
    if (last_ != Tok::String) {
      if (word == "prefix") return make(Tok::AtPrefix, line, col);
      if (word == "base") return make(Tok::AtBase, line, col);
      fail(ParseError::Kind::Lexical, line, col, "unknown directive '@" + word + "'");
    }
    while (cur() == '-' && is_ascii_alnum(ahead(1))) {
      word += '-';
      advance();
      while (is_ascii_alnum(cur())) {
        word += cur();
        advance();
      }
    }
    return make(Tok::LangTag, line, col, std::move(word));
  }

  Token lex_blank(std::size_t line, std::size_t col) {
    advance();
    advance();  // "_:"
    if (!(is_name_char(cur()) && cur() != '-'))
      fail_here(ParseError::Kind::Lexical, "invalid blank node label");
    std::size_t start = pos_;
    std::size_t good_end = pos_;
    std::size_t good_line = line_, good_col = column_;
    while (!at_end() && (is_name_char(cur()) || cur() == '.')) {
      bool dot = cur() == '.';
      advance();
      if (!dot) {
        good_end = pos_;
        good_line = line_;
        good_col = column_;
      }
    }
    pos_ = good_end;
    line_ = good_line;
    column_ = good_col;
    return make(Tok::BlankLabel, line, col, std::string(src_.substr(start, good_end - start)));
  }

  Token lex_number(std::size_t line, std::size_t col) {
    std::string text;
    if (cur() == '+' || cur() == '-') {
      text += cur();
      advance();
    }
    std::size_t int_digits = 0, frac_digits = 0;
    while (is_ascii_digit(cur())) {
      text += cur();
      advance();
      ++int_digits;
    }
    bool has_dot = false;
    auto exponent_follows = [this](std::size_t off) {
      char e = ahead(off);
      if (e != 'e' && e != 'E') return false;
      char n = ahead(off + 1);
      if (n == '+' || n == '-') n = ahead(off + 2);
      return is_ascii_digit(n);
    };
    if (cur() == '.' && (is_ascii_digit(ahead(1)) || (int_digits > 0 && exponent_follows(1)))) {
      has_dot = true;
      text += '.';
      advance();
      while (is_ascii_digit(cur())) {
        text += cur();
        advance();
        ++frac_digits;
      }
    }
    if (int_digits == 0 && frac_digits == 0)
      fail(ParseError::Kind::Lexical, line, col, "malformed number");
    if (exponent_follows(0)) {
      text += cur();
      advance();
      if (cur() == '+' || cur() == '-') {
        text += cur();
        advance();
      }
      while (is_ascii_digit(cur())) {
        text += cur();
        advance();
      }
      return make(Tok::Double, line, col, std::move(text));
    }
    return make(has_dot ? Tok::Decimal : Tok::Integer, line, col, std::move(text));
  }

  static bool is_local_escape(char c) noexcept {
    return std::string_view("_~.-!$&'()*+,;=/?#@%").find(c) != std::string_view::npos;
  }

  Token lex_name(std::size_t line, std::size_t col) {
    // Prefix part (or bare word); may not end with '.'.
    std::size_t start = pos_;
    std::size_t good_end = pos_;
    std::size_t good_col = column_;
    while (!at_end() && (is_name_char(cur()) || cur() == '.')) {
      bool dot = cur() == '.';
      advance();
      if (!dot) {
        good_end = pos_;
        good_col = column_;
      }
    }
    pos_ = good_end;
    column_ = good_col;
    std::string word(src_.substr(start, good_end - start));

    if (cur() != ':') {
      if (word == "a") return make(Tok::A, line, col);
      if (word == "true") return make(Tok::True, line, col, "true");
      if (word == "false") return make(Tok::False, line, col, "false");
      std::string upper;
      for (char ch : word) upper += static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 32 : ch);
      if (upper == "PREFIX") return make(Tok::SparqlPrefix, line, col);
      if (upper == "BASE") return make(Tok::SparqlBase, line, col);
      if (upper == "GRAPH") return make(Tok::Graph, line, col);
      fail(ParseError::Kind::Lexical, line, col, "unexpected bare word '" + word + "'");
    }
    if (!word.empty() && !is_ascii_alpha(word[0]) && static_cast<unsigned char>(word[0]) < 0x80)
      fail(ParseError::Kind::Lexical, line, col, "invalid prefix '" + word + "'");
    advance();  // ':'

    std::string local;
    std::size_t good_local = 0;
    std::size_t good_pos = pos_, good_line = line_;
    good_col = column_;
    bool first = true;
    while (!at_end()) {
      char c = cur();
      bool raw_dot = false;
      if (c == '\\') {
        if (!is_local_escape(ahead(1))) break;
        advance();
        local += cur();
        advance();
      } else if (c == '%') {
        if (!is_hex(ahead(1)) || !is_hex(ahead(2)))
          fail_here(ParseError::Kind::Lexical, "invalid percent escape in local name");
        for (int i = 0; i < 3; ++i) {
          local += cur();
          advance();
        }
      } else if (is_name_char(c) || c == ':') {
        local += c;
        advance();
      } else if (c == '.' && !first) {
        local += c;
        advance();
        raw_dot = true;
      } else {
        break;
      }
      first = false;
      if (!raw_dot) {
        good_local = local.size();
        good_pos = pos_;
        good_line = line_;
        good_col = column_;
      }
    }
    local.resize(good_local);
    pos_ = good_pos;
    line_ = good_line;
    column_ = good_col;
    Token t = make(Tok::PName, line, col, std::move(word));
    t.local = std::move(local);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::optional<Token> lookahead_;
  Tok last_ = Tok::Eof;
};

// Shared state and term construction for both grammars.
class ParserBase {
 protected:
  ParserBase(std::string_view text, const ParseOptions& opts) : lex_(text), opts_(opts) {
    if (opts_.max_quote_depth < 1) throw std::invalid_argument("max_quote_depth must be >= 1");
    if (opts_.base) base_ = opts_.base->str();
  }

  [[noreturn]] static void fail(ParseError::Kind kind, const Token& at, const std::string& msg) {
    throw ParseError(kind, at.line, at.column, msg);
  }

  [[noreturn]] void unexpected(const Token& t, const char* wanted) {
    if (t.kind == Tok::Eof)
      fail(ParseError::Kind::UnterminatedConstruct, t, std::string("expected ") + wanted +
                                                           " before end of input");
    fail(ParseError::Kind::Lexical, t,
         std::string("expected ") + wanted + ", found " + describe(t.kind));
  }

  Token expect(Tok kind, const Token* opener = nullptr) {
    const Token& t = lex_.peek();
    if (t.kind == kind) return lex_.next();
    if (t.kind == Tok::Eof && opener)
      fail(ParseError::Kind::UnterminatedConstruct, *opener,
           std::string("unterminated ") + describe(opener->kind));
    unexpected(t, describe(kind));
  }

  bool accept(Tok kind) {
    if (lex_.peek().kind != kind) return false;
    lex_.next();
    return true;
  }

  Iri make_iri(const Token& t, const std::string& value) {
    std::string resolved;
    if (has_scheme(value)) {
      resolved = value;
    } else {
      if (!base_) fail(ParseError::Kind::Lexical, t, "relative IRI <" + value + "> without a base");
      resolved = resolve_iri(*base_, value);
    }
    if (!is_valid_iri(resolved)) fail(ParseError::Kind::Lexical, t, "invalid IRI <" + resolved + ">");
    return Iri(std::move(resolved));
  }

  Iri iri_from_token(const Token& t) {
    if (t.kind == Tok::IriRef) return make_iri(t, t.text);
    const std::string* ns = prefixes_.find(t.text);
    if (!ns) fail(ParseError::Kind::UnknownPrefix, t, "unknown prefix '" + t.text + ":'");
    std::string value = *ns + t.local;
    if (!is_valid_iri(value)) fail(ParseError::Kind::Lexical, t, "invalid IRI <" + value + ">");
    return Iri(std::move(value));
  }

  BlankNode blank_for(const std::string& label) {
    auto [it, inserted] = blank_labels_.emplace(label, std::string());
    if (inserted) it->second = fresh_label();
    return BlankNode(it->second);
  }

  BlankNode fresh_blank() { return BlankNode(fresh_label()); }

  std::string fresh_label() { return "b" + std::to_string(blank_counter_++); }

  // Literal after its string token has been consumed.
  Literal finish_string_literal(Token str) {
    if (lex_.peek().kind == Tok::LangTag) {
      Token tag = lex_.next();
      if (!is_valid_language_tag(tag.text))
        fail(ParseError::Kind::Lexical, tag, "invalid language tag '" + tag.text + "'");
      return Literal::with_language(std::move(str.text), std::move(tag.text));
    }
    if (accept(Tok::DoubleCaret)) {
      Token dt = lex_.next();
      if (dt.kind != Tok::IriRef && dt.kind != Tok::PName) unexpected(dt, "datatype IRI");
      Iri datatype = iri_from_token(dt);
      if (datatype.str() == vocab::rdf::lang_string)
        fail(ParseError::Kind::Lexical, dt, "rdf:langString requires a language tag");
      return Literal(std::move(str.text), std::move(datatype));
    }
    return Literal(std::move(str.text));
  }

  void enter_quote(const Token& opener) {
    if (++quote_depth_ > opts_.max_quote_depth)
      fail(ParseError::Kind::DepthExceeded, opener,
           "quoted triple nesting exceeds " + std::to_string(opts_.max_quote_depth));
  }
  void leave_quote() { --quote_depth_; }

  static bool is_literal_token(Tok k) noexcept {
    return k == Tok::String || k == Tok::Integer || k == Tok::Decimal || k == Tok::Double ||
           k == Tok::True || k == Tok::False;
  }

  Lexer lex_;
  ParseOptions opts_;
  Dataset ds_;
  PrefixMap prefixes_;
  std::optional<std::string> base_;
  std::unordered_map<std::string, std::string> blank_labels_;
  std::size_t blank_counter_ = 0;
  std::size_t quote_depth_ = 0;
};

class TrigParser : public ParserBase {
 public:
  TrigParser(std::string_view text, const ParseOptions& opts) : ParserBase(text, opts) {
    if (opts_.base) prefixes_.set_base(*opts_.base);
  }

  explicit TrigParser(std::string_view text, const PrefixMap& prefixes, const ParseOptions& opts)
      : TrigParser(text, opts) {
    prefixes_ = prefixes;
    if (!base_ && prefixes.base()) base_ = prefixes.base()->str();
  }

  ParseResult parse_document() {
    while (lex_.peek().kind != Tok::Eof) statement();
    return {std::move(ds_), std::move(prefixes_)};
  }

  Term parse_single_term() {
    Term t = object();
    if (lex_.peek().kind != Tok::Eof) unexpected(lex_.peek(), "end of term");
    return t;
  }

 private:
  static constexpr std::size_t kMaxBracketNesting = 1024;

  void statement() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::AtPrefix: {
        lex_.next();
        prefix_directive();
        expect(Tok::Dot);
        return;
      }
      case Tok::AtBase: {
        lex_.next();
        base_directive();
        expect(Tok::Dot);
        return;
      }
      case Tok::SparqlPrefix: lex_.next(); prefix_directive(); return;
      case Tok::SparqlBase: lex_.next(); base_directive(); return;
      case Tok::Graph: {
        lex_.next();
        GraphName g = graph_label();
        wrapped_graph(g);
        return;
      }
      case Tok::LBrace: wrapped_graph(GraphName{}); return;
      default: break;
    }
    // Either a graph block introduced by its label or top-level triples.
    if (t.kind == Tok::IriRef || t.kind == Tok::PName || t.kind == Tok::BlankLabel) {
      Token label = lex_.next();
      Term subject = t.kind == Tok::BlankLabel ? Term(blank_for(label.text))
                                               : Term(iri_from_token(label));
      if (lex_.peek().kind == Tok::LBrace) {
        wrapped_graph(GraphName::from_term(subject));
        return;
      }
      predicate_object_list(subject);
      expect(Tok::Dot);
      return;
    }
    if (t.kind == Tok::LBracket) {
      Token open = lex_.next();
      if (lex_.peek().kind == Tok::RBracket) {
        lex_.next();
        Term subject = fresh_blank();
        if (lex_.peek().kind == Tok::LBrace) {
          wrapped_graph(GraphName::from_term(subject));
          return;
        }
        predicate_object_list(subject);
        expect(Tok::Dot);
        return;
      }
      Term subject = property_list_body(open);
      if (starts_verb(lex_.peek().kind)) predicate_object_list(subject);
      expect(Tok::Dot);
      return;
    }
    if (t.kind == Tok::QuoteOpen) {
      Term subject = quoted_triple();
      if (lex_.peek().kind == Tok::LBrace)
        fail(ParseError::Kind::BadPosition, t, "a quoted triple cannot name a graph");
      predicate_object_list(subject);
      expect(Tok::Dot);
      return;
    }
    subject_error(t);
  }

  [[noreturn]] void subject_error(const Token& t) {
    if (is_literal_token(t.kind))
      fail(ParseError::Kind::BadPosition, t, "literal in subject position");
    if (t.kind == Tok::LParen)
      fail(ParseError::Kind::Lexical, t, "RDF collections '( ... )' are not supported");
    unexpected(t, "subject");
  }

  void prefix_directive() {
    Token name = lex_.next();
    if (name.kind != Tok::PName || !name.local.empty()) unexpected(name, "prefix name");
    if (!is_valid_prefix_label(name.text))
      fail(ParseError::Kind::Lexical, name, "invalid prefix label '" + name.text + "'");
    Token iri = expect(Tok::IriRef);
    prefixes_.add(name.text, make_iri(iri, iri.text).str());
  }

  void base_directive() {
    Token iri = expect(Tok::IriRef);
    Iri resolved = make_iri(iri, iri.text);
    base_ = resolved.str();
    prefixes_.set_base(std::move(resolved));
  }

  GraphName graph_label() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: return GraphName(iri_from_token(t));
      case Tok::BlankLabel: return GraphName(blank_for(t.text));
      case Tok::LBracket:
        expect(Tok::RBracket, &t);
        return GraphName(fresh_blank());
      case Tok::QuoteOpen: fail(ParseError::Kind::BadPosition, t, "a quoted triple cannot name a graph");
      default:
        if (is_literal_token(t.kind))
          fail(ParseError::Kind::BadPosition, t, "a literal cannot name a graph");
        unexpected(t, "graph name");
    }
  }

  void wrapped_graph(const GraphName& graph) {
    Token open = expect(Tok::LBrace);
    GraphName saved = graph_;
    graph_ = graph;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::RBrace) break;
      if (t.kind == Tok::Eof)
        fail(ParseError::Kind::UnterminatedConstruct, open, "unterminated graph block");
      block_triples();
      if (!accept(Tok::Dot)) break;
    }
    expect(Tok::RBrace, &open);
    graph_ = saved;
  }

  void block_triples() {
    const Token t = lex_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName:
      case Tok::BlankLabel:
      case Tok::QuoteOpen: predicate_object_list(subject()); return;
      case Tok::LBracket: {
        Token open = lex_.next();
        if (accept(Tok::RBracket)) {
          predicate_object_list(fresh_blank());
          return;
        }
        Term s = property_list_body(open);
        if (starts_verb(lex_.peek().kind)) predicate_object_list(s);
        return;
      }
      case Tok::LBrace:
      case Tok::Graph: fail(ParseError::Kind::Lexical, t, "graph blocks cannot be nested");
      default: subject_error(t);
    }
  }

  Term subject() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: lex_.next(); return iri_from_token(t);
      case Tok::BlankLabel: lex_.next(); return blank_for(t.text);
      case Tok::QuoteOpen: return quoted_triple();
      default: subject_error(t);
    }
  }

  static bool starts_verb(Tok k) noexcept {
    return k == Tok::IriRef || k == Tok::PName || k == Tok::A || k == Tok::QuoteOpen ||
           k == Tok::BlankLabel || k == Tok::LBracket || k == Tok::String || k == Tok::Integer ||
           k == Tok::Decimal || k == Tok::Double || k == Tok::True || k == Tok::False;
  }

  Iri verb() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: return iri_from_token(t);
      case Tok::A: return Iri(vocab::rdf::type);
      case Tok::QuoteOpen:
        fail(ParseError::Kind::BadPosition, t, "quoted triple in predicate position");
      case Tok::BlankLabel:
      case Tok::LBracket:
        fail(ParseError::Kind::BadPosition, t, "blank node in predicate position");
      default:
        if (is_literal_token(t.kind))
          fail(ParseError::Kind::BadPosition, t, "literal in predicate position");
        unexpected(t, "predicate");
    }
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      Iri predicate = verb();
      object_list(subject, predicate);
      if (!accept(Tok::Semicolon)) return;
      while (accept(Tok::Semicolon)) {
      }
      if (!starts_verb(lex_.peek().kind)) return;
    }
  }

  void object_list(const Term& subject, const Iri& predicate) {
    do {
      Term o = object();
      Triple triple(subject, predicate, std::move(o));
      ds_.insert(Quad(triple, graph_));
      if (lex_.peek().kind == Tok::AnnotOpen) annotation(triple);
    } while (accept(Tok::Comma));
  }

  void annotation(const Triple& triple) {
    Token open = lex_.next();
    if (!opts_.allow_annotation_syntax)
      fail(ParseError::Kind::Lexical, open, "annotation syntax is disabled");
    enter_quote(open);
    predicate_object_list(quote(triple));
    expect(Tok::AnnotClose, &open);
    leave_quote();
  }

  Term object() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: lex_.next(); return iri_from_token(t);
      case Tok::BlankLabel: lex_.next(); return blank_for(t.text);
      case Tok::LBracket: {
        Token open = lex_.next();
        if (accept(Tok::RBracket)) return fresh_blank();
        return property_list_body(open);
      }
      case Tok::QuoteOpen: return quoted_triple();
      case Tok::LParen:
        fail(ParseError::Kind::Lexical, t, "RDF collections '( ... )' are not supported");
      default: break;
    }
    if (is_literal_token(t.kind)) return literal();
    unexpected(t, "object");
  }

  Literal literal() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::String: return finish_string_literal(std::move(t));
      case Tok::Integer: return Literal(std::move(t.text), Iri(vocab::xsd::integer));
      case Tok::Decimal: return Literal(std::move(t.text), Iri(vocab::xsd::decimal));
      case Tok::Double: return Literal(std::move(t.text), Iri(vocab::xsd::double_));
      case Tok::True:
      case Tok::False: return Literal(std::move(t.text), Iri(vocab::xsd::boolean));
      default: unexpected(t, "literal");
    }
  }

  // After '[' when the list is non-empty.
  Term property_list_body(const Token& open) {
    if (++bracket_depth_ > kMaxBracketNesting)
      fail(ParseError::Kind::DepthExceeded, open, "blank node property lists nested too deeply");
    Term node = fresh_blank();
    predicate_object_list(node);
    expect(Tok::RBracket, &open);
    --bracket_depth_;
    return node;
  }

  Term quoted_triple() {
    Token open = lex_.next();
    enter_quote(open);
    Term s = quoted_component(true);
    Iri p = verb();
    Term o = quoted_component(false);
    expect(Tok::QuoteClose, &open);
    leave_quote();
    return quote(Triple(std::move(s), std::move(p), std::move(o)));
  }

  Term quoted_component(bool subject_position) {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName: lex_.next(); return iri_from_token(t);
      case Tok::BlankLabel: lex_.next(); return blank_for(t.text);
      case Tok::QuoteOpen: return quoted_triple();
      case Tok::LBracket: {
        Token open = lex_.next();
        if (accept(Tok::RBracket)) return fresh_blank();
        fail(ParseError::Kind::BadPosition, open,
             "blank node property list inside a quoted triple");
      }
      default: break;
    }
    if (is_literal_token(t.kind)) {
      if (subject_position)
        fail(ParseError::Kind::BadPosition, t, "literal in quoted-triple subject position");
      return literal();
    }
    if (t.kind == Tok::Eof) unexpected(t, "'>>'");
    unexpected(t, subject_position ? "quoted-triple subject" : "quoted-triple object");
  }

  GraphName graph_;
  std::size_t bracket_depth_ = 0;
};

// One statement per line: subject predicate object [graph] '.'
class NQuadsParser : public ParserBase {
 public:
  NQuadsParser(std::string_view text, const ParseOptions& opts) : ParserBase(text, opts) {
    base_.reset();
  }

  Dataset parse_document() {
    while (lex_.peek().kind != Tok::Eof) statement();
    return std::move(ds_);
  }

 private:
  std::size_t line_ = 0;

  Token take() {
    Token t = lex_.next();
    if (t.kind != Tok::Eof && t.line != line_)
      throw ParseError(ParseError::Kind::UnterminatedConstruct, line_, 1,
                       "statement must end with '.' on its own line");
    return t;
  }

  [[noreturn]] void unexpected_here(const Token& t, const char* wanted) {
    if (t.kind == Tok::Eof || t.line != line_)
      throw ParseError(ParseError::Kind::UnterminatedConstruct, line_, 1,
                       std::string("statement ends before ") + wanted);
    unexpected(t, wanted);
  }

  void statement() {
    line_ = lex_.peek().line;
    Term s = term(true);
    Token pt = take();
    if (pt.kind == Tok::QuoteOpen)
      fail(ParseError::Kind::BadPosition, pt, "quoted triple in predicate position");
    if (is_literal_token(pt.kind))
      fail(ParseError::Kind::BadPosition, pt, "literal in predicate position");
    if (pt.kind == Tok::BlankLabel)
      fail(ParseError::Kind::BadPosition, pt, "blank node in predicate position");
    if (pt.kind != Tok::IriRef) unexpected_here(pt, "predicate IRI");
    Iri p = make_iri(pt, pt.text);
    Term o = term(false);
    GraphName g;
    const Token& next = lex_.peek();
    if (next.kind != Tok::Dot && next.line == line_) {
      Token gt = take();
      if (gt.kind == Tok::IriRef) {
        g = GraphName(make_iri(gt, gt.text));
      } else if (gt.kind == Tok::BlankLabel) {
        g = GraphName(blank_for(gt.text));
      } else if (gt.kind == Tok::QuoteOpen || is_literal_token(gt.kind)) {
        fail(ParseError::Kind::BadPosition, gt, "graph label must be an IRI or blank node");
      } else {
        unexpected_here(gt, "graph label or '.'");
      }
    }
    Token dot = take();
    if (dot.kind != Tok::Dot) unexpected_here(dot, "'.'");
    ds_.insert(Quad(Triple(std::move(s), std::move(p), std::move(o)), std::move(g)));
  }

  Term term(bool subject_position) {
    Token t = take();
    switch (t.kind) {
      case Tok::IriRef: return make_iri(t, t.text);
      case Tok::BlankLabel: return blank_for(t.text);
      case Tok::QuoteOpen: {
        enter_quote(t);
        Term s = term(true);
        Token pt = take();
        if (pt.kind == Tok::QuoteOpen || is_literal_token(pt.kind) || pt.kind == Tok::BlankLabel)
          fail(ParseError::Kind::BadPosition, pt, "predicate must be an IRI");
        if (pt.kind != Tok::IriRef) unexpected_here(pt, "predicate IRI");
        Iri p = make_iri(pt, pt.text);
        Term o = term(false);
        Token close = take();
        if (close.kind != Tok::QuoteClose) unexpected_here(close, "'>>'");
        leave_quote();
        return quote(Triple(std::move(s), std::move(p), std::move(o)));
      }
      case Tok::String: {
        if (subject_position) fail(ParseError::Kind::BadPosition, t, "literal in subject position");
        const Token& n = lex_.peek();
        if ((n.kind == Tok::LangTag || n.kind == Tok::DoubleCaret) && n.line == line_) {
          if (n.kind == Tok::DoubleCaret) {
            take();
            Token dt = take();
            if (dt.kind != Tok::IriRef) unexpected_here(dt, "datatype IRI");
            Iri datatype = make_iri(dt, dt.text);
            if (datatype.str() == vocab::rdf::lang_string)
              fail(ParseError::Kind::Lexical, dt, "rdf:langString requires a language tag");
            return Literal(std::move(t.text), std::move(datatype));
          }
          Token tag = take();
          if (!is_valid_language_tag(tag.text))
            fail(ParseError::Kind::Lexical, tag, "invalid language tag '" + tag.text + "'");
          return Literal::with_language(std::move(t.text), std::move(tag.text));
        }
        return Literal(std::move(t.text));
      }
      default:
        if (is_literal_token(t.kind) && subject_position)
          fail(ParseError::Kind::BadPosition, t, "literal in subject position");
        if (t.kind == Tok::PName)
          fail(ParseError::Kind::Lexical, t, "prefixed names are not allowed in N-Quads");
        unexpected_here(t, subject_position ? "subject" : "object");
    }
  }
};

}  // namespace detail

inline ParseResult parse(std::string_view text, const ParseOptions& opts = {}) {
  return detail::TrigParser(text, opts).parse_document();
}

inline Dataset parse_nquads_star(std::string_view text, const ParseOptions& opts = {}) {
  return detail::NQuadsParser(text, opts).parse_document();
}

// A single TriG-star term (IRI, prefixed name, literal, blank node or quoted
// triple) resolved against `prefixes`.
inline Term parse_term(std::string_view text, const PrefixMap& prefixes,
                       const ParseOptions& opts = {}) {
  return detail::TrigParser(text, prefixes, opts).parse_single_term();
}

}  // namespace metastar
