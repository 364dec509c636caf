#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metastar/term.hpp"

namespace metastar {

class UnknownPrefix : public std::invalid_argument {
 public:
  explicit UnknownPrefix(const std::string& prefix)
      : std::invalid_argument("unknown prefix '" + prefix + ":'"), prefix_(prefix) {}
  const std::string& prefix() const noexcept { return prefix_; }

 private:
  std::string prefix_;
};

namespace detail {

// Conservative PN_PREFIX: empty, or [A-Za-z] ([A-Za-z0-9_.-]* [A-Za-z0-9_-])?
inline bool is_valid_prefix_label(std::string_view s) noexcept {
  if (s.empty()) return true;
  if (!is_ascii_alpha(s[0]) || s.back() == '.') return false;
  for (char c : s) {
    if (!(is_ascii_alnum(c) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

// Local names the serializer is willing to emit unescaped.
inline bool is_simple_local_name(std::string_view s) noexcept {
  if (s.empty()) return true;
  if (!(is_ascii_alnum(s[0]) || s[0] == '_')) return false;
  if (s.back() == '.') return false;
  for (char c : s) {
    if (!(is_ascii_alnum(c) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

}  // namespace detail

// Ordered prefix -> namespace map with an optional base IRI. Insertion order
// is kept for output; redefining a prefix replaces its namespace in place.
class PrefixMap {
 public:
  using Entry = std::pair<std::string, std::string>;

  PrefixMap() = default;
  PrefixMap(std::initializer_list<Entry> entries) {
    for (const auto& [label, ns] : entries) add(label, ns);
  }

  void add(std::string label, std::string ns) {
    if (!detail::is_valid_prefix_label(label))
      throw InvalidTerm("invalid prefix label: '" + label + "'");
    if (!detail::is_valid_iri(ns)) throw InvalidTerm("invalid namespace IRI: <" + ns + ">");
    for (auto& entry : entries_) {
      if (entry.first == label) {
        entry.second = std::move(ns);
        return;
      }
    }
    entries_.emplace_back(std::move(label), std::move(ns));
  }

  const std::string* find(std::string_view label) const noexcept {
    for (const auto& entry : entries_) {
      if (entry.first == label) return &entry.second;
    }
    return nullptr;
  }

  bool contains(std::string_view label) const noexcept { return find(label) != nullptr; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  const std::optional<Iri>& base() const noexcept { return base_; }
  void set_base(Iri base) { base_ = std::move(base); }

  Iri expand(std::string_view prefix, std::string_view local) const {
    const std::string* ns = find(prefix);
    if (!ns) throw UnknownPrefix(std::string(prefix));
    return Iri(*ns + std::string(local));
  }

  // `name` is "prefix:local"; the first ':' separates the two parts.
  Iri expand(std::string_view name) const {
    auto colon = name.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument("not a prefixed name: '" + std::string(name) + "'");
    return expand(name.substr(0, colon), name.substr(colon + 1));
  }

  // Longest-namespace match whose remainder is a plain local name.
  std::optional<std::pair<std::string, std::string>> compact(const Iri& iri) const {
    const std::string& value = iri.str();
    const Entry* best = nullptr;
    for (const auto& entry : entries_) {
      if (entry.second.size() > value.size()) continue;
      if (value.compare(0, entry.second.size(), entry.second) != 0) continue;
      if (!detail::is_simple_local_name(std::string_view(value).substr(entry.second.size())))
        continue;
      if (!best || entry.second.size() > best->second.size()) best = &entry;
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->first, value.substr(best->second.size()));
  }

 private:
  std::vector<Entry> entries_;
  std::optional<Iri> base_;
};

inline Iri expand(const PrefixMap& prefixes, std::string_view name) { return prefixes.expand(name); }

}  // namespace metastar
