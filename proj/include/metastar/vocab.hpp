#pragma once

#include <string_view>

// IRIs the library needs by name. The ex: namespace holds the small
// statement-revision vocabulary (replaceSubjectBy / replaced / valid_from /
// valid_to) used by the annotation and replacement transformations.

namespace metastar::vocab {

namespace rdf {
inline constexpr std::string_view ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view lang_string =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace rdf

namespace xsd {
inline constexpr std::string_view ns = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view double_ = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view date = "http://www.w3.org/2001/XMLSchema#date";
}  // namespace xsd

namespace ex {
inline constexpr std::string_view ns = "http://example.org/";
inline constexpr std::string_view replace_subject_by = "http://example.org/replaceSubjectBy";
inline constexpr std::string_view replaced = "http://example.org/replaced";
inline constexpr std::string_view valid_from = "http://example.org/valid_from";
inline constexpr std::string_view valid_to = "http://example.org/valid_to";
}  // namespace ex

}  // namespace metastar::vocab
