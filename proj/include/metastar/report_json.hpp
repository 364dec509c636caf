#pragma once

// JSON views of the transformation reports.

#include <string>

#include "json.hpp"
#include "metastar/format.hpp"
#include "metastar/patterns.hpp"

namespace metastar {

inline nlohmann::json to_json(const MetaReport& r) {
  nlohmann::json graphs = nlohmann::json::array();
  for (const auto& g : r.graphs_with_meta) graphs.push_back(to_string(g));
  return {{"subjectQuotedCount", r.subject_quoted_count},
          {"objectQuotedCount", r.object_quoted_count},
          {"namedGraphCount", r.named_graph_count},
          {"graphsWithMeta", graphs},
          {"hasMetaLevel", r.has_meta_level}};
}

inline nlohmann::json to_json(const ReplacementReport& r) {
  auto line = [](const Quad& q) {
    std::string s = quad_line(q);
    s.resize(s.size() - 3);  // drop " .\n"
    return s;
  };
  nlohmann::json applied = nlohmann::json::array();
  for (const auto& [from, to] : r.applied) applied.push_back({{"old", line(from)}, {"new", line(to)}});
  nlohmann::json conflicts = nlohmann::json::array();
  for (const auto& t : r.conflicts) conflicts.push_back(to_string(t));
  nlohmann::json lineage = nlohmann::json::array();
  for (const auto& [now, before] : r.lineage) lineage.push_back({to_string(now), to_string(before)});
  nlohmann::json vacuous = nlohmann::json::array();
  for (const auto& t : r.vacuous) vacuous.push_back(to_string(t));
  nlohmann::json invalid = nlohmann::json::array();
  for (const auto& q : r.invalid) invalid.push_back(line(q));
  return {{"applied", applied},
          {"conflicts", conflicts},
          {"lineage", lineage},
          {"vacuous", vacuous},
          {"invalid", invalid}};
}

}  // namespace metastar
