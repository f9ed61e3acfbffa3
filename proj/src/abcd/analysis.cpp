/*  Copyright 2026 The ABCD analyzer authors.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License. */

#include "abcd/analysis.hpp"

#include "abcd/report.hpp"

namespace abcd {

namespace {

using OJson = nlohmann::ordered_json;

OJson site_to_json(const VlmCallSite& site) {
  OJson segments = OJson::array();
  for (const auto& seg : site.query.segments) segments.push_back(seg ? OJson(*seg) : OJson());
  OJson out{{"callee", site.callee},
            {"receiver", site.receiver},
            {"line", site.span.line},
            {"column", site.span.column},
            {"origin", std::string(to_string(site.query.origin))}};
  if (site.query.origin == QueryOrigin::Propagated) out["variable"] = site.query.variable;
  out["to_yesno"] = site.to_yesno;
  if (site.query.origin == QueryOrigin::Unresolved) {
    out["segments"] = nullptr;
    out["tokens"] = nullptr;
  } else {
    out["segments"] = std::move(segments);
    out["tokens"] = tokenize_query(site.query);
  }
  return out;
}

}  // namespace

ProgramAnalysis analyze_tree(const SyntaxTree& tree, const AnalysisConfig& config) {
  ProgramAnalysis a;
  if (tree.source()) a.source = tree.source()->path;
  a.vlm = vlm_metrics(tree, config.callee_registry());
  a.profile = structural_profile(tree);
  a.lint = lint_api_usage(tree, config.api_spec);
  return a;
}

OJson lint_to_json(const std::vector<LintFinding>& findings) {
  OJson out = OJson::array();
  for (const auto& f : findings) {
    out.push_back(OJson{{"rule", f.rule},
                        {"severity", std::string(to_string(f.severity))},
                        {"message", f.message},
                        {"line", f.span.line},
                        {"column", f.span.column}});
  }
  return out;
}

OJson analysis_to_json(const ProgramAnalysis& a, const AnalysisConfig& config) {
  OJson sites = OJson::array();
  for (const auto& s : a.vlm.sites) sites.push_back(site_to_json(s));
  OJson per_kind = OJson::object();
  for (NodeKind k : all_node_kinds()) {
    if (auto n = a.profile.per_kind[static_cast<std::size_t>(k)]) per_kind[std::string(to_string(k))] = n;
  }
  OJson out;
  out["source"] = a.source;
  out["config_hash"] = config.config_hash();
  out["vlm"] = OJson{{"call_count", a.vlm.call_count},
                     {"unresolved_sites", a.vlm.unresolved_sites},
                     {"token_counts", a.vlm.token_counts},
                     {"token_mean", a.vlm.token_mean},
                     {"token_mean_defined", a.vlm.token_mean_defined},
                     {"sites", std::move(sites)}};
  out["ast"] = OJson{{"nodes", a.profile.nodes_total},
                     {"edges_tree", a.profile.edges_tree},
                     {"edges_field", a.profile.edges_field},
                     {"edge_mode", std::string(to_string(config.edge_mode))},
                     {"edges", a.profile.edges(config.edge_mode)},
                     {"max_depth", a.profile.max_depth},
                     {"per_kind", std::move(per_kind)}};
  out["lint"] = lint_to_json(a.lint);
  return out;
}

std::string render_analysis(const ProgramAnalysis& a, const AnalysisConfig& config) {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    std::string padded = key;
    padded.resize(18, ' ');
    out += padded + value + "\n";
  };
  if (!a.source.empty()) line("source", a.source);
  line("vlm calls", std::to_string(a.vlm.call_count));
  line("vlm tokens", a.vlm.token_mean_defined ? format_fixed(a.vlm.token_mean, 2)
                                              : "n/a (no resolvable query)");
  line("unresolved sites", std::to_string(a.vlm.unresolved_sites));
  line("ast nodes", std::to_string(a.profile.nodes_total));
  line("ast edges", std::to_string(a.profile.edges(config.edge_mode)) + " (" +
                        std::string(to_string(config.edge_mode)) + ")");
  line("ast edges tree", std::to_string(a.profile.edges_tree));
  line("ast edges field", std::to_string(a.profile.edges_field));
  line("max depth", std::to_string(a.profile.max_depth));
  line("lint findings", std::to_string(a.lint.size()));
  for (const auto& s : a.vlm.sites) {
    std::string desc = std::to_string(s.span.line) + ":" + std::to_string(s.span.column) + " " +
                       s.receiver + "." + s.callee + " " + std::string(to_string(s.query.origin));
    if (s.query.origin != QueryOrigin::Unresolved) {
      desc += " " + std::to_string(tokenize_query(s.query).size()) + " tokens";
    }
    line("  site", desc);
  }
  return out;
}

std::string render_lint(const std::vector<LintFinding>& findings, const std::string& source) {
  std::string out;
  for (const auto& f : findings) {
    out += source + ":" + std::to_string(f.span.line) + ":" + std::to_string(f.span.column) + ": " +
           std::string(to_string(f.severity)) + ": " + f.message + " [" + f.rule + "]\n";
  }
  return out;
}

}  // namespace abcd
