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

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "abcd/ast_metrics.hpp"
#include "abcd/config.hpp"
#include "abcd/lint.hpp"
#include "abcd/vlm_analysis.hpp"

namespace abcd {

// Full single-program analysis: call sites with their queries, structural
// profile and lint findings.
struct ProgramAnalysis {
  std::string source;
  VlmMetrics vlm;
  StructuralProfile profile;
  std::vector<LintFinding> lint;
};

ProgramAnalysis analyze_tree(const SyntaxTree& tree, const AnalysisConfig& config);

nlohmann::ordered_json analysis_to_json(const ProgramAnalysis& analysis, const AnalysisConfig& config);
std::string render_analysis(const ProgramAnalysis& analysis, const AnalysisConfig& config);

nlohmann::ordered_json lint_to_json(const std::vector<LintFinding>& findings);
std::string render_lint(const std::vector<LintFinding>& findings, const std::string& source);

}  // namespace abcd
