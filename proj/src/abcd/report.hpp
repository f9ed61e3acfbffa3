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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abcd/config.hpp"
#include "abcd/corpus.hpp"

namespace abcd {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "abcd-report";
inline constexpr int kReportSchemaVersion = 1;

// Mean and population standard deviation; both empty when no value exists.
struct MetricStat {
  std::optional<double> mean;
  std::optional<double> stddev;
  friend bool operator==(const MetricStat&, const MetricStat&) = default;
};

struct DatasetSummary {
  std::string dataset;
  std::size_t n_analyzed = 0;
  std::size_t n_excluded = 0;
  double exclusion_fraction = 0.0;
  bool warning = false;
  MetricStat vlm_calls;
  MetricStat vlm_tokens_macro;  // over per-program token means
  MetricStat vlm_tokens_micro;  // over all resolvable call sites
  MetricStat ast_nodes;
  MetricStat ast_edges_tree;
  MetricStat ast_edges_field;

  const MetricStat& vlm_tokens(TokenAggregation aggregation) const {
    return aggregation == TokenAggregation::Macro ? vlm_tokens_macro : vlm_tokens_micro;
  }
  const MetricStat& ast_edges(EdgeMode mode) const {
    return mode == EdgeMode::Field ? ast_edges_field : ast_edges_tree;
  }
  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct CorpusReport {
  std::string tool_version{kToolVersion};
  int node_kinds_version = kNodeKindsVersion;
  AnalysisConfig config;
  std::string config_hash;
  std::vector<DatasetSummary> datasets;
  std::vector<std::string> warnings;
  std::vector<ProgramRecord> programs;
  friend bool operator==(const CorpusReport&, const CorpusReport&) = default;
};

// One summary per dataset label, in order of first appearance. Excluded
// records only count towards n_excluded.
std::vector<DatasetSummary> aggregate(const std::vector<ProgramRecord>& records,
                                      double exclusion_warn_threshold);

CorpusReport build_report(const CorpusRun& run, const AnalysisConfig& config);

nlohmann::ordered_json report_to_json(const CorpusReport& report);
std::string serialize_report(const CorpusReport& report);
// Throws SchemaError naming the offending JSON pointer.
CorpusReport deserialize_report(std::string_view text);
CorpusReport report_from_json(const nlohmann::json& doc);

nlohmann::ordered_json program_record_to_json(const ProgramRecord& record);

std::string render_table(const CorpusReport& report);
std::string render_csv(const CorpusReport& report);

enum class Verdict { Greater, Less, Equal, Undefined };
std::string_view to_string(Verdict verdict);

struct MetricComparison {
  std::string metric;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> delta;  // b - a
  Verdict verdict = Verdict::Undefined;
};

struct ComparisonReport {
  std::string dataset_a;
  std::string dataset_b;
  std::string config_hash;
  std::vector<MetricComparison> metrics;
};

// Headline metrics of b against a. Verdicts compare the values as printed
// with two decimals: "greater" means b is larger.
ComparisonReport compare(const DatasetSummary& a, const DatasetSummary& b,
                         const AnalysisConfig& config);

// Throws ConfigMismatchError when the reports' config hashes differ and
// ConfigError when a dataset label is missing.
ComparisonReport compare_reports(const CorpusReport& a, std::string_view dataset_a,
                                 const CorpusReport& b, std::string_view dataset_b);

nlohmann::ordered_json comparison_to_json(const ComparisonReport& comparison);
std::string render_comparison(const ComparisonReport& comparison);

// Fixed-point text with `decimals` digits.
std::string format_fixed(double value, int decimals);

}  // namespace abcd
