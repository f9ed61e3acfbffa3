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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abcd/config.hpp"
#include "abcd/source.hpp"

namespace abcd {

struct ManifestEntry {
  std::string id;
  std::string path;           // as written in the manifest
  std::string resolved_path;  // relative paths joined to the manifest directory
  std::string dataset;
  std::size_t line = 0;
};

struct CorpusManifest {
  std::string source;
  std::vector<ManifestEntry> entries;
};

// JSON Lines, one {"id", "path", "dataset"} object per line; blank lines are
// skipped. Throws IoError when unreadable and ManifestError (with line
// numbers) on malformed lines or duplicate ids.
CorpusManifest load_manifest(const std::string& path);
CorpusManifest parse_manifest(const std::string& text, const std::string& base_dir,
                              const std::string& source_name);

// Dataset labels in order of first appearance.
std::vector<std::string> dataset_labels(const CorpusManifest& manifest);

// Seeded sample of n entries per dataset (or n overall when pooled) without
// replacement; entries keep their manifest order. Throws ConfigError when n
// is zero or exceeds a group.
CorpusManifest sample_corpus(const CorpusManifest& manifest, std::uint64_t n, std::uint64_t seed,
                             SamplingMode mode = SamplingMode::Stratified);

struct ParseErrorSummary {
  std::string phase;
  std::string message;
  Span span;
  std::string lexeme;
  friend bool operator==(const ParseErrorSummary&, const ParseErrorSummary&) = default;
};

struct ProgramMetrics {
  std::size_t vlm_calls = 0;
  std::size_t unresolved_sites = 0;
  std::vector<std::size_t> token_counts;
  std::optional<double> token_mean;
  std::size_t nodes = 0;
  std::size_t edges_tree = 0;
  std::size_t edges_field = 0;
  std::size_t max_depth = 0;
  std::array<std::size_t, kNodeKindCount> per_kind{};
  std::size_t lint_findings = 0;
  std::size_t lint_errors = 0;
  friend bool operator==(const ProgramMetrics&, const ProgramMetrics&) = default;
};

enum class ProgramStatus { Analyzed, Excluded };

struct ProgramRecord {
  std::string id;
  std::string dataset;
  std::string path;
  ProgramStatus status = ProgramStatus::Analyzed;
  std::optional<ProgramMetrics> metrics;
  std::optional<ParseErrorSummary> error;
  friend bool operator==(const ProgramRecord&, const ProgramRecord&) = default;
};

struct ExclusionSummary {
  std::string dataset;
  std::size_t total = 0;
  std::size_t excluded = 0;
  double fraction = 0.0;
  bool warning = false;
};

struct CorpusRun {
  std::vector<ProgramRecord> records;  // manifest order
  std::vector<ExclusionSummary> exclusions;
  std::vector<std::string> warnings;
};

// Everything needed to analyze one program, built once per run.
struct AnalysisContext {
  explicit AnalysisContext(const AnalysisConfig& config)
      : registry(config.callee_registry()), api_spec(config.api_spec) {}
  CalleeRegistry registry;
  ApiSpec api_spec;
};

ProgramMetrics analyze_program(const SyntaxTree& tree, const AnalysisContext& context);

std::string read_text_file(const std::string& path);

// Parse errors become excluded records; an unreadable file aborts the run
// with IoError. Files are analyzed on config.threads workers; the result
// does not depend on the thread count.
CorpusRun analyze_corpus(const CorpusManifest& manifest, const AnalysisConfig& config);

}  // namespace abcd
