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

#include "abcd/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "abcd/errors.hpp"
#include "abcd/parser.hpp"
#include "abcd/prng.hpp"

namespace abcd {

namespace {

using Json = nlohmann::json;

std::string manifest_field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ManifestError(where + ": missing field '" + key + "'");
  if (!it->is_string()) throw ManifestError(where + ": field '" + key + "' must be a string");
  std::string value = it->get<std::string>();
  if (value.empty()) throw ManifestError(where + ": field '" + key + "' is empty");
  return value;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "': " + std::strerror(errno));
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return text.str();
}

CorpusManifest parse_manifest(const std::string& text, const std::string& base_dir,
                              const std::string& source_name) {
  CorpusManifest manifest;
  manifest.source = source_name;
  std::map<std::string, std::size_t> seen;
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source_name + ":" + std::to_string(number);
    Json obj = Json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw ManifestError(where + ": not valid JSON");
    if (!obj.is_object()) throw ManifestError(where + ": expected a JSON object");
    for (const auto& item : obj.items()) {
      if (item.key() != "id" && item.key() != "path" && item.key() != "dataset") {
        throw ManifestError(where + ": unknown field '" + item.key() + "'");
      }
    }
    ManifestEntry entry;
    entry.id = manifest_field(obj, "id", where);
    entry.path = manifest_field(obj, "path", where);
    entry.dataset = manifest_field(obj, "dataset", where);
    entry.line = number;
    std::filesystem::path p(entry.path);
    entry.resolved_path = p.is_absolute() || base_dir.empty()
                              ? entry.path
                              : (std::filesystem::path(base_dir) / p).string();
    auto [it, inserted] = seen.emplace(entry.id, number);
    if (!inserted) {
      throw ManifestError(source_name + ": duplicate id '" + entry.id + "' on lines " +
                          std::to_string(it->second) + " and " + std::to_string(number));
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

CorpusManifest load_manifest(const std::string& path) {
  std::string text = read_text_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_manifest(text, dir, path);
}

std::vector<std::string> dataset_labels(const CorpusManifest& manifest) {
  std::vector<std::string> labels;
  for (const auto& e : manifest.entries) {
    if (std::find(labels.begin(), labels.end(), e.dataset) == labels.end()) {
      labels.push_back(e.dataset);
    }
  }
  return labels;
}

CorpusManifest sample_corpus(const CorpusManifest& manifest, std::uint64_t n, std::uint64_t seed,
                             SamplingMode mode) {
  if (n == 0) throw ConfigError("sample size must be positive");
  std::vector<std::vector<std::size_t>> groups;
  if (mode == SamplingMode::Pooled) {
    groups.emplace_back(manifest.entries.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) groups[0][i] = i;
  } else {
    for (const auto& label : dataset_labels(manifest)) {
      auto& group = groups.emplace_back();
      for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        if (manifest.entries[i].dataset == label) group.push_back(i);
      }
    }
  }

  SplitMix64 rng(seed);
  std::vector<bool> keep(manifest.entries.size(), false);
  for (auto& group : groups) {
    if (n > group.size()) {
      std::string what = mode == SamplingMode::Pooled
                             ? std::string("the manifest")
                             : "dataset '" + manifest.entries[group.front()].dataset + "'";
      throw ConfigError("sample size " + std::to_string(n) + " exceeds the " +
                        std::to_string(group.size()) + " entries of " + what);
    }
    // Partial Fisher-Yates: the first n slots end up holding the sample.
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(group.size() - i));
      std::swap(group[i], group[j]);
      keep[group[i]] = true;
    }
  }

  CorpusManifest out;
  out.source = manifest.source;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    if (keep[i]) out.entries.push_back(manifest.entries[i]);
  }
  return out;
}

ProgramMetrics analyze_program(const SyntaxTree& tree, const AnalysisContext& context) {
  ProgramMetrics m;
  VlmMetrics vlm = vlm_metrics(tree, context.registry);
  m.vlm_calls = vlm.call_count;
  m.unresolved_sites = vlm.unresolved_sites;
  m.token_counts = std::move(vlm.token_counts);
  if (vlm.token_mean_defined) m.token_mean = vlm.token_mean;
  StructuralProfile profile = structural_profile(tree);
  m.nodes = profile.nodes_total;
  m.edges_tree = profile.edges_tree;
  m.edges_field = profile.edges_field;
  m.max_depth = profile.max_depth;
  m.per_kind = profile.per_kind;
  auto findings = lint_api_usage(tree, context.api_spec);
  m.lint_findings = findings.size();
  m.lint_errors = static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(),
                    [](const LintFinding& f) { return f.severity == Severity::Error; }));
  return m;
}

CorpusRun analyze_corpus(const CorpusManifest& manifest, const AnalysisConfig& config) {
  config.validate();
  const AnalysisContext context(config);
  const std::size_t count = manifest.entries.size();
  std::vector<ProgramRecord> records(count);
  std::vector<std::string> io_errors(count);

  auto process = [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    ProgramRecord& rec = records[i];
    rec.id = entry.id;
    rec.dataset = entry.dataset;
    rec.path = entry.path;
    auto source = std::make_shared<SourceProgram>();
    source->path = entry.resolved_path;
    source->dataset = entry.dataset;
    try {
      source->text = read_text_file(entry.resolved_path);
    } catch (const IoError& e) {
      io_errors[i] = e.what();
      return;
    }
    try {
      SyntaxTree tree = parse_program(std::shared_ptr<const SourceProgram>(std::move(source)));
      rec.status = ProgramStatus::Analyzed;
      rec.metrics = analyze_program(tree, context);
    } catch (const ParseError& e) {
      rec.status = ProgramStatus::Excluded;
      rec.error = ParseErrorSummary{to_string(e.phase()), e.message(), e.span(), e.lexeme()};
    }
  };

  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) process(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& message : io_errors) {
    if (!message.empty()) throw IoError(message);
  }

  CorpusRun run;
  run.records = std::move(records);
  for (const auto& label : dataset_labels(manifest)) {
    ExclusionSummary s;
    s.dataset = label;
    for (const auto& rec : run.records) {
      if (rec.dataset != label) continue;
      ++s.total;
      if (rec.status == ProgramStatus::Excluded) ++s.excluded;
    }
    s.fraction = static_cast<double>(s.excluded) / static_cast<double>(s.total);
    s.warning = s.fraction > config.exclusion_warn_threshold;
    if (s.warning) {
      char pct[32];
      char limit[32];
      std::snprintf(pct, sizeof pct, "%.2f%%", 100.0 * s.fraction);
      std::snprintf(limit, sizeof limit, "%.2f%%", 100.0 * config.exclusion_warn_threshold);
      run.warnings.push_back("dataset '" + label + "': " + std::to_string(s.excluded) + " of " +
                             std::to_string(s.total) + " programs excluded (" + pct +
                             "), above the " + limit + " threshold");
    }
    run.exclusions.push_back(std::move(s));
  }
  return run;
}

}  // namespace abcd
