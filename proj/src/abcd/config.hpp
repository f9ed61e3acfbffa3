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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abcd/ast_metrics.hpp"
#include "abcd/lint.hpp"
#include "abcd/vlm_analysis.hpp"

namespace abcd {

enum class TokenAggregation { Macro, Micro };
enum class SamplingMode { Stratified, Pooled };

std::string_view to_string(TokenAggregation value);
std::string_view to_string(SamplingMode value);

struct AnalysisConfig {
  std::vector<std::string> registry = {"simple_query", "llm_query"};
  EdgeMode edge_mode = EdgeMode::Field;
  TokenAggregation token_aggregation = TokenAggregation::Macro;
  SamplingMode sampling = SamplingMode::Stratified;
  std::optional<std::uint64_t> sample_size;
  std::uint64_t seed = 0;
  double exclusion_warn_threshold = 0.03;
  ApiSpec api_spec = ApiSpec::defaults();
  // Worker threads for corpus runs; 0 picks the hardware concurrency.
  // Never affects results, so it is not part of the serialized config.
  unsigned threads = 0;

  // Throws ConfigError on out-of-range values or an invalid registry.
  void validate() const;
  CalleeRegistry callee_registry() const { return CalleeRegistry(registry); }

  // Field names mirror the struct. Missing fields keep their defaults;
  // unknown fields and wrong types raise SchemaError.
  static AnalysisConfig from_json(const nlohmann::json& doc);
  static AnalysisConfig load(const std::string& path);
  // Overlays the fields present in `doc` onto this config.
  void merge_json(const nlohmann::json& doc);
  nlohmann::ordered_json to_json() const;

  // Hash of everything that changes per-program numbers: registry (as a set),
  // edge mode, token aggregation, API spec and node-kind version.
  std::string config_hash() const;

  friend bool operator==(const AnalysisConfig& a, const AnalysisConfig& b);
};

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace abcd
