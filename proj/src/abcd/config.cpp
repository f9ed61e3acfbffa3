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

#include "abcd/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

using Json = nlohmann::json;

std::string string_field(const Json& v, const std::string& ptr) {
  if (!v.is_string()) throw SchemaError(ptr, "expected a string");
  return v.get<std::string>();
}

std::uint64_t unsigned_field(const Json& v, const std::string& ptr) {
  if (!v.is_number_unsigned()) throw SchemaError(ptr, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

std::string_view to_string(TokenAggregation value) {
  return value == TokenAggregation::Macro ? "macro" : "micro";
}

std::string_view to_string(SamplingMode value) {
  return value == SamplingMode::Stratified ? "stratified" : "pooled";
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void AnalysisConfig::validate() const {
  (void)callee_registry();
  if (!(exclusion_warn_threshold > 0.0 && exclusion_warn_threshold <= 1.0)) {
    throw ConfigError("exclusion_warn_threshold must be in (0, 1]");
  }
  if (sample_size && *sample_size == 0) throw ConfigError("sample_size must be positive");
}

void AnalysisConfig::merge_json(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("", "config must be a JSON object");
  for (const auto& item : doc.items()) {
    const std::string ptr = "/" + item.key();
    const Json& v = item.value();
    if (item.key() == "registry") {
      if (!v.is_array()) throw SchemaError(ptr, "expected an array of method names");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < v.size(); ++i) {
        names.push_back(string_field(v[i], ptr + "/" + std::to_string(i)));
      }
      registry = std::move(names);
    } else if (item.key() == "edge_mode") {
      auto mode = edge_mode_from_string(string_field(v, ptr));
      if (!mode) throw SchemaError(ptr, "expected \"tree\" or \"field\"");
      edge_mode = *mode;
    } else if (item.key() == "token_aggregation") {
      std::string s = string_field(v, ptr);
      if (s != "macro" && s != "micro") throw SchemaError(ptr, "expected \"macro\" or \"micro\"");
      token_aggregation = s == "macro" ? TokenAggregation::Macro : TokenAggregation::Micro;
    } else if (item.key() == "sampling") {
      std::string s = string_field(v, ptr);
      if (s != "stratified" && s != "pooled") {
        throw SchemaError(ptr, "expected \"stratified\" or \"pooled\"");
      }
      sampling = s == "stratified" ? SamplingMode::Stratified : SamplingMode::Pooled;
    } else if (item.key() == "sample_size") {
      if (v.is_null()) {
        sample_size.reset();
      } else {
        sample_size = unsigned_field(v, ptr);
      }
    } else if (item.key() == "seed") {
      seed = unsigned_field(v, ptr);
    } else if (item.key() == "exclusion_warn_threshold") {
      if (!v.is_number()) throw SchemaError(ptr, "expected a number");
      exclusion_warn_threshold = v.get<double>();
    } else if (item.key() == "api_spec") {
      api_spec = ApiSpec::from_json(v, ptr);
    } else if (item.key() == "threads") {
      std::uint64_t n = unsigned_field(v, ptr);
      if (n > 1024) throw SchemaError(ptr, "at most 1024 threads");
      threads = static_cast<unsigned>(n);
    } else {
      throw SchemaError(ptr, "unknown field");
    }
  }
}

AnalysisConfig AnalysisConfig::from_json(const Json& doc) {
  AnalysisConfig config;
  config.merge_json(doc);
  config.validate();
  return config;
}

AnalysisConfig AnalysisConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  Json doc = Json::parse(text.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  try {
    return from_json(doc);
  } catch (const SchemaError& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

nlohmann::ordered_json AnalysisConfig::to_json() const {
  nlohmann::ordered_json out;
  out["registry"] = registry;
  out["edge_mode"] = std::string(to_string(edge_mode));
  out["token_aggregation"] = std::string(to_string(token_aggregation));
  out["sampling"] = std::string(to_string(sampling));
  out["sample_size"] = sample_size ? nlohmann::ordered_json(*sample_size) : nlohmann::ordered_json();
  out["seed"] = seed;
  out["exclusion_warn_threshold"] = exclusion_warn_threshold;
  out["api_spec"] = api_spec.to_json();
  return out;
}

std::string AnalysisConfig::config_hash() const {
  std::vector<std::string> names = registry;
  std::sort(names.begin(), names.end());
  nlohmann::ordered_json basis;
  basis["registry"] = names;
  basis["edge_mode"] = std::string(to_string(edge_mode));
  basis["token_aggregation"] = std::string(to_string(token_aggregation));
  basis["api_spec"] = api_spec.to_json();
  basis["node_kinds_version"] = kNodeKindsVersion;
  return fnv1a_hex(basis.dump());
}

bool operator==(const AnalysisConfig& a, const AnalysisConfig& b) {
  return a.registry == b.registry && a.edge_mode == b.edge_mode &&
         a.token_aggregation == b.token_aggregation && a.sampling == b.sampling &&
         a.sample_size == b.sample_size && a.seed == b.seed &&
         a.exclusion_warn_threshold == b.exclusion_warn_threshold && a.api_spec == b.api_spec;
}

}  // namespace abcd
