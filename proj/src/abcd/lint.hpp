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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abcd/ast.hpp"

namespace abcd {

// What a method call evaluates to, as far as receiver typing is concerned.
struct ApiMethod {
  std::string returns;  // class of the returned value, or empty
  std::string yields;   // class of the iterated elements, or empty
  friend bool operator==(const ApiMethod&, const ApiMethod&) = default;
};

// The visual-programming API surface. Each class is constructible by calling
// its name. `receiver_names` types otherwise unbound variables by name.
struct ApiSpec {
  std::map<std::string, std::map<std::string, ApiMethod>> classes;
  std::map<std::string, std::string> receiver_names;
  std::string entry_point = "execute_command";
  std::size_t entry_arity = 4;
  std::string answer_method = "select_answer";

  static ApiSpec defaults();
  static ApiSpec from_json(const nlohmann::json& doc, const std::string& pointer = "");
  nlohmann::ordered_json to_json() const;
  friend bool operator==(const ApiSpec&, const ApiSpec&) = default;
};

enum class Severity { Warn, Error };

std::string_view to_string(Severity severity);

// Closed rule set.
inline constexpr std::string_view kRuleEntryPoint = "entry-point";
inline constexpr std::string_view kRuleEntryArity = "entry-arity";
inline constexpr std::string_view kRuleUnknownApiMethod = "unknown-api-method";
inline constexpr std::string_view kRuleSelectAnswerUnreturned = "select-answer-unreturned";

struct LintFinding {
  std::string rule;
  Severity severity = Severity::Error;
  std::string message;
  Span span;
};

std::vector<LintFinding> lint_api_usage(const SyntaxTree& tree, const ApiSpec& spec);

bool has_errors(const std::vector<LintFinding>& findings);

}  // namespace abcd
