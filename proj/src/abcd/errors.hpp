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

#include <stdexcept>
#include <string>

#include "abcd/source.hpp"

namespace abcd {

enum class ParsePhase { Lex, Parse };

const char* to_string(ParsePhase phase);

// Raised by the lexer and parser. No partial trees are ever produced.
class ParseError : public std::runtime_error {
 public:
  ParseError(ParsePhase phase, std::string message, Span span, std::string lexeme);

  ParsePhase phase() const { return phase_; }
  const std::string& message() const { return message_; }
  const Span& span() const { return span_; }
  const std::string& lexeme() const { return lexeme_; }

 private:
  ParsePhase phase_;
  std::string message_;
  Span span_;
  std::string lexeme_;
};

// A file could not be read. Aborts corpus runs (unlike parse errors).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus manifest.
class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or bad caller-supplied argument.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON document does not match the expected schema. `pointer()` is a JSON
// pointer to the offending location.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)),
        detail_(message) {}
  const std::string& pointer() const { return pointer_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string pointer_;
  std::string detail_;
};

// Two reports were produced under different metric configurations.
class ConfigMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abcd
