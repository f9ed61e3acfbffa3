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

#include "abcd/errors.hpp"

namespace abcd {

const char* to_string(ParsePhase phase) { return phase == ParsePhase::Lex ? "lex" : "parse"; }

ParseError::ParseError(ParsePhase phase, std::string message, Span span, std::string lexeme)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                         message),
      phase_(phase),
      message_(std::move(message)),
      span_(span),
      lexeme_(std::move(lexeme)) {}

}  // namespace abcd
