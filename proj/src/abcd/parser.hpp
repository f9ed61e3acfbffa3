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

#include <memory>
#include <string_view>

#include "abcd/ast.hpp"
#include "abcd/source.hpp"

namespace abcd {

// Parses VPLang: the indentation-based subset of Python that generated
// visual programs use. Throws ParseError on the first lexical or syntactic
// problem; nothing partial is returned. Deterministic and reentrant.
SyntaxTree parse_program(std::shared_ptr<const SourceProgram> source);

// Convenience overload: wraps `text` in an anonymous SourceProgram.
SyntaxTree parse_program(std::string_view text);

}  // namespace abcd
