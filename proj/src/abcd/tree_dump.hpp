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

#include <json.hpp>

#include "abcd/ast.hpp"

namespace abcd {

enum class DumpFormat { Sexpr, Json };

// `(Kind attr=value ... child ...)`. Attributes come first, then children in
// field order. Field names and spans are omitted, so the text only depends
// on tree shape and values.
std::string dump_sexpr(const AstNode& node);

// Full-fidelity JSON: kind, span, attributes and named child links.
nlohmann::ordered_json tree_to_json(const AstNode& node);

// Inverse of tree_to_json. Throws SchemaError with a JSON pointer.
std::unique_ptr<AstNode> tree_from_json(const nlohmann::json& doc, const std::string& pointer = "");

std::string dump_tree(const SyntaxTree& tree, DumpFormat format);

// Shortest text that reads back as the same double, in the host
// language's repr style ("1.0", "1e-05", "1e+16", "inf").
std::string format_float_repr(double value);

}  // namespace abcd
