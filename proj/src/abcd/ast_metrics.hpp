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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "abcd/ast.hpp"

namespace abcd {

enum class EdgeMode { Tree, Field };

std::string_view to_string(EdgeMode mode);
std::optional<EdgeMode> edge_mode_from_string(std::string_view text);

struct StructuralProfile {
  std::size_t nodes_total = 0;
  std::size_t edges_tree = 0;
  std::size_t edges_field = 0;
  // Indexed by NodeKind.
  std::array<std::size_t, kNodeKindCount> per_kind{};
  std::size_t max_depth = 0;

  std::size_t edges(EdgeMode mode) const {
    return mode == EdgeMode::Tree ? edges_tree : edges_field;
  }
  friend bool operator==(const StructuralProfile&, const StructuralProfile&) = default;
};

std::size_t count_nodes(const SyntaxTree& tree);

// Tree mode: parent-child node links. Field mode additionally counts one
// edge per primitive attribute (a Compare with two operators has two).
std::size_t count_edges(const SyntaxTree& tree, EdgeMode mode);

StructuralProfile structural_profile(const AstNode& root);
StructuralProfile structural_profile(const SyntaxTree& tree);

}  // namespace abcd
