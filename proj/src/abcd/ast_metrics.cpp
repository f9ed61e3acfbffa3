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

#include "abcd/ast_metrics.hpp"

#include <algorithm>

namespace abcd {

std::string_view to_string(EdgeMode mode) { return mode == EdgeMode::Tree ? "tree" : "field"; }

std::optional<EdgeMode> edge_mode_from_string(std::string_view text) {
  if (text == "tree") return EdgeMode::Tree;
  if (text == "field") return EdgeMode::Field;
  return std::nullopt;
}

StructuralProfile structural_profile(const AstNode& root) {
  StructuralProfile p;
  std::size_t attributes = 0;
  walk(root, [&](const AstNode& node, std::size_t depth) {
    ++p.nodes_total;
    ++p.per_kind[static_cast<std::size_t>(node.kind)];
    attributes += node.attributes.size();
    p.max_depth = std::max(p.max_depth, depth);
  });
  p.edges_tree = p.nodes_total - 1;
  p.edges_field = p.edges_tree + attributes;
  return p;
}

StructuralProfile structural_profile(const SyntaxTree& tree) {
  return structural_profile(tree.root());
}

std::size_t count_nodes(const SyntaxTree& tree) { return tree.node_count(); }

std::size_t count_edges(const SyntaxTree& tree, EdgeMode mode) {
  if (mode == EdgeMode::Tree) return tree.node_count() - 1;
  return structural_profile(tree).edges_field;
}

}  // namespace abcd
