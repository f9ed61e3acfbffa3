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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abcd/source.hpp"

namespace abcd {

// Closed node-kind enumeration. Bump kNodeKindsVersion whenever it changes so
// reported counts stay comparable across runs.
enum class NodeKind : std::uint8_t {
  Module,
  FunctionDef,
  Parameter,
  For,
  If,
  While,
  Assign,
  AugAssign,
  Return,
  Continue,
  Break,
  Pass,
  ExprStmt,
  Call,
  Attribute,
  Subscript,
  Name,
  Constant,
  StringLiteral,
  FormattedString,
  FormatHole,
  Dict,
  List,
  Tuple,
  BinOp,
  BoolOp,
  UnaryOp,
  Compare,
  Keyword,
  Slice,
};

inline constexpr std::size_t kNodeKindCount = 30;
inline constexpr int kNodeKindsVersion = 1;

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view name);
const std::array<NodeKind, kNodeKindCount>& all_node_kinds();

// Identifier-like text: names, attribute names, operator symbols.
struct Symbol {
  std::string text;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// None is represented by std::monostate; std::string holds literal text.
using Primitive = std::variant<std::monostate, bool, std::int64_t, double, std::string, Symbol>;

struct NodeAttribute {
  std::string_view name;  // always one of the interned attribute names
  Primitive value;
};

struct AstNode;

struct ChildLink {
  std::string_view field;  // always one of the interned field names
  std::unique_ptr<AstNode> node;
};

struct AstNode {
  NodeKind kind;
  Span span;
  std::vector<NodeAttribute> attributes;
  std::vector<ChildLink> children;

  const AstNode* child(std::string_view field) const;
  std::vector<const AstNode*> children_in(std::string_view field) const;
  const Primitive* attribute(std::string_view name) const;
  // Text of a Symbol attribute, or empty.
  std::string_view symbol(std::string_view name) const;
};

// Interned names; returns nullopt for names the tree format does not know.
std::optional<std::string_view> intern_field_name(std::string_view name);
std::optional<std::string_view> intern_attribute_name(std::string_view name);

// Kind, attributes, child fields and spans all equal, recursively.
bool structurally_equal(const AstNode& a, const AstNode& b);

std::unique_ptr<AstNode> make_node(NodeKind kind, Span span);

// Parsed program. Immutable once built, so it can be shared across threads.
class SyntaxTree {
 public:
  SyntaxTree(std::unique_ptr<AstNode> root, std::shared_ptr<const SourceProgram> source);

  const AstNode& root() const { return *root_; }
  const std::shared_ptr<const SourceProgram>& source() const { return source_; }
  std::size_t node_count() const { return node_count_; }
  // Source text under `span`; empty when the tree has no source attached.
  std::string_view text(const Span& span) const;

 private:
  std::unique_ptr<const AstNode> root_;
  std::shared_ptr<const SourceProgram> source_;
  std::size_t node_count_ = 0;
};

// Pre-order traversal. `visit(node, depth)` with the root at depth 1.
template <class Visit>
void walk(const AstNode& node, Visit&& visit, std::size_t depth = 1) {
  visit(node, depth);
  for (const auto& link : node.children) walk(*link.node, visit, depth + 1);
}

}  // namespace abcd
