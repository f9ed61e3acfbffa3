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

#include "abcd/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace abcd {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {
    "Module",     "FunctionDef", "Parameter",     "For",             "If",
    "While",      "Assign",      "AugAssign",     "Return",          "Continue",
    "Break",      "Pass",        "ExprStmt",      "Call",            "Attribute",
    "Subscript",  "Name",        "Constant",      "StringLiteral",   "FormattedString",
    "FormatHole", "Dict",        "List",          "Tuple",           "BinOp",
    "BoolOp",     "UnaryOp",     "Compare",       "Keyword",         "Slice"};

constexpr std::array<std::string_view, 25> kFieldNames = {
    "body",   "args",   "defaults", "returns", "annotation", "target",      "targets",
    "iter",   "test",   "orelse",   "value",   "func",       "keywords",    "slice",
    "lower",  "upper",  "step",     "elts",    "keys",       "values",      "left",
    "right",  "operand", "comparators", "format_spec"};

constexpr std::array<std::string_view, 7> kAttributeNames = {"name", "id",  "value",     "attr",
                                                             "arg",  "op",  "conversion"};

template <std::size_t N>
std::optional<std::string_view> intern(const std::array<std::string_view, N>& table,
                                       std::string_view name) {
  auto it = std::find(table.begin(), table.end(), name);
  if (it == table.end()) return std::nullopt;
  return *it;
}

std::size_t count_nodes_rec(const AstNode& node) {
  std::size_t n = 1;
  for (const auto& link : node.children) n += count_nodes_rec(*link.node);
  return n;
}

}  // namespace

std::string_view to_string(NodeKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<NodeKind> node_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

const std::array<NodeKind, kNodeKindCount>& all_node_kinds() {
  static const auto kinds = [] {
    std::array<NodeKind, kNodeKindCount> out{};
    for (std::size_t i = 0; i < kNodeKindCount; ++i) out[i] = static_cast<NodeKind>(i);
    return out;
  }();
  return kinds;
}

std::optional<std::string_view> intern_field_name(std::string_view name) {
  return intern(kFieldNames, name);
}

std::optional<std::string_view> intern_attribute_name(std::string_view name) {
  return intern(kAttributeNames, name);
}

const AstNode* AstNode::child(std::string_view field) const {
  for (const auto& link : children) {
    if (link.field == field) return link.node.get();
  }
  return nullptr;
}

std::vector<const AstNode*> AstNode::children_in(std::string_view field) const {
  std::vector<const AstNode*> out;
  for (const auto& link : children) {
    if (link.field == field) out.push_back(link.node.get());
  }
  return out;
}

const Primitive* AstNode::attribute(std::string_view name) const {
  for (const auto& attr : attributes) {
    if (attr.name == name) return &attr.value;
  }
  return nullptr;
}

std::string_view AstNode::symbol(std::string_view name) const {
  if (const auto* value = attribute(name)) {
    if (const auto* sym = std::get_if<Symbol>(value)) return sym->text;
  }
  return {};
}

bool structurally_equal(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || !(a.span == b.span) || a.attributes.size() != b.attributes.size() ||
      a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.attributes.size(); ++i) {
    if (a.attributes[i].name != b.attributes[i].name ||
        !(a.attributes[i].value == b.attributes[i].value)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (a.children[i].field != b.children[i].field ||
        !structurally_equal(*a.children[i].node, *b.children[i].node)) {
      return false;
    }
  }
  return true;
}

std::unique_ptr<AstNode> make_node(NodeKind kind, Span span) {
  auto node = std::make_unique<AstNode>();
  node->kind = kind;
  node->span = span;
  return node;
}

SyntaxTree::SyntaxTree(std::unique_ptr<AstNode> root, std::shared_ptr<const SourceProgram> source)
    : source_(std::move(source)) {
  if (!root || root->kind != NodeKind::Module) {
    throw std::invalid_argument("syntax tree root must be a Module node");
  }
  node_count_ = count_nodes_rec(*root);
  root_ = std::move(root);
}

std::string_view SyntaxTree::text(const Span& span) const {
  if (!source_) return {};
  std::string_view all = source_->text;
  if (span.offset > all.size()) return {};
  return all.substr(span.offset, span.length);
}

}  // namespace abcd
