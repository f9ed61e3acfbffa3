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

#include "abcd/tree_dump.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

bool is_bare_symbol(std::string_view text) {
  if (text.empty()) return false;
  auto ident_start = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (ident_start(text[0])) {
    for (char c : text) {
      if (!ident_start(c) && !(c >= '0' && c <= '9')) return false;
    }
    return true;
  }
  constexpr std::string_view kOperatorChars = "-+*/%@<>=!&|^~";
  return text.find_first_not_of(kOperatorChars) == std::string_view::npos;
}

void append_quoted(std::string& out, std::string_view text) {
  out += '"';
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void append_primitive(std::string& out, const Primitive& value) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          out += "None";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += v ? "True" : "False";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out += std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          out += format_float_repr(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          append_quoted(out, v);
        } else {
          if (is_bare_symbol(v.text)) {
            out += v.text;
          } else {
            append_quoted(out, v.text);
          }
        }
      },
      value);
}

void append_sexpr(std::string& out, const AstNode& node) {
  out += '(';
  out += to_string(node.kind);
  for (const auto& attr : node.attributes) {
    out += ' ';
    out += attr.name;
    out += '=';
    append_primitive(out, attr.value);
  }
  for (const auto& link : node.children) {
    out += ' ';
    append_sexpr(out, *link.node);
  }
  out += ')';
}

nlohmann::ordered_json primitive_to_json(const Primitive& value) {
  nlohmann::ordered_json out;
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          out["type"] = "none";
        } else if constexpr (std::is_same_v<T, bool>) {
          out["type"] = "bool";
          out["value"] = v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out["type"] = "int";
          out["value"] = v;
        } else if constexpr (std::is_same_v<T, double>) {
          // Kept as text so infinities survive and the value round-trips exactly.
          out["type"] = "float";
          out["value"] = format_float_repr(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          out["type"] = "string";
          out["value"] = v;
        } else {
          out["type"] = "symbol";
          out["value"] = v.text;
        }
      },
      value);
  return out;
}

const nlohmann::json& member(const nlohmann::json& obj, const char* key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr, std::string("missing field '") + key + "'");
  return *it;
}

void only_fields(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                 const std::string& ptr) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw SchemaError(ptr + "/" + item.key(), "unknown field");
    }
  }
}

std::uint64_t unsigned_field(const nlohmann::json& obj, const char* key, const std::string& ptr) {
  const auto& v = member(obj, key, ptr);
  if (!v.is_number_unsigned()) throw SchemaError(ptr + "/" + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

Primitive primitive_from_json(const nlohmann::json& doc, const std::string& ptr) {
  if (!doc.is_object()) throw SchemaError(ptr, "expected an object");
  const auto& type_json = member(doc, "type", ptr);
  if (!type_json.is_string()) throw SchemaError(ptr + "/type", "expected a string");
  const std::string type = type_json.get<std::string>();
  if (type == "none") {
    only_fields(doc, {"type"}, ptr);
    return std::monostate{};
  }
  only_fields(doc, {"type", "value"}, ptr);
  const auto& v = member(doc, "value", ptr);
  const std::string vptr = ptr + "/value";
  if (type == "bool") {
    if (!v.is_boolean()) throw SchemaError(vptr, "expected a boolean");
    return v.get<bool>();
  }
  if (type == "int") {
    if (!v.is_number_integer()) throw SchemaError(vptr, "expected an integer");
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw SchemaError(vptr, "integer out of range");
    }
    return v.get<std::int64_t>();
  }
  if (type == "float") {
    if (!v.is_string()) throw SchemaError(vptr, "expected a float repr string");
    std::string text = v.get<std::string>();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    double d = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc() || p != text.data() + text.size()) {
      throw SchemaError(vptr, "malformed float");
    }
    return d;
  }
  if (type == "string" || type == "symbol") {
    if (!v.is_string()) throw SchemaError(vptr, "expected a string");
    if (type == "string") return v.get<std::string>();
    return Symbol{v.get<std::string>()};
  }
  throw SchemaError(ptr + "/type", "unknown primitive type '" + type + "'");
}

}  // namespace

std::string format_float_repr(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  bool negative = !sci.empty() && sci[0] == '-';
  if (negative) sci.erase(0, 1);
  auto e = sci.find('e');
  std::string mantissa = sci.substr(0, e);
  int exponent = std::stoi(sci.substr(e + 1));
  std::string digits;
  for (char c : mantissa) {
    if (c != '.') digits += c;
  }
  std::string out = negative ? "-" : "";
  if (exponent >= -4 && exponent < 16) {
    if (exponent < 0) {
      out += "0.";
      out.append(static_cast<std::size_t>(-exponent - 1), '0');
      out += digits;
    } else {
      auto int_len = static_cast<std::size_t>(exponent) + 1;
      if (digits.size() <= int_len) {
        out += digits;
        out.append(int_len - digits.size(), '0');
        out += ".0";
      } else {
        out += digits.substr(0, int_len);
        out += '.';
        out += digits.substr(int_len);
      }
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) {
    out += '.';
    out += digits.substr(1);
  }
  char exp_buf[16];
  std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", exponent < 0 ? '-' : '+',
                exponent < 0 ? -exponent : exponent);
  out += exp_buf;
  return out;
}

std::string dump_sexpr(const AstNode& node) {
  std::string out;
  append_sexpr(out, node);
  return out;
}

nlohmann::ordered_json tree_to_json(const AstNode& node) {
  nlohmann::ordered_json out;
  out["kind"] = std::string(to_string(node.kind));
  out["span"] = {{"line", node.span.line},
                 {"column", node.span.column},
                 {"offset", node.span.offset},
                 {"length", node.span.length}};
  auto attrs = nlohmann::ordered_json::array();
  for (const auto& attr : node.attributes) {
    nlohmann::ordered_json entry;
    entry["name"] = std::string(attr.name);
    entry.update(primitive_to_json(attr.value));
    attrs.push_back(std::move(entry));
  }
  out["attributes"] = std::move(attrs);
  auto children = nlohmann::ordered_json::array();
  for (const auto& link : node.children) {
    children.push_back({{"field", std::string(link.field)}, {"node", tree_to_json(*link.node)}});
  }
  out["children"] = std::move(children);
  return out;
}

std::unique_ptr<AstNode> tree_from_json(const nlohmann::json& doc, const std::string& pointer) {
  if (!doc.is_object()) throw SchemaError(pointer, "expected a node object");
  only_fields(doc, {"kind", "span", "attributes", "children"}, pointer);
  const auto& kind_json = member(doc, "kind", pointer);
  if (!kind_json.is_string()) throw SchemaError(pointer + "/kind", "expected a string");
  auto kind = node_kind_from_string(kind_json.get<std::string>());
  if (!kind) throw SchemaError(pointer + "/kind", "unknown node kind");

  const auto& span_json = member(doc, "span", pointer);
  const std::string sptr = pointer + "/span";
  if (!span_json.is_object()) throw SchemaError(sptr, "expected an object");
  only_fields(span_json, {"line", "column", "offset", "length"}, sptr);
  Span span;
  span.line = static_cast<std::uint32_t>(unsigned_field(span_json, "line", sptr));
  span.column = static_cast<std::uint32_t>(unsigned_field(span_json, "column", sptr));
  span.offset = unsigned_field(span_json, "offset", sptr);
  span.length = unsigned_field(span_json, "length", sptr);
  auto node = make_node(*kind, span);

  const auto& attrs = member(doc, "attributes", pointer);
  if (!attrs.is_array()) throw SchemaError(pointer + "/attributes", "expected an array");
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const std::string aptr = pointer + "/attributes/" + std::to_string(i);
    const auto& entry = attrs[i];
    if (!entry.is_object()) throw SchemaError(aptr, "expected an object");
    const auto& name_json = member(entry, "name", aptr);
    auto name = name_json.is_string() ? intern_attribute_name(name_json.get<std::string>())
                                      : std::nullopt;
    if (!name) throw SchemaError(aptr + "/name", "unknown attribute name");
    nlohmann::json rest = entry;
    rest.erase("name");
    node->attributes.push_back(NodeAttribute{*name, primitive_from_json(rest, aptr)});
  }

  const auto& children = member(doc, "children", pointer);
  if (!children.is_array()) throw SchemaError(pointer + "/children", "expected an array");
  for (std::size_t i = 0; i < children.size(); ++i) {
    const std::string cptr = pointer + "/children/" + std::to_string(i);
    const auto& entry = children[i];
    if (!entry.is_object()) throw SchemaError(cptr, "expected an object");
    only_fields(entry, {"field", "node"}, cptr);
    const auto& field_json = member(entry, "field", cptr);
    auto field = field_json.is_string() ? intern_field_name(field_json.get<std::string>())
                                        : std::nullopt;
    if (!field) throw SchemaError(cptr + "/field", "unknown field name");
    node->children.push_back(
        ChildLink{*field, tree_from_json(member(entry, "node", cptr), cptr + "/node")});
  }
  return node;
}

std::string dump_tree(const SyntaxTree& tree, DumpFormat format) {
  if (format == DumpFormat::Sexpr) return dump_sexpr(tree.root());
  return tree_to_json(tree.root()).dump(2);
}

}  // namespace abcd
