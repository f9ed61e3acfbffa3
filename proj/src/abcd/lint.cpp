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

#include "abcd/lint.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

using Json = nlohmann::json;

// Statements of one scope with nested function bodies left out. Calls
// `visit(statement)` for every statement, including those in nested blocks.
template <class Visit>
void for_each_statement(const std::vector<const AstNode*>& body, Visit&& visit) {
  for (const AstNode* stmt : body) {
    visit(*stmt);
    if (stmt->kind == NodeKind::FunctionDef) continue;
    for (const auto& link : stmt->children) {
      if (link.field == "body" || link.field == "orelse") for_each_statement({link.node.get()}, visit);
    }
  }
}

// Expression children of a statement (everything but nested statements).
template <class Visit>
void for_each_expression_node(const AstNode& stmt, Visit&& visit) {
  for (const auto& link : stmt.children) {
    if (link.field == "body" || link.field == "orelse") continue;
    if (stmt.kind == NodeKind::FunctionDef && link.field == "args") {
      if (const AstNode* ann = link.node->child("annotation")) walk(*ann, [&](const AstNode& n, std::size_t) { visit(n); });
      continue;
    }
    walk(*link.node, [&](const AstNode& n, std::size_t) { visit(n); });
  }
}

void collect_names(const AstNode& node, std::set<std::string, std::less<>>& out) {
  walk(node, [&](const AstNode& n, std::size_t) {
    if (n.kind == NodeKind::Name) out.insert(std::string(n.symbol("id")));
  });
}

class ScopeTypes {
 public:
  ScopeTypes(const ApiSpec& spec, const std::vector<const AstNode*>& body,
             const std::vector<const AstNode*>& params)
      : spec_(spec) {
    for (const AstNode* p : params) bound_.insert(std::string(p->symbol("name")));
    for_each_statement(body, [&](const AstNode& stmt) { statements_.push_back(&stmt); });
    // Types flow through chains of assignments; a few rounds reach the fixpoint.
    for (int round = 0; round < 8; ++round) {
      std::map<std::string, std::set<std::string>, std::less<>> next;
      for (const AstNode* stmt : statements_) collect(*stmt, next);
      if (next == bindings_) break;
      bindings_ = std::move(next);
    }
  }

  std::string type_of(const AstNode& expr) const {
    if (expr.kind == NodeKind::Name) return variable_type(expr.symbol("id"));
    if (expr.kind != NodeKind::Call) return {};
    const AstNode* func = expr.child("func");
    if (func->kind == NodeKind::Name) {
      std::string name(func->symbol("id"));
      if (spec_.classes.count(name) && !bound_.count(name) && !bindings_.count(name)) return name;
      return {};
    }
    if (const ApiMethod* m = method_of(*func)) return m->returns;
    return {};
  }

  // Class of `recv` in `recv.method`, when known and described by the ApiSpec.
  std::string receiver_class(const AstNode& attribute) const {
    std::string cls = type_of(*attribute.child("value"));
    return spec_.classes.count(cls) ? cls : std::string();
  }

 private:
  std::string variable_type(std::string_view name) const {
    auto it = bindings_.find(name);
    if (it != bindings_.end()) {
      if (it->second.size() == 1 && !it->second.begin()->empty()) return *it->second.begin();
      return {};
    }
    if (bound_.count(std::string(name))) return {};
    auto fallback = spec_.receiver_names.find(std::string(name));
    return fallback == spec_.receiver_names.end() ? std::string() : fallback->second;
  }

  const ApiMethod* method_of(const AstNode& func) const {
    if (func.kind != NodeKind::Attribute) return nullptr;
    std::string cls = receiver_class(func);
    if (cls.empty()) return nullptr;
    const auto& methods = spec_.classes.at(cls);
    auto it = methods.find(std::string(func.symbol("attr")));
    return it == methods.end() ? nullptr : &it->second;
  }

  std::string element_type(const AstNode& iter) const {
    if (iter.kind != NodeKind::Call) return {};
    if (const ApiMethod* m = method_of(*iter.child("func"))) return m->yields;
    return {};
  }

  void bind(const AstNode& target, const std::string& type,
            std::map<std::string, std::set<std::string>, std::less<>>& out) const {
    if (target.kind == NodeKind::Name) {
      out[std::string(target.symbol("id"))].insert(type);
    } else if (target.kind == NodeKind::Tuple || target.kind == NodeKind::List) {
      for (const auto& link : target.children) bind(*link.node, {}, out);
    }
  }

  void collect(const AstNode& stmt,
               std::map<std::string, std::set<std::string>, std::less<>>& out) const {
    switch (stmt.kind) {
      case NodeKind::Assign: {
        std::string type = type_of(*stmt.child("value"));
        for (const AstNode* t : stmt.children_in("targets")) bind(*t, type, out);
        break;
      }
      case NodeKind::AugAssign:
        bind(*stmt.child("target"), {}, out);
        break;
      case NodeKind::FunctionDef:
        out[std::string(stmt.symbol("name"))].insert({});
        break;
      case NodeKind::For: {
        const AstNode& target = *stmt.child("target");
        const AstNode& iter = *stmt.child("iter");
        const AstNode* func = iter.kind == NodeKind::Call ? iter.child("func") : nullptr;
        auto args = iter.kind == NodeKind::Call ? iter.children_in("args") : std::vector<const AstNode*>{};
        if (func && func->kind == NodeKind::Name && func->symbol("id") == "enumerate" &&
            !args.empty() && target.kind == NodeKind::Tuple && target.children.size() == 2) {
          bind(*target.children[0].node, {}, out);
          bind(*target.children[1].node, element_type(*args[0]), out);
        } else {
          bind(target, element_type(iter), out);
        }
        break;
      }
      default:
        break;
    }
  }

  const ApiSpec& spec_;
  std::vector<const AstNode*> statements_;
  std::set<std::string> bound_;
  std::map<std::string, std::set<std::string>, std::less<>> bindings_;
};

void lint_scope(const ApiSpec& spec, const std::vector<const AstNode*>& body,
                const std::vector<const AstNode*>& params, std::vector<LintFinding>& out) {
  ScopeTypes types(spec, body, params);
  std::set<std::string, std::less<>> returned;
  std::vector<const AstNode*> statements;
  for_each_statement(body, [&](const AstNode& stmt) {
    statements.push_back(&stmt);
    if (stmt.kind == NodeKind::Return) {
      if (const AstNode* value = stmt.child("value")) collect_names(*value, returned);
    }
  });

  for (const AstNode* stmt : statements) {
    for_each_expression_node(*stmt, [&](const AstNode& node) {
      if (node.kind != NodeKind::Call) return;
      const AstNode* func = node.child("func");
      if (func->kind != NodeKind::Attribute) return;
      std::string method(func->symbol("attr"));
      std::string cls = types.receiver_class(*func);
      if (!cls.empty() && !spec.classes.at(cls).count(method)) {
        out.push_back(LintFinding{std::string(kRuleUnknownApiMethod), Severity::Error,
                                  "'" + method + "' is not a method of " + cls, node.span});
      }
      if (method != spec.answer_method) return;
      bool used = stmt->kind == NodeKind::Return;
      if (stmt->kind == NodeKind::Assign) {
        std::set<std::string, std::less<>> targets;
        for (const AstNode* t : stmt->children_in("targets")) collect_names(*t, targets);
        used = std::any_of(targets.begin(), targets.end(),
                           [&](const std::string& n) { return returned.count(n) > 0; });
      }
      if (!used) {
        out.push_back(LintFinding{std::string(kRuleSelectAnswerUnreturned), Severity::Warn,
                                  "result of '" + method + "' is never returned", node.span});
      }
    });
  }

  for (const AstNode* stmt : statements) {
    if (stmt->kind == NodeKind::FunctionDef) {
      lint_scope(spec, stmt->children_in("body"), stmt->children_in("args"), out);
    }
  }
}

std::string string_at(const Json& v, const std::string& ptr) {
  if (!v.is_string()) throw SchemaError(ptr, "expected a string");
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(Severity severity) {
  return severity == Severity::Warn ? "warn" : "error";
}

ApiSpec ApiSpec::defaults() {
  ApiSpec spec;
  spec.classes["VideoSegment"] = {{"frame_iterator", ApiMethod{"", "ImagePatch"}},
                                  {"face_identify", ApiMethod{}},
                                  {"select_answer", ApiMethod{}}};
  spec.classes["ImagePatch"] = {{"find", ApiMethod{"", "ImagePatch"}},
                                {"simple_query", ApiMethod{}},
                                {"llm_query", ApiMethod{}}};
  spec.receiver_names = {{"frame", "ImagePatch"},
                         {"image_patch", "ImagePatch"},
                         {"patch", "ImagePatch"},
                         {"person", "ImagePatch"},
                         {"video_segment", "VideoSegment"}};
  return spec;
}

ApiSpec ApiSpec::from_json(const Json& doc, const std::string& pointer) {
  if (!doc.is_object()) throw SchemaError(pointer, "expected an object");
  if (!doc.contains("classes")) throw SchemaError(pointer, "missing field 'classes'");
  ApiSpec spec;
  spec.classes.clear();
  spec.receiver_names.clear();
  for (const auto& item : doc.items()) {
    const std::string ptr = pointer + "/" + item.key();
    const Json& v = item.value();
    if (item.key() == "classes") {
      if (!v.is_object()) throw SchemaError(ptr, "expected an object");
      for (const auto& cls : v.items()) {
        const std::string cptr = ptr + "/" + cls.key();
        if (!cls.value().is_object()) throw SchemaError(cptr, "expected an object of methods");
        auto& methods = spec.classes[cls.key()];
        for (const auto& m : cls.value().items()) {
          const std::string mptr = cptr + "/" + m.key();
          if (!m.value().is_object()) throw SchemaError(mptr, "expected an object");
          ApiMethod method;
          for (const auto& f : m.value().items()) {
            if (f.key() == "returns") {
              method.returns = string_at(f.value(), mptr + "/returns");
            } else if (f.key() == "yields") {
              method.yields = string_at(f.value(), mptr + "/yields");
            } else {
              throw SchemaError(mptr + "/" + f.key(), "unknown field");
            }
          }
          methods[m.key()] = method;
        }
      }
    } else if (item.key() == "receiver_names") {
      if (!v.is_object()) throw SchemaError(ptr, "expected an object");
      for (const auto& r : v.items()) {
        spec.receiver_names[r.key()] = string_at(r.value(), ptr + "/" + r.key());
      }
    } else if (item.key() == "entry_point") {
      spec.entry_point = string_at(v, ptr);
    } else if (item.key() == "entry_arity") {
      if (!v.is_number_unsigned()) throw SchemaError(ptr, "expected a non-negative integer");
      spec.entry_arity = v.get<std::size_t>();
    } else if (item.key() == "answer_method") {
      spec.answer_method = string_at(v, ptr);
    } else {
      throw SchemaError(ptr, "unknown field");
    }
  }
  return spec;
}

nlohmann::ordered_json ApiSpec::to_json() const {
  nlohmann::ordered_json out;
  nlohmann::ordered_json cls_json = nlohmann::ordered_json::object();
  for (const auto& [cls, methods] : classes) {
    nlohmann::ordered_json m_json = nlohmann::ordered_json::object();
    for (const auto& [name, m] : methods) {
      nlohmann::ordered_json entry = nlohmann::ordered_json::object();
      if (!m.returns.empty()) entry["returns"] = m.returns;
      if (!m.yields.empty()) entry["yields"] = m.yields;
      m_json[name] = std::move(entry);
    }
    cls_json[cls] = std::move(m_json);
  }
  out["classes"] = std::move(cls_json);
  nlohmann::ordered_json names = nlohmann::ordered_json::object();
  for (const auto& [name, cls] : receiver_names) names[name] = cls;
  out["receiver_names"] = std::move(names);
  out["entry_point"] = entry_point;
  out["entry_arity"] = entry_arity;
  out["answer_method"] = answer_method;
  return out;
}

std::vector<LintFinding> lint_api_usage(const SyntaxTree& tree, const ApiSpec& spec) {
  std::vector<LintFinding> findings;
  const AstNode& module = tree.root();
  const AstNode* entry = nullptr;
  const AstNode* first_def = nullptr;
  for (const AstNode* stmt : module.children_in("body")) {
    if (stmt->kind != NodeKind::FunctionDef) continue;
    if (!first_def) first_def = stmt;
    if (!entry && stmt->symbol("name") == spec.entry_point) entry = stmt;
  }
  if (!entry) {
    std::string message = "no module-level function named '" + spec.entry_point + "'";
    if (first_def) message += " (found '" + std::string(first_def->symbol("name")) + "')";
    Span where = first_def ? first_def->span : Span{1, 1, 0, 0};
    findings.push_back(
        LintFinding{std::string(kRuleEntryPoint), Severity::Error, std::move(message), where});
  } else {
    std::size_t arity = entry->children_in("args").size();
    if (arity != spec.entry_arity) {
      findings.push_back(LintFinding{std::string(kRuleEntryArity), Severity::Error,
                                     "'" + spec.entry_point + "' takes " + std::to_string(arity) +
                                         " parameters, expected " +
                                         std::to_string(spec.entry_arity),
                                     entry->span});
    }
  }
  lint_scope(spec, module.children_in("body"), {}, findings);
  std::stable_sort(findings.begin(), findings.end(), [](const LintFinding& a, const LintFinding& b) {
    return a.span.offset < b.span.offset;
  });
  return findings;
}

bool has_errors(const std::vector<LintFinding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const LintFinding& f) { return f.severity == Severity::Error; });
}

}  // namespace abcd
