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

#include "abcd/vlm_analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "abcd/errors.hpp"
#include "abcd/query_tokenizer.hpp"

namespace abcd {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) { return start(c) || (c >= '0' && c <= '9'); });
}

const AstNode* first_positional(const AstNode& call) {
  for (const auto& link : call.children) {
    if (link.field == "args") return link.node.get();
  }
  return nullptr;
}

bool is_text_literal(const AstNode& node) {
  return node.kind == NodeKind::StringLiteral || node.kind == NodeKind::FormattedString;
}

std::vector<std::optional<std::string>> literal_segments(const AstNode& literal) {
  std::vector<std::optional<std::string>> out;
  if (literal.kind == NodeKind::StringLiteral) {
    out.emplace_back(std::get<std::string>(*literal.attribute("value")));
    return out;
  }
  for (const auto& link : literal.children) {
    if (link.node->kind == NodeKind::StringLiteral) {
      out.emplace_back(std::get<std::string>(*link.node->attribute("value")));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  if (out.empty()) out.emplace_back(std::string());
  return out;
}

// ---- reaching definitions ---------------------------------------------------

constexpr int kEntryDef = -1;
using DefSet = std::vector<int>;  // sorted, unique

struct Definition {
  const AstNode* literal = nullptr;  // null for non-textual definitions
  std::string variable;
};

struct State {
  bool reachable = true;
  // Variables missing from the map are reached only by the scope entry.
  std::map<std::string, DefSet, std::less<>> vars;

  static State unreachable() {
    State s;
    s.reachable = false;
    return s;
  }

  DefSet get(std::string_view var) const {
    auto it = vars.find(var);
    return it == vars.end() ? DefSet{kEntryDef} : it->second;
  }
};

DefSet set_union(const DefSet& a, const DefSet& b) {
  DefSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

State join(const State& a, const State& b) {
  if (!a.reachable) return b;
  if (!b.reachable) return a;
  State out;
  for (const auto& [var, defs] : a.vars) out.vars[var] = set_union(defs, b.get(var));
  for (const auto& [var, defs] : b.vars) {
    if (!out.vars.count(var)) out.vars[var] = set_union(defs, a.get(var));
  }
  return out;
}

bool same(const State& a, const State& b) {
  if (a.reachable != b.reachable) return false;
  for (const auto& [var, defs] : a.vars) {
    if (defs != b.get(var)) return false;
  }
  for (const auto& [var, defs] : b.vars) {
    if (defs != a.get(var)) return false;
  }
  return true;
}

class ReachingDefinitions {
 public:
  explicit ReachingDefinitions(const AstNode& module) {
    run_scope(module.children_in("body"));
    while (!pending_.empty()) {
      const AstNode* fn = pending_.back();
      pending_.pop_back();
      run_scope(fn->children_in("body"));
    }
  }

  std::vector<Definition> definitions;
  std::unordered_map<const AstNode*, DefSet> call_facts;

 private:
  struct Loop {
    State breaks = State::unreachable();
    State continues = State::unreachable();
  };

  void run_scope(const std::vector<const AstNode*>& body) { exec_block(body, State{}); }

  int definition_id(const AstNode& target, const AstNode* literal) {
    auto [it, inserted] = def_ids_.try_emplace(&target, static_cast<int>(definitions.size()));
    if (inserted) definitions.push_back(Definition{literal, std::string(target.symbol("id"))});
    return it->second;
  }

  void define(State& state, const AstNode& target, const AstNode* literal) {
    int id = definition_id(target, literal);
    if (state.reachable) state.vars[std::string(target.symbol("id"))] = DefSet{id};
  }

  void bind(State& state, const AstNode& target, const AstNode* value) {
    switch (target.kind) {
      case NodeKind::Name:
        define(state, target, value && is_text_literal(*value) ? value : nullptr);
        break;
      case NodeKind::Tuple:
      case NodeKind::List:
        for (const auto& link : target.children) bind(state, *link.node, nullptr);
        break;
      default:
        break;
    }
  }

  void scan(const AstNode& expr, const State& state) {
    walk(expr, [&](const AstNode& node, std::size_t) {
      if (node.kind != NodeKind::Call) return;
      const AstNode* arg = first_positional(node);
      if (!arg || arg->kind != NodeKind::Name) return;
      call_facts[&node] = state.reachable ? state.get(arg->symbol("id")) : DefSet{};
    });
  }

  State exec_block(const std::vector<const AstNode*>& body, State state) {
    for (const AstNode* stmt : body) state = exec(*stmt, std::move(state));
    return state;
  }

  State exec(const AstNode& stmt, State state) {
    switch (stmt.kind) {
      case NodeKind::Assign: {
        for (const auto& link : stmt.children) scan(*link.node, state);
        const AstNode* value = stmt.child("value");
        for (const AstNode* target : stmt.children_in("targets")) bind(state, *target, value);
        return state;
      }
      case NodeKind::AugAssign: {
        for (const auto& link : stmt.children) scan(*link.node, state);
        const AstNode* target = stmt.child("target");
        if (target->kind == NodeKind::Name) define(state, *target, nullptr);
        return state;
      }
      case NodeKind::ExprStmt:
        scan(*stmt.child("value"), state);
        return state;
      case NodeKind::Return:
        if (const AstNode* value = stmt.child("value")) scan(*value, state);
        return State::unreachable();
      case NodeKind::Break:
        if (!loops_.empty()) loops_.back()->breaks = join(loops_.back()->breaks, state);
        return State::unreachable();
      case NodeKind::Continue:
        if (!loops_.empty()) loops_.back()->continues = join(loops_.back()->continues, state);
        return State::unreachable();
      case NodeKind::If: {
        scan(*stmt.child("test"), state);
        State then_out = exec_block(stmt.children_in("body"), state);
        State else_out = exec_block(stmt.children_in("orelse"), state);
        return join(then_out, else_out);
      }
      case NodeKind::While:
      case NodeKind::For:
        return exec_loop(stmt, std::move(state));
      case NodeKind::FunctionDef: {
        for (const auto& link : stmt.children) {
          if (link.field != "body") scan(*link.node, state);
        }
        pending_.push_back(&stmt);
        State out = std::move(state);
        if (out.reachable) {
          // The function name is rebound to a non-text value.
          out.vars[std::string(stmt.symbol("name"))] = DefSet{definition_id(stmt, nullptr)};
        }
        return out;
      }
      default:
        return state;
    }
  }

  State exec_loop(const AstNode& stmt, const State& entry) {
    const bool is_for = stmt.kind == NodeKind::For;
    if (is_for) scan(*stmt.child("iter"), entry);
    State head = entry;
    Loop loop;
    while (true) {
      loop = Loop{};
      loops_.push_back(&loop);
      State body_in = head;
      if (is_for) {
        bind(body_in, *stmt.child("target"), nullptr);
      } else {
        scan(*stmt.child("test"), head);
      }
      State body_out = exec_block(stmt.children_in("body"), std::move(body_in));
      loops_.pop_back();
      State next = join(entry, join(body_out, loop.continues));
      if (same(next, head)) break;
      head = std::move(next);
    }
    State done = exec_block(stmt.children_in("orelse"), head);
    return join(done, loop.breaks);
  }

  std::unordered_map<const AstNode*, int> def_ids_;
  std::vector<Loop*> loops_;
  std::vector<const AstNode*> pending_;
};

}  // namespace

// ---- registry ---------------------------------------------------------------

CalleeRegistry::CalleeRegistry(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ConfigError("callee registry must not be empty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_identifier(names_[i])) {
      throw ConfigError("callee registry entry '" + names_[i] + "' is not an identifier");
    }
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), names_[i]) !=
        names_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ConfigError("duplicate callee registry entry '" + names_[i] + "'");
    }
  }
}

CalleeRegistry CalleeRegistry::defaults() { return CalleeRegistry({"simple_query", "llm_query"}); }

bool CalleeRegistry::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::string_view to_string(QueryOrigin origin) {
  switch (origin) {
    case QueryOrigin::DirectLiteral: return "direct";
    case QueryOrigin::Propagated: return "propagated";
    case QueryOrigin::Unresolved: break;
  }
  return "unresolved";
}

// ---- call sites -------------------------------------------------------------

std::vector<VlmCallSite> extract_call_sites(const SyntaxTree& tree, const CalleeRegistry& registry) {
  std::vector<VlmCallSite> sites;
  walk(tree.root(), [&](const AstNode& node, std::size_t) {
    if (node.kind != NodeKind::Call) return;
    const AstNode* func = node.child("func");
    if (func->kind != NodeKind::Attribute) return;
    std::string_view name = func->symbol("attr");
    if (!registry.contains(name)) return;
    VlmCallSite site;
    site.callee = std::string(name);
    site.receiver = std::string(tree.text(func->child("value")->span));
    site.span = node.span;
    site.call = &node;
    for (const AstNode* kw : node.children_in("keywords")) {
      if (kw->symbol("arg") == "to_yesno") site.to_yesno = true;
    }
    sites.push_back(std::move(site));
  });
  std::stable_sort(sites.begin(), sites.end(), [](const VlmCallSite& a, const VlmCallSite& b) {
    return a.span.offset < b.span.offset;
  });
  return sites;
}

struct QueryResolver::Facts {
  explicit Facts(const AstNode& root) : flow(root) {}
  ReachingDefinitions flow;
};

QueryResolver::QueryResolver(const SyntaxTree& tree)
    : facts_(std::make_unique<Facts>(tree.root())) {}

QueryResolver::~QueryResolver() = default;

QueryText QueryResolver::resolve(const VlmCallSite& site) const {
  QueryText out;
  const AstNode* arg = site.call ? first_positional(*site.call) : nullptr;
  if (!arg) return out;
  if (is_text_literal(*arg)) {
    out.origin = QueryOrigin::DirectLiteral;
    out.segments = literal_segments(*arg);
    out.definition = arg->span;
    return out;
  }
  if (arg->kind != NodeKind::Name) return out;
  auto it = facts_->flow.call_facts.find(site.call);
  if (it == facts_->flow.call_facts.end() || it->second.size() != 1 || it->second[0] == kEntryDef) {
    return out;
  }
  const Definition& def = facts_->flow.definitions[static_cast<std::size_t>(it->second[0])];
  if (!def.literal) return out;
  out.origin = QueryOrigin::Propagated;
  out.segments = literal_segments(*def.literal);
  out.variable = def.variable;
  out.definition = def.literal->span;
  return out;
}

QueryText resolve_query_text(const VlmCallSite& site, const SyntaxTree& tree) {
  return QueryResolver(tree).resolve(site);
}

void resolve_query_texts(std::vector<VlmCallSite>& sites, const SyntaxTree& tree) {
  if (sites.empty()) return;
  QueryResolver resolver(tree);
  for (auto& site : sites) site.query = resolver.resolve(site);
}

std::vector<std::string> tokenize_query(const QueryText& query) {
  std::vector<std::string> tokens;
  if (query.origin == QueryOrigin::Unresolved) return tokens;
  for (const auto& segment : query.segments) {
    if (!segment) {
      tokens.emplace_back(kHoleToken);
      continue;
    }
    auto part = tokenize_text(*segment);
    tokens.insert(tokens.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return tokens;
}

VlmMetrics vlm_metrics(const SyntaxTree& tree, const CalleeRegistry& registry) {
  VlmMetrics m;
  m.sites = extract_call_sites(tree, registry);
  resolve_query_texts(m.sites, tree);
  m.call_count = m.sites.size();
  for (const auto& site : m.sites) {
    if (site.query.origin == QueryOrigin::Unresolved) {
      ++m.unresolved_sites;
    } else {
      m.token_counts.push_back(tokenize_query(site.query).size());
    }
  }
  if (!m.token_counts.empty()) {
    m.token_mean_defined = true;
    m.token_mean = static_cast<double>(std::accumulate(m.token_counts.begin(), m.token_counts.end(),
                                                       std::size_t{0})) /
                   static_cast<double>(m.token_counts.size());
  }
  return m;
}

}  // namespace abcd
