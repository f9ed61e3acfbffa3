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

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abcd/ast.hpp"

namespace abcd {

// Method names treated as VLM interfaces. A call matches when its callee is
// an attribute access whose final name is registered; the receiver is
// irrelevant.
class CalleeRegistry {
 public:
  // Throws ConfigError when empty, on non-identifiers and on duplicates.
  explicit CalleeRegistry(std::vector<std::string> names);
  static CalleeRegistry defaults();

  bool contains(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

enum class QueryOrigin { DirectLiteral, Propagated, Unresolved };

std::string_view to_string(QueryOrigin origin);

struct QueryText {
  // A segment without a value is an interpolation hole.
  std::vector<std::optional<std::string>> segments;
  QueryOrigin origin = QueryOrigin::Unresolved;
  std::string variable;  // set when propagated
  Span definition;       // literal that supplied the text (direct or propagated)
};

struct VlmCallSite {
  std::string callee;
  std::string receiver;  // source text of the receiver expression
  Span span;             // the Call node
  const AstNode* call = nullptr;
  QueryText query;
  bool to_yesno = false;
};

// Static call sites of registered methods, in source order. Query texts are
// left unresolved; see resolve_query_texts.
std::vector<VlmCallSite> extract_call_sites(const SyntaxTree& tree, const CalleeRegistry& registry);

// Reaching-definition facts for every call in a tree whose first positional
// argument is a plain name. Computed once per tree, independent of any
// registry.
class QueryResolver {
 public:
  explicit QueryResolver(const SyntaxTree& tree);
  ~QueryResolver();
  QueryResolver(const QueryResolver&) = delete;
  QueryResolver& operator=(const QueryResolver&) = delete;

  QueryText resolve(const VlmCallSite& site) const;

 private:
  struct Facts;
  std::unique_ptr<Facts> facts_;
};

QueryText resolve_query_text(const VlmCallSite& site, const SyntaxTree& tree);

// Fills in `query` for every site.
void resolve_query_texts(std::vector<VlmCallSite>& sites, const SyntaxTree& tree);

// Tokens of a resolved query: literal segments through tokenize_text, one
// kHoleToken per hole. Empty for unresolved queries.
std::vector<std::string> tokenize_query(const QueryText& query);

struct VlmMetrics {
  std::size_t call_count = 0;
  std::vector<std::size_t> token_counts;  // resolvable sites, in site order
  double token_mean = 0.0;
  bool token_mean_defined = false;
  std::size_t unresolved_sites = 0;
  std::vector<VlmCallSite> sites;
};

VlmMetrics vlm_metrics(const SyntaxTree& tree, const CalleeRegistry& registry);

}  // namespace abcd
