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

#include "abcd/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "abcd/errors.hpp"
#include "abcd/lexer.hpp"

namespace abcd {

namespace {

constexpr std::size_t kMaxNesting = 400;

// Maps byte offsets of the full source to 1-based line/column.
class LineMap {
 public:
  explicit LineMap(std::string_view text) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') {
        starts_.push_back(i + 1);
      } else if (text[i] == '\r' && (i + 1 >= text.size() || text[i + 1] != '\n')) {
        starts_.push_back(i + 1);
      }
    }
  }

  Span span(std::size_t offset, std::size_t length) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    auto line = static_cast<std::size_t>(it - starts_.begin());
    Span s;
    s.line = static_cast<std::uint32_t>(line);
    s.column = static_cast<std::uint32_t>(offset - starts_[line - 1] + 1);
    s.offset = offset;
    s.length = length;
    return s;
  }

 private:
  std::vector<std::size_t> starts_;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

struct LiteralPart {
  std::string text;
  Span span;
};

using StringPart = std::variant<LiteralPart, std::unique_ptr<AstNode>>;

struct StringPrefix {
  bool raw = false;
  bool formatted = false;
  std::size_t prefix_len = 0;
  std::size_t quote_len = 1;
};

StringPrefix read_prefix(std::string_view lexeme) {
  StringPrefix p;
  while (p.prefix_len < lexeme.size() && lexeme[p.prefix_len] != '"' &&
         lexeme[p.prefix_len] != '\'') {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(lexeme[p.prefix_len])));
    if (c == 'r') p.raw = true;
    if (c == 'f') p.formatted = true;
    ++p.prefix_len;
  }
  char q = lexeme[p.prefix_len];
  if (lexeme.size() >= p.prefix_len + 6 && lexeme[p.prefix_len + 1] == q &&
      lexeme[p.prefix_len + 2] == q) {
    p.quote_len = 3;
  }
  return p;
}

const char* binop_symbol(std::string_view op) {
  static constexpr std::string_view kOps[] = {"+",  "-",  "*", "/", "//", "%", "**",
                                              "@", "<<", ">>", "|", "^",  "&"};
  for (auto o : kOps) {
    if (o == op) return o.data();
  }
  return nullptr;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view source, const LineMap& lines,
         std::size_t end_offset)
      : tokens_(std::move(tokens)), source_(source), lines_(lines) {
    tokens_.erase(std::remove_if(tokens_.begin(), tokens_.end(),
                                 [](const Token& t) { return t.kind == TokenKind::Comment; }),
                  tokens_.end());
    end_token_.kind = TokenKind::Newline;
    end_token_.span = lines_.span(end_offset, 0);
  }

  std::unique_ptr<AstNode> parse_module() {
    auto module = make_node(NodeKind::Module, lines_.span(0, source_.size()));
    while (!at_end()) {
      if (cur().kind == TokenKind::Newline) {
        advance();
        continue;
      }
      parse_statement(*module, "body");
    }
    return module;
  }

  // Whole token stream must form one expression list (an f-string hole).
  std::unique_ptr<AstNode> parse_fragment() {
    if (at_end()) fail_at(end_token_, "f-string: empty expression not allowed");
    auto expr = parse_star_expressions();
    if (!at_end()) fail("f-string: invalid syntax");
    return expr;
  }

 private:
  // ---- token access -------------------------------------------------------

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& cur() const { return at_end() ? end_token_ : tokens_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : end_token_;
  }

  const Token& advance() {
    const Token& t = cur();
    if (!at_end()) {
      if (t.kind != TokenKind::Newline && t.kind != TokenKind::Indent &&
          t.kind != TokenKind::Dedent) {
        last_ = t.span;
      }
      ++pos_;
    }
    return t;
  }

  bool check(TokenKind kind, std::string_view text) const { return cur().is(kind, text); }
  bool check_op(std::string_view text) const { return check(TokenKind::Operator, text); }
  bool check_delim(std::string_view text) const { return check(TokenKind::Delimiter, text); }
  bool check_kw(std::string_view text) const { return check(TokenKind::Keyword, text); }

  bool accept_delim(std::string_view text) {
    if (!check_delim(text)) return false;
    advance();
    return true;
  }

  const Token& expect_delim(std::string_view text) {
    if (!check_delim(text)) fail("expected '" + std::string(text) + "'");
    return advance();
  }

  const Token& expect_name() {
    if (cur().kind != TokenKind::Identifier) fail("expected a name");
    return advance();
  }

  [[noreturn]] void fail_at(const Token& token, const std::string& message) const {
    throw ParseError(ParsePhase::Parse, message, token.span, token.lexeme);
  }
  [[noreturn]] void fail(const std::string& message) const {
    std::string msg = message;
    if (at_end() && msg == "invalid syntax") msg = "unexpected end of input";
    fail_at(cur(), msg);
  }
  [[noreturn]] void fail_node(const AstNode& node, const std::string& message) const {
    throw ParseError(ParsePhase::Parse, message, node.span,
                     std::string(source_.substr(node.span.offset, node.span.length)));
  }

  Span finish(const Span& start) const { return join(start, last_); }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxNesting) parser.fail("too many nested constructs");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  static void add(AstNode& parent, std::string_view field, std::unique_ptr<AstNode> child) {
    parent.children.push_back(ChildLink{field, std::move(child)});
  }

  // ---- statements ---------------------------------------------------------

  void parse_statement(AstNode& parent, std::string_view field) {
    DepthGuard guard(*this);
    const Token& t = cur();
    if (t.kind == TokenKind::Indent) fail("unexpected indent");
    if (t.kind == TokenKind::Dedent) fail("unexpected unindent");
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "def") return add(parent, field, parse_function_def());
      if (t.lexeme == "if") return add(parent, field, parse_if());
      if (t.lexeme == "for") return add(parent, field, parse_for());
      if (t.lexeme == "while") return add(parent, field, parse_while());
      static constexpr std::string_view kUnsupported[] = {
          "class", "try",    "with",  "raise",   "assert", "del",   "global",
          "nonlocal", "async", "yield", "except", "finally", "lambda", "await"};
      for (auto kw : kUnsupported) {
        if (t.lexeme == kw) fail("unsupported statement '" + t.lexeme + "'");
      }
    }
    parse_simple_statements(parent, field);
  }

  void parse_simple_statements(AstNode& parent, std::string_view field) {
    while (true) {
      if (auto stmt = parse_simple_statement()) add(parent, field, std::move(stmt));
      if (accept_delim(";")) {
        if (cur().kind == TokenKind::Newline) break;
        continue;
      }
      break;
    }
    if (cur().kind != TokenKind::Newline) fail("invalid syntax");
    advance();
  }

  std::unique_ptr<AstNode> parse_simple_statement() {
    const Token& t = cur();
    Span start = t.span;
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "pass" || t.lexeme == "break" || t.lexeme == "continue") {
        NodeKind kind = t.lexeme == "pass"    ? NodeKind::Pass
                        : t.lexeme == "break" ? NodeKind::Break
                                              : NodeKind::Continue;
        advance();
        return make_node(kind, start);
      }
      if (t.lexeme == "return") {
        advance();
        auto node = make_node(NodeKind::Return, start);
        if (cur().kind != TokenKind::Newline && !check_delim(";")) {
          add(*node, "value", parse_star_expressions());
        }
        node->span = finish(start);
        return node;
      }
      if (t.lexeme == "import" || t.lexeme == "from") {
        parse_import();
        return nullptr;
      }
    }
    auto first = parse_star_expressions();
    if (check_op("=")) {
      auto node = make_node(NodeKind::Assign, start);
      std::vector<std::unique_ptr<AstNode>> items;
      items.push_back(std::move(first));
      while (check_op("=")) {
        advance();
        items.push_back(parse_star_expressions());
      }
      for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        check_target(*items[i], true);
        add(*node, "targets", std::move(items[i]));
      }
      add(*node, "value", std::move(items.back()));
      node->span = finish(start);
      return node;
    }
    if (cur().kind == TokenKind::Operator && cur().lexeme.size() >= 2 &&
        cur().lexeme.back() == '=' && cur().lexeme != "==" && cur().lexeme != "!=" &&
        cur().lexeme != "<=" && cur().lexeme != ">=" && cur().lexeme != ":=") {
      std::string op = cur().lexeme.substr(0, cur().lexeme.size() - 1);
      if (!binop_symbol(op)) fail("invalid syntax");
      if (first->kind != NodeKind::Name && first->kind != NodeKind::Attribute &&
          first->kind != NodeKind::Subscript) {
        fail_node(*first, "illegal expression for augmented assignment");
      }
      advance();
      auto node = make_node(NodeKind::AugAssign, start);
      node->attributes.push_back(NodeAttribute{"op", Symbol{op}});
      add(*node, "target", std::move(first));
      add(*node, "value", parse_star_expressions());
      node->span = finish(start);
      return node;
    }
    if (check_delim(":")) fail("annotated assignments are not supported");
    auto node = make_node(NodeKind::ExprStmt, start);
    add(*node, "value", std::move(first));
    node->span = finish(start);
    return node;
  }

  // Accepted and discarded: import a.b [as c], ... | from .a import (b [as c], ...) | *
  void parse_import() {
    auto dotted = [this] {
      expect_name();
      while (accept_delim(".")) expect_name();
    };
    auto alias = [this] {
      if (check_kw("as")) {
        advance();
        expect_name();
      }
    };
    if (check_kw("import")) {
      advance();
      do {
        dotted();
        alias();
      } while (accept_delim(","));
      return;
    }
    advance();  // from
    bool relative = false;
    while (check_delim(".") || check_delim("...")) {
      advance();
      relative = true;
    }
    if (!check_kw("import")) dotted();
    else if (!relative) fail("invalid syntax");
    if (!check_kw("import")) fail("expected 'import'");
    advance();
    if (check_op("*")) {
      advance();
      return;
    }
    bool paren = accept_delim("(");
    do {
      if (paren && check_delim(")")) break;
      expect_name();
      alias();
    } while (accept_delim(","));
    if (paren) expect_delim(")");
  }

  void parse_block(AstNode& parent, std::string_view field) {
    expect_delim(":");
    if (cur().kind != TokenKind::Newline) {
      parse_simple_statements(parent, field);
      return;
    }
    advance();
    if (cur().kind != TokenKind::Indent) fail("expected an indented block");
    advance();
    while (!at_end() && cur().kind != TokenKind::Dedent) {
      parse_statement(parent, field);
    }
    if (cur().kind == TokenKind::Dedent) advance();
  }

  std::unique_ptr<AstNode> parse_function_def() {
    Span start = advance().span;  // def
    auto node = make_node(NodeKind::FunctionDef, start);
    const Token& name = expect_name();
    node->attributes.push_back(NodeAttribute{"name", Symbol{name.lexeme}});
    expect_delim("(");
    std::vector<std::unique_ptr<AstNode>> defaults;
    while (!check_delim(")")) {
      if (check_op("*") || check_op("**") || check_op("/")) {
        fail("only positional parameters are supported");
      }
      const Token& pname = expect_name();
      auto param = make_node(NodeKind::Parameter, pname.span);
      param->attributes.push_back(NodeAttribute{"name", Symbol{pname.lexeme}});
      if (accept_delim(":")) add(*param, "annotation", parse_expression());
      param->span = finish(pname.span);
      if (check_op("=")) {
        advance();
        defaults.push_back(parse_expression());
      } else if (!defaults.empty()) {
        fail_node(*param, "non-default argument follows default argument");
      }
      add(*node, "args", std::move(param));
      if (!accept_delim(",")) break;
    }
    expect_delim(")");
    for (auto& d : defaults) add(*node, "defaults", std::move(d));
    std::unique_ptr<AstNode> returns;
    if (check_op("->")) {
      advance();
      returns = parse_expression();
    }
    parse_block(*node, "body");
    if (returns) add(*node, "returns", std::move(returns));
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_if() {
    Span start = advance().span;  // if / elif
    auto node = make_node(NodeKind::If, start);
    add(*node, "test", parse_expression());
    parse_block(*node, "body");
    if (check_kw("elif")) {
      add(*node, "orelse", parse_if());
    } else if (check_kw("else")) {
      advance();
      parse_block(*node, "orelse");
    }
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_for() {
    Span start = advance().span;
    auto node = make_node(NodeKind::For, start);
    add(*node, "target", parse_target_list());
    if (!check_kw("in")) fail("expected 'in'");
    advance();
    add(*node, "iter", parse_star_expressions());
    parse_block(*node, "body");
    if (check_kw("else")) {
      advance();
      parse_block(*node, "orelse");
    }
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_while() {
    Span start = advance().span;
    auto node = make_node(NodeKind::While, start);
    add(*node, "test", parse_expression());
    parse_block(*node, "body");
    if (check_kw("else")) {
      advance();
      parse_block(*node, "orelse");
    }
    node->span = finish(start);
    return node;
  }

  // for-loop targets stop below comparisons so that `in` is not consumed.
  std::unique_ptr<AstNode> parse_target_list() {
    Span start = cur().span;
    auto first = parse_bitor();
    if (!check_delim(",")) {
      check_target(*first, true);
      return first;
    }
    auto tuple = make_node(NodeKind::Tuple, start);
    check_target(*first, true);
    add(*tuple, "elts", std::move(first));
    while (accept_delim(",")) {
      if (check_kw("in")) break;
      auto item = parse_bitor();
      check_target(*item, true);
      add(*tuple, "elts", std::move(item));
    }
    tuple->span = finish(start);
    return tuple;
  }

  void check_target(const AstNode& node, bool allow_sequence) const {
    switch (node.kind) {
      case NodeKind::Name:
      case NodeKind::Attribute:
      case NodeKind::Subscript:
        return;
      case NodeKind::Tuple:
      case NodeKind::List:
        if (allow_sequence) {
          for (const auto& link : node.children) check_target(*link.node, true);
          return;
        }
        break;
      default:
        break;
    }
    fail_node(node, "cannot assign to " + std::string(to_string(node.kind)));
  }

  // ---- expressions --------------------------------------------------------

  bool can_start_expression() const {
    const Token& t = cur();
    if (at_end()) return false;
    switch (t.kind) {
      case TokenKind::Identifier:
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::FStringSegment:
        return true;
      case TokenKind::Keyword:
        return t.lexeme == "True" || t.lexeme == "False" || t.lexeme == "None" ||
               t.lexeme == "not" || t.lexeme == "lambda" || t.lexeme == "await" ||
               t.lexeme == "yield";
      case TokenKind::Delimiter:
        return t.lexeme == "(" || t.lexeme == "[" || t.lexeme == "{" || t.lexeme == "...";
      case TokenKind::Operator:
        return t.lexeme == "-" || t.lexeme == "+" || t.lexeme == "~" || t.lexeme == "*";
      default:
        return false;
    }
  }

  std::unique_ptr<AstNode> parse_star_expressions() {
    Span start = cur().span;
    auto first = parse_expression();
    if (!check_delim(",")) return first;
    auto tuple = make_node(NodeKind::Tuple, start);
    add(*tuple, "elts", std::move(first));
    while (accept_delim(",")) {
      if (!can_start_expression()) break;
      add(*tuple, "elts", parse_expression());
    }
    tuple->span = finish(start);
    return tuple;
  }

  std::unique_ptr<AstNode> parse_expression() {
    DepthGuard guard(*this);
    if (check_kw("lambda")) fail("lambda expressions are not supported");
    auto expr = parse_or();
    if (check_kw("if")) fail("conditional expressions are not supported");
    if (check_op(":=")) fail("assignment expressions are not supported");
    return expr;
  }

  std::unique_ptr<AstNode> parse_bool(std::string_view op) {
    Span start = cur().span;
    auto first = op == "or" ? parse_bool("and") : parse_not();
    if (!check_kw(op)) return first;
    auto node = make_node(NodeKind::BoolOp, start);
    node->attributes.push_back(NodeAttribute{"op", Symbol{std::string(op)}});
    add(*node, "values", std::move(first));
    while (check_kw(op)) {
      advance();
      add(*node, "values", op == "or" ? parse_bool("and") : parse_not());
    }
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_or() { return parse_bool("or"); }

  std::unique_ptr<AstNode> parse_not() {
    if (check_kw("not")) {
      DepthGuard guard(*this);
      Span start = advance().span;
      auto node = make_node(NodeKind::UnaryOp, start);
      node->attributes.push_back(NodeAttribute{"op", Symbol{"not"}});
      add(*node, "operand", parse_not());
      node->span = finish(start);
      return node;
    }
    return parse_comparison();
  }

  // Returns the comparison operator at the cursor (consuming it), or empty.
  std::string take_compare_op() {
    const Token& t = cur();
    if (t.kind == TokenKind::Operator) {
      static constexpr std::string_view kOps[] = {"==", "!=", "<", "<=", ">", ">="};
      for (auto op : kOps) {
        if (t.lexeme == op) {
          advance();
          return std::string(op);
        }
      }
      return {};
    }
    if (t.is(TokenKind::Keyword, "in")) {
      advance();
      return "in";
    }
    if (t.is(TokenKind::Keyword, "not") && peek(1).is(TokenKind::Keyword, "in")) {
      advance();
      advance();
      return "not in";
    }
    if (t.is(TokenKind::Keyword, "is")) {
      advance();
      if (check_kw("not")) {
        advance();
        return "is not";
      }
      return "is";
    }
    return {};
  }

  std::unique_ptr<AstNode> parse_comparison() {
    Span start = cur().span;
    auto left = parse_bitor();
    std::string op = take_compare_op();
    if (op.empty()) return left;
    auto node = make_node(NodeKind::Compare, start);
    add(*node, "left", std::move(left));
    while (!op.empty()) {
      node->attributes.push_back(NodeAttribute{"op", Symbol{op}});
      add(*node, "comparators", parse_bitor());
      op = take_compare_op();
    }
    node->span = finish(start);
    return node;
  }

  // Left-associative binary levels, loosest first.
  std::unique_ptr<AstNode> parse_binary(int level) {
    static const std::vector<std::vector<std::string_view>> kLevels = {
        {"|"}, {"^"}, {"&"}, {"<<", ">>"}, {"+", "-"}, {"*", "/", "//", "%", "@"}};
    if (level >= static_cast<int>(kLevels.size())) return parse_factor();
    Span start = cur().span;
    auto left = parse_binary(level + 1);
    while (cur().kind == TokenKind::Operator) {
      const auto& ops = kLevels[static_cast<std::size_t>(level)];
      if (std::find(ops.begin(), ops.end(), cur().lexeme) == ops.end()) break;
      std::string op = advance().lexeme;
      auto node = make_node(NodeKind::BinOp, start);
      node->attributes.push_back(NodeAttribute{"op", Symbol{op}});
      add(*node, "left", std::move(left));
      add(*node, "right", parse_binary(level + 1));
      node->span = finish(start);
      left = std::move(node);
    }
    return left;
  }

  std::unique_ptr<AstNode> parse_bitor() { return parse_binary(0); }

  std::unique_ptr<AstNode> parse_factor() {
    if (check_op("-") || check_op("+") || check_op("~")) {
      DepthGuard guard(*this);
      const Token& t = advance();
      Span start = t.span;
      auto node = make_node(NodeKind::UnaryOp, start);
      node->attributes.push_back(NodeAttribute{"op", Symbol{t.lexeme}});
      add(*node, "operand", parse_factor());
      node->span = finish(start);
      return node;
    }
    return parse_power();
  }

  std::unique_ptr<AstNode> parse_power() {
    Span start = cur().span;
    auto base = parse_primary();
    if (!check_op("**")) return base;
    advance();
    auto node = make_node(NodeKind::BinOp, start);
    node->attributes.push_back(NodeAttribute{"op", Symbol{"**"}});
    add(*node, "left", std::move(base));
    add(*node, "right", parse_factor());
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_primary() {
    Span start = cur().span;
    auto expr = parse_atom();
    while (true) {
      if (check_delim(".")) {
        advance();
        const Token& name = expect_name();
        auto node = make_node(NodeKind::Attribute, start);
        add(*node, "value", std::move(expr));
        node->attributes.push_back(NodeAttribute{"attr", Symbol{name.lexeme}});
        node->span = finish(start);
        expr = std::move(node);
      } else if (check_delim("(")) {
        DepthGuard guard(*this);
        expr = parse_call(std::move(expr), start);
      } else if (check_delim("[")) {
        DepthGuard guard(*this);
        advance();
        auto node = make_node(NodeKind::Subscript, start);
        add(*node, "value", std::move(expr));
        add(*node, "slice", parse_slices());
        expect_delim("]");
        node->span = finish(start);
        expr = std::move(node);
      } else {
        return expr;
      }
    }
  }

  std::unique_ptr<AstNode> parse_call(std::unique_ptr<AstNode> func, const Span& start) {
    advance();  // (
    auto node = make_node(NodeKind::Call, start);
    add(*node, "func", std::move(func));
    std::vector<std::unique_ptr<AstNode>> keywords;
    while (!check_delim(")")) {
      if (check_op("*") || check_op("**")) fail("unpacking arguments are not supported");
      if (cur().kind == TokenKind::Identifier && peek(1).is(TokenKind::Operator, "=")) {
        const Token& name = advance();
        advance();
        auto kw = make_node(NodeKind::Keyword, name.span);
        kw->attributes.push_back(NodeAttribute{"arg", Symbol{name.lexeme}});
        add(*kw, "value", parse_expression());
        kw->span = finish(name.span);
        keywords.push_back(std::move(kw));
      } else {
        if (!keywords.empty()) fail("positional argument follows keyword argument");
        auto arg = parse_expression();
        if (check_kw("for")) fail("generator expressions are not supported");
        add(*node, "args", std::move(arg));
      }
      if (!accept_delim(",")) break;
    }
    expect_delim(")");
    for (auto& kw : keywords) add(*node, "keywords", std::move(kw));
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_slices() {
    Span start = cur().span;
    auto first = parse_slice();
    if (!check_delim(",")) return first;
    auto tuple = make_node(NodeKind::Tuple, start);
    add(*tuple, "elts", std::move(first));
    while (accept_delim(",")) {
      if (check_delim("]")) break;
      add(*tuple, "elts", parse_slice());
    }
    tuple->span = finish(start);
    return tuple;
  }

  std::unique_ptr<AstNode> parse_slice() {
    Span start = cur().span;
    std::unique_ptr<AstNode> lower;
    if (!check_delim(":")) {
      lower = parse_expression();
      if (!check_delim(":")) return lower;
    }
    advance();  // :
    auto node = make_node(NodeKind::Slice, start);
    auto ends_part = [this] {
      return check_delim(":") || check_delim("]") || check_delim(",");
    };
    if (lower) add(*node, "lower", std::move(lower));
    if (!ends_part()) add(*node, "upper", parse_expression());
    if (accept_delim(":")) {
      if (!ends_part()) add(*node, "step", parse_expression());
    }
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_atom() {
    const Token& t = cur();
    Span start = t.span;
    switch (t.kind) {
      case TokenKind::Identifier: {
        advance();
        auto node = make_node(NodeKind::Name, start);
        node->attributes.push_back(NodeAttribute{"id", Symbol{t.lexeme}});
        return node;
      }
      case TokenKind::Number:
        return parse_number();
      case TokenKind::String:
      case TokenKind::FStringSegment:
        return parse_strings();
      case TokenKind::Keyword: {
        auto node = make_node(NodeKind::Constant, start);
        if (t.lexeme == "True" || t.lexeme == "False") {
          node->attributes.push_back(NodeAttribute{"value", t.lexeme == "True"});
        } else if (t.lexeme == "None") {
          node->attributes.push_back(NodeAttribute{"value", std::monostate{}});
        } else if (t.lexeme == "lambda") {
          fail("lambda expressions are not supported");
        } else if (t.lexeme == "yield" || t.lexeme == "await") {
          fail("'" + t.lexeme + "' expressions are not supported");
        } else {
          fail("invalid syntax");
        }
        advance();
        return node;
      }
      case TokenKind::Delimiter:
        if (t.lexeme == "(") return parse_paren();
        if (t.lexeme == "[") return parse_list();
        if (t.lexeme == "{") return parse_dict();
        if (t.lexeme == "...") {
          advance();
          auto node = make_node(NodeKind::Constant, start);
          node->attributes.push_back(NodeAttribute{"value", Symbol{"Ellipsis"}});
          return node;
        }
        break;
      case TokenKind::Operator:
        if (t.lexeme == "*" || t.lexeme == "**") fail("starred expressions are not supported");
        break;
      default:
        break;
    }
    fail("invalid syntax");
  }

  std::unique_ptr<AstNode> parse_paren() {
    DepthGuard guard(*this);
    Span start = advance().span;  // (
    if (check_delim(")")) {
      advance();
      return make_node(NodeKind::Tuple, finish(start));
    }
    if (check_kw("yield")) fail("'yield' expressions are not supported");
    auto first = parse_expression();
    if (check_kw("for")) fail("generator expressions are not supported");
    if (!check_delim(",")) {
      expect_delim(")");
      return first;
    }
    auto tuple = make_node(NodeKind::Tuple, start);
    add(*tuple, "elts", std::move(first));
    while (accept_delim(",")) {
      if (check_delim(")")) break;
      add(*tuple, "elts", parse_expression());
    }
    expect_delim(")");
    tuple->span = finish(start);
    return tuple;
  }

  std::unique_ptr<AstNode> parse_list() {
    DepthGuard guard(*this);
    Span start = advance().span;  // [
    auto node = make_node(NodeKind::List, start);
    while (!check_delim("]")) {
      add(*node, "elts", parse_expression());
      if (check_kw("for")) fail("list comprehensions are not supported");
      if (!accept_delim(",")) break;
    }
    expect_delim("]");
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_dict() {
    DepthGuard guard(*this);
    Span start = advance().span;  // {
    auto node = make_node(NodeKind::Dict, start);
    std::vector<std::unique_ptr<AstNode>> values;
    while (!check_delim("}")) {
      if (check_op("**")) fail("dictionary unpacking is not supported");
      auto key = parse_expression();
      if (!check_delim(":")) {
        if (check_kw("for")) fail("comprehensions are not supported");
        fail("set displays are not supported");
      }
      advance();
      auto value = parse_expression();
      if (check_kw("for")) fail("dict comprehensions are not supported");
      add(*node, "keys", std::move(key));
      values.push_back(std::move(value));
      if (!accept_delim(",")) break;
    }
    expect_delim("}");
    for (auto& v : values) add(*node, "values", std::move(v));
    node->span = finish(start);
    return node;
  }

  std::unique_ptr<AstNode> parse_number() {
    const Token& t = advance();
    auto node = make_node(NodeKind::Constant, t.span);
    std::string digits;
    for (char c : t.lexeme) {
      if (c != '_') digits += c;
    }
    const bool is_float =
        digits.find_first_of(".eE") != std::string::npos &&
        !(digits.size() > 1 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X'));
    if (is_float) {
      double value = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec == std::errc::result_out_of_range) {
        // Underflow rounds to zero, overflow to infinity, like the host language.
        bool tiny = false;
        auto e = digits.find_first_of("eE");
        if (e != std::string::npos && digits[e + 1] == '-') tiny = true;
        value = tiny ? 0.0 : std::numeric_limits<double>::infinity();
      } else if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        fail_at(t, "invalid float literal");
      }
      node->attributes.push_back(NodeAttribute{"value", value});
      return node;
    }
    int base = 10;
    std::size_t skip = 0;
    if (digits.size() > 1 && digits[0] == '0') {
      char b = static_cast<char>(std::tolower(static_cast<unsigned char>(digits[1])));
      if (b == 'x') base = 16;
      if (b == 'o') base = 8;
      if (b == 'b') base = 2;
      if (base != 10) skip = 2;
    }
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data() + skip, digits.data() + digits.size(), value, base);
    if (ec == std::errc::result_out_of_range ||
        value > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail_at(t, "integer literal is too large");
    }
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      fail_at(t, "invalid integer literal");
    }
    node->attributes.push_back(NodeAttribute{"value", static_cast<std::int64_t>(value)});
    return node;
  }

  // ---- strings ------------------------------------------------------------

  std::unique_ptr<AstNode> parse_strings() {
    Span start = cur().span;
    bool formatted = false;
    std::vector<StringPart> parts;
    while (cur().kind == TokenKind::String || cur().kind == TokenKind::FStringSegment) {
      const Token& t = advance();
      if (t.kind == TokenKind::FStringSegment) {
        formatted = true;
        decode_fstring(t, parts);
      } else {
        decode_plain(t, parts);
      }
    }
    Span span = finish(start);
    if (!formatted) {
      auto node = make_node(NodeKind::StringLiteral, span);
      std::string value;
      for (auto& part : parts) value += std::get<LiteralPart>(part).text;
      node->attributes.push_back(NodeAttribute{"value", std::move(value)});
      return node;
    }
    auto node = make_node(NodeKind::FormattedString, span);
    append_parts(*node, "values", parts);
    return node;
  }

  static void append_parts(AstNode& node, std::string_view field, std::vector<StringPart>& parts) {
    for (auto& part : parts) {
      if (auto* lit = std::get_if<LiteralPart>(&part)) {
        if (lit->text.empty()) continue;
        auto seg = make_node(NodeKind::StringLiteral, lit->span);
        seg->attributes.push_back(NodeAttribute{"value", std::move(lit->text)});
        add(node, field, std::move(seg));
      } else {
        add(node, field, std::move(std::get<std::unique_ptr<AstNode>>(part)));
      }
    }
  }

  // Adds literal text, merging with a directly preceding literal part.
  static void push_literal(std::vector<StringPart>& parts, std::string text, const Span& span) {
    if (!parts.empty()) {
      if (auto* prev = std::get_if<LiteralPart>(&parts.back())) {
        if (prev->text.empty()) {
          prev->text = std::move(text);
          prev->span = span;
          return;
        }
        if (text.empty()) return;
        prev->text += text;
        prev->span = join(prev->span, span);
        return;
      }
    }
    parts.push_back(LiteralPart{std::move(text), span});
  }

  // Decodes one escape sequence starting at body[i] == '\\'. Appends to out
  // and returns the index after the sequence. Unknown escapes are kept.
  std::size_t decode_escape(std::string_view body, std::size_t i, std::size_t body_offset,
                            std::string& out) const {
    auto error = [&](const std::string& msg, std::size_t len) {
      Span s = lines_.span(body_offset + i, len);
      throw ParseError(ParsePhase::Parse, msg, s, std::string(body.substr(i, len)));
    };
    if (i + 1 >= body.size()) {
      out += '\\';
      return i + 1;
    }
    char c = body[i + 1];
    switch (c) {
      case '\n':
        return i + 2;
      case '\r':
        return (i + 2 < body.size() && body[i + 2] == '\n') ? i + 3 : i + 2;
      case '\\': out += '\\'; return i + 2;
      case '\'': out += '\''; return i + 2;
      case '"': out += '"'; return i + 2;
      case 'a': out += '\a'; return i + 2;
      case 'b': out += '\b'; return i + 2;
      case 'f': out += '\f'; return i + 2;
      case 'n': out += '\n'; return i + 2;
      case 'r': out += '\r'; return i + 2;
      case 't': out += '\t'; return i + 2;
      case 'v': out += '\v'; return i + 2;
      case 'x':
      case 'u':
      case 'U': {
        std::size_t width = c == 'x' ? 2 : c == 'u' ? 4 : 8;
        if (i + 2 + width > body.size()) error("truncated \\" + std::string(1, c) + " escape", 2);
        std::uint32_t cp = 0;
        for (std::size_t k = 0; k < width; ++k) {
          char h = body[i + 2 + k];
          if (!is_hex_digit(h)) error("truncated \\" + std::string(1, c) + " escape", 2 + k);
          cp = cp * 16 + static_cast<std::uint32_t>(
                             h <= '9' ? h - '0' : (std::tolower(static_cast<unsigned char>(h)) - 'a' + 10));
        }
        if (cp > 0x10FFFF) error("illegal Unicode character", 2 + width);
        if (cp >= 0xD800 && cp <= 0xDFFF) error("surrogate code points are not supported", 2 + width);
        append_utf8(out, cp);
        return i + 2 + width;
      }
      case 'N':
        error("named Unicode escapes are not supported", 2);
      default:
        break;
    }
    if (c >= '0' && c <= '7') {
      std::uint32_t cp = 0;
      std::size_t k = i + 1;
      while (k < body.size() && k < i + 4 && body[k] >= '0' && body[k] <= '7') {
        cp = cp * 8 + static_cast<std::uint32_t>(body[k] - '0');
        ++k;
      }
      append_utf8(out, cp);
      return k;
    }
    out += '\\';
    return i + 1;
  }

  static void normalize_newlines(std::string_view raw, std::string& out) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '\r') {
        out += '\n';
        if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
      } else {
        out += raw[i];
      }
    }
  }

  void decode_plain(const Token& t, std::vector<StringPart>& parts) const {
    StringPrefix p = read_prefix(t.lexeme);
    std::size_t open = p.prefix_len + p.quote_len;
    std::string_view body =
        std::string_view(t.lexeme).substr(open, t.lexeme.size() - open - p.quote_len);
    std::size_t body_offset = t.span.offset + open;
    std::string out;
    if (p.raw) {
      normalize_newlines(body, out);
    } else {
      std::size_t i = 0;
      while (i < body.size()) {
        if (body[i] == '\\') {
          i = decode_escape(body, i, body_offset, out);
        } else if (body[i] == '\r') {
          out += '\n';
          i += (i + 1 < body.size() && body[i + 1] == '\n') ? 2 : 1;
        } else {
          out += body[i++];
        }
      }
    }
    push_literal(parts, std::move(out), lines_.span(body_offset, body.size()));
  }

  void decode_fstring(const Token& t, std::vector<StringPart>& parts) const {
    StringPrefix p = read_prefix(t.lexeme);
    std::size_t open = p.prefix_len + p.quote_len;
    std::string_view body =
        std::string_view(t.lexeme).substr(open, t.lexeme.size() - open - p.quote_len);
    std::size_t body_offset = t.span.offset + open;
    std::size_t i = 0;
    parse_fstring_body(body, body_offset, p.raw, 0, i, parts);
    if (i < body.size()) {
      throw ParseError(ParsePhase::Parse, "f-string: single '}' is not allowed",
                       lines_.span(body_offset + i, 1), "}");
    }
  }

  // Literal text and holes from body[i...]. At nesting level 0 it runs to the
  // end of the body; inside a format spec it stops at the closing '}'.
  void parse_fstring_body(std::string_view body, std::size_t body_offset, bool raw, int level,
                          std::size_t& i, std::vector<StringPart>& parts) const {
    auto span_at = [&](std::size_t local, std::size_t len) {
      return lines_.span(body_offset + local, len);
    };
    auto error = [&](std::size_t local, const std::string& msg) {
      std::size_t len = local < body.size() ? 1 : 0;
      throw ParseError(ParsePhase::Parse, msg, span_at(local, len),
                       std::string(body.substr(std::min(local, body.size()), len)));
    };
    std::string literal;
    std::size_t lit_start = i;
    auto flush = [&](std::size_t end) {
      push_literal(parts, std::move(literal), span_at(lit_start, end - lit_start));
      literal.clear();
    };
    while (i < body.size()) {
      char c = body[i];
      if (c == '{' || c == '}') {
        if (level == 0 && i + 1 < body.size() && body[i + 1] == c) {
          literal += c;
          i += 2;
          continue;
        }
        if (c == '}') {
          if (level == 0) error(i, "f-string: single '}' is not allowed");
          break;
        }
        flush(i);
        parts.emplace_back(parse_hole(body, body_offset, raw, level, i));
        lit_start = i;
        continue;
      }
      if (c == '\\' && !raw) {
        if (i + 1 < body.size() && (body[i + 1] == '{' || body[i + 1] == '}')) {
          literal += '\\';
          ++i;
          continue;
        }
        i = decode_escape(body, i, body_offset, literal);
        continue;
      }
      if (c == '\r') {
        literal += '\n';
        i += (i + 1 < body.size() && body[i + 1] == '\n') ? 2 : 1;
        continue;
      }
      literal += c;
      ++i;
    }
    flush(i);
  }

  std::unique_ptr<AstNode> parse_hole(std::string_view body, std::size_t body_offset, bool raw,
                                      int level, std::size_t& i) const {
    auto error = [&](std::size_t local, const std::string& msg) {
      std::size_t len = local < body.size() ? 1 : 0;
      throw ParseError(ParsePhase::Parse, msg, lines_.span(body_offset + local, len),
                       std::string(body.substr(std::min(local, body.size()), len)));
    };
    if (level >= 2) error(i, "f-string: expressions nested too deeply");
    const std::size_t open = i;
    std::size_t j = i + 1;
    int depth = 0;
    while (j < body.size()) {
      char c = body[j];
      if (c == '\\') error(j, "f-string expression part cannot include a backslash");
      if (c == '#') error(j, "f-string expression part cannot include '#'");
      if (c == '\'' || c == '"') {
        bool triple = j + 2 < body.size() && body[j + 1] == c && body[j + 2] == c;
        std::size_t k = j + (triple ? 3 : 1);
        while (true) {
          if (k >= body.size()) error(j, "f-string: unterminated string");
          if (body[k] == c &&
              (!triple || (k + 2 < body.size() && body[k + 1] == c && body[k + 2] == c))) {
            k += triple ? 3 : 1;
            break;
          }
          ++k;
        }
        j = k;
        continue;
      }
      if (c == '(' || c == '[' || c == '{') {
        ++depth;
      } else if (c == ')' || c == ']' || (c == '}' && depth > 0)) {
        if (depth == 0) error(j, std::string("f-string: unmatched '") + c + "'");
        --depth;
      } else if (depth == 0) {
        if (c == '}' || c == ':') break;
        if (c == '!' && j + 1 < body.size() && body[j + 1] != '=') break;
        if ((c == '=' || c == '!' || c == '<' || c == '>') && j + 1 < body.size() &&
            body[j + 1] == '=') {
          j += 2;
          continue;
        }
        if (c == '=') error(j, "self-documenting f-string expressions are not supported");
      }
      ++j;
    }
    if (j >= body.size()) error(j, "f-string: expecting '}'");
    std::string_view expr_text = body.substr(open + 1, j - open - 1);
    if (expr_text.find_first_not_of(" \t\r\n\f") == std::string_view::npos) {
      error(open, "f-string: empty expression not allowed");
    }
    Span origin = lines_.span(body_offset + open + 1, expr_text.size());
    auto tokens = tokenize_fragment(expr_text, origin);
    Parser sub(std::move(tokens), source_, lines_, origin.end());
    auto value = sub.parse_fragment();

    auto hole = make_node(NodeKind::FormatHole, lines_.span(body_offset + open, 0));
    if (body[j] == '!') {
      if (j + 1 >= body.size() || (body[j + 1] != 'r' && body[j + 1] != 's' && body[j + 1] != 'a')) {
        error(j + 1, "f-string: invalid conversion character");
      }
      hole->attributes.push_back(NodeAttribute{"conversion", Symbol{std::string(1, body[j + 1])}});
      j += 2;
      if (j >= body.size() || (body[j] != ':' && body[j] != '}')) {
        error(j, "f-string: expecting '}'");
      }
    }
    add(*hole, "value", std::move(value));
    if (body[j] == ':') {
      ++j;
      std::size_t spec_start = j;
      std::vector<StringPart> spec_parts;
      parse_fstring_body(body, body_offset, raw, level + 1, j, spec_parts);
      auto spec = make_node(NodeKind::FormattedString,
                            lines_.span(body_offset + spec_start, j - spec_start));
      append_parts(*spec, "values", spec_parts);
      add(*hole, "format_spec", std::move(spec));
    }
    if (j >= body.size() || body[j] != '}') error(j, "f-string: expecting '}'");
    ++j;
    hole->span.length = (body_offset + j) - hole->span.offset;
    i = j;
    return hole;
  }

  std::vector<Token> tokens_;
  std::string_view source_;
  const LineMap& lines_;
  Token end_token_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  Span last_;
};

}  // namespace

SyntaxTree parse_program(std::shared_ptr<const SourceProgram> source) {
  std::string_view text = source->text;
  std::optional<ParseError> unclosed;
  auto tokens = tokenize_source(text, unclosed);
  std::size_t lexed_end = tokens.empty() ? 0 : tokens.back().span.end();
  LineMap lines(text);
  Parser parser(std::move(tokens), text, lines, text.size());
  std::unique_ptr<AstNode> root;
  try {
    root = parser.parse_module();
  } catch (const ParseError& e) {
    // A syntax error inside the open bracket is reported as such; running
    // into the end of input reports the bracket itself.
    if (unclosed && e.span().offset >= lexed_end) throw *unclosed;
    throw;
  }
  if (unclosed) throw *unclosed;
  return SyntaxTree(std::move(root), std::move(source));
}

SyntaxTree parse_program(std::string_view text) {
  auto source = std::make_shared<SourceProgram>();
  source->text = std::string(text);
  return parse_program(std::shared_ptr<const SourceProgram>(std::move(source)));
}

}  // namespace abcd
