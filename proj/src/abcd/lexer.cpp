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

#include "abcd/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async",
    "await", "break",  "class",   "continue", "def",      "del",    "elif",
    "else",  "except", "finally", "for",      "from",     "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",  "raise",  "return",  "try",      "while",    "with",   "yield"};

constexpr std::array<std::string_view, 5> kThreeCharOps = {"**=", "//=", ">>=", "<<=", "..."};
constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "->", "**", "//", "==", "!=", "<=", ">=", "<<", ">>", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":="};
constexpr std::string_view kOneCharOps = "+-*/%@&|^~<>=";
constexpr std::string_view kDelimiters = "()[]{},:.;";

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Offset of the first byte that breaks UTF-8 well-formedness, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

class Lexer {
 public:
  Lexer(std::string_view text, const Span& origin, bool fragment,
        std::optional<ParseError>* unclosed = nullptr)
      : text_(text), fragment_(fragment), unclosed_(unclosed), base_offset_(origin.offset),
        line_(origin.line), column_(origin.column) {}

  std::vector<Token> run() {
    if (auto bad = find_invalid_utf8(text_)) {
      advance_to(*bad);
      fail("invalid UTF-8 byte sequence", 1);
    }
    if (fragment_) {
      while (pos_ < text_.size()) lex_line_content();
      check_brackets_closed();
      return std::move(tokens_);
    }
    while (pos_ < text_.size()) {
      if (at_line_start_ && brackets_.empty()) {
        if (!handle_indentation()) continue;
      }
      lex_line_content();
    }
    if (!brackets_.empty() && unclosed_) {
      const auto& open = brackets_.back();
      *unclosed_ = ParseError(ParsePhase::Lex, std::string("'") + open.ch + "' was never closed",
                              open.span, std::string(1, open.ch));
      return std::move(tokens_);
    }
    check_brackets_closed();
    if (line_has_tokens_) push(TokenKind::Newline, "", 0);
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenKind::Dedent, "", 0);
    }
    return std::move(tokens_);
  }

 private:
  struct OpenBracket {
    char ch;
    Span span;
  };

  void check_brackets_closed() const {
    if (brackets_.empty()) return;
    const auto& open = brackets_.back();
    throw ParseError(ParsePhase::Lex, std::string("'") + open.ch + "' was never closed",
                     open.span, std::string(1, open.ch));
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool at_end() const { return pos_ >= text_.size(); }

  Span span_here(std::size_t length) const {
    return Span{line_, column_, base_offset_ + pos_, length};
  }

  // Moves forward to absolute local index `target`, tracking line/column.
  void advance_to(std::size_t target) {
    while (pos_ < target) {
      char c = text_[pos_];
      if (c == '\n' || (c == '\r' && (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '\n'))) {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& message, std::size_t length) const {
    std::size_t avail = text_.size() > pos_ ? text_.size() - pos_ : 0;
    std::size_t len = std::min(length, avail);
    throw ParseError(ParsePhase::Lex, message, span_here(len),
                     std::string(text_.substr(std::min(pos_, text_.size()), len)));
  }

  void push(TokenKind kind, std::string_view lexeme, std::size_t length) {
    tokens_.push_back(Token{kind, std::string(lexeme), span_here(length)});
  }

  // Emits the token at [pos_, pos_+length) and advances over it.
  void emit(TokenKind kind, std::size_t length) {
    Span span = span_here(length);
    tokens_.push_back(Token{kind, std::string(text_.substr(pos_, length)), span});
    advance_to(pos_ + length);
    if (kind != TokenKind::Comment) line_has_tokens_ = true;
  }

  bool at_newline() const { return peek() == '\n' || peek() == '\r'; }

  void consume_newline() {
    if (peek() == '\r' && peek(1) == '\n') {
      advance_to(pos_ + 2);
    } else {
      advance_to(pos_ + 1);
    }
  }

  // Returns false when the line is blank or comment-only and was consumed.
  bool handle_indentation() {
    std::size_t width = 0;
    std::size_t i = pos_;
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ') {
        ++width;
      } else if (c == '\t') {
        advance_to(i);
        fail("tabs are not allowed in indentation", 1);
      } else if (c == '\f') {
        width = 0;
      } else {
        break;
      }
      ++i;
    }
    advance_to(i);
    at_line_start_ = false;
    if (at_end()) return false;
    if (at_newline()) {
      consume_newline();
      at_line_start_ = true;
      return false;
    }
    if (peek() == '#') {
      lex_comment();
      if (!at_end()) consume_newline();
      at_line_start_ = true;
      return false;
    }
    if (width > indents_.back()) {
      indents_.push_back(width);
      push(TokenKind::Indent, "", 0);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::Dedent, "", 0);
      }
      if (width != indents_.back()) {
        fail("unindent does not match any outer indentation level", 1);
      }
    }
    return true;
  }

  void lex_comment() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != '\n' && text_[end] != '\r') ++end;
    emit(TokenKind::Comment, end - pos_);
  }

  // Lexes tokens up to and including the end of the current physical line.
  void lex_line_content() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\f') {
        advance_to(pos_ + 1);
        continue;
      }
      if (c == '#') {
        lex_comment();
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (fragment_ || !brackets_.empty()) {
          consume_newline();
          continue;
        }
        if (line_has_tokens_) {
          Span span = span_here(c == '\r' && peek(1) == '\n' ? 2 : 1);
          tokens_.push_back(Token{TokenKind::Newline, "\n", span});
        }
        consume_newline();
        line_has_tokens_ = false;
        at_line_start_ = true;
        return;
      }
      if (c == '\\') {
        if (peek(1) == '\n' || (peek(1) == '\r')) {
          advance_to(pos_ + 1);
          consume_newline();
          if (at_end()) fail("unexpected end of file after line continuation", 0);
          continue;
        }
        fail("unexpected character after line continuation character", 1);
      }
      lex_token();
    }
  }

  void lex_token() {
    char c = peek();
    if (is_ident_start(c)) {
      if (auto len = string_prefix_length()) {
        lex_string(*len);
        return;
      }
      std::size_t end = pos_;
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
      if (end < text_.size() && static_cast<unsigned char>(text_[end]) >= 0x80) {
        advance_to(end);
        fail("illegal character in identifier", 1);
      }
      auto word = text_.substr(pos_, end - pos_);
      emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, end - pos_);
      return;
    }
    if (c == '"' || c == '\'') {
      lex_string(0);
      return;
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
      lex_number();
      return;
    }
    for (auto op : kThreeCharOps) {
      if (text_.substr(pos_, 3) == op) {
        emit(op == "..." ? TokenKind::Delimiter : TokenKind::Operator, 3);
        return;
      }
    }
    for (auto op : kTwoCharOps) {
      if (text_.substr(pos_, 2) == op) {
        emit(TokenKind::Operator, 2);
        return;
      }
    }
    if (kOneCharOps.find(c) != std::string_view::npos) {
      emit(TokenKind::Operator, 1);
      return;
    }
    if (kDelimiters.find(c) != std::string_view::npos) {
      track_bracket(c);
      emit(TokenKind::Delimiter, 1);
      return;
    }
    std::size_t len = 1;
    auto uc = static_cast<unsigned char>(c);
    if (uc >= 0xF0) len = 4;
    else if (uc >= 0xE0) len = 3;
    else if (uc >= 0xC0) len = 2;
    fail(std::string("illegal character '") + std::string(text_.substr(pos_, len)) + "'", len);
  }

  void track_bracket(char c) {
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back(OpenBracket{c, span_here(1)});
      return;
    }
    char want = c == ')' ? '(' : c == ']' ? '[' : c == '}' ? '{' : '\0';
    if (want == '\0') return;
    if (brackets_.empty()) {
      fail(std::string("unmatched '") + c + "'", 1);
    }
    if (brackets_.back().ch != want) {
      fail(std::string("closing parenthesis '") + c + "' does not match opening parenthesis '" +
               brackets_.back().ch + "'",
           1);
    }
    brackets_.pop_back();
  }

  // Length of a string prefix (r, u, f, b, rb, br, fr, rf in any case) when
  // the identifier-like run at pos_ is immediately followed by a quote.
  std::optional<std::size_t> string_prefix_length() const {
    std::size_t len = 0;
    while (len < 3 && pos_ + len < text_.size() && is_ident_start(text_[pos_ + len])) ++len;
    for (std::size_t k = 1; k <= std::min<std::size_t>(len, 2); ++k) {
      char q = peek(k);
      if (q != '"' && q != '\'') continue;
      std::string p;
      for (std::size_t j = 0; j < k; ++j) {
        p += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_ + j])));
      }
      if (p == "r" || p == "u" || p == "f" || p == "b" || p == "br" || p == "rb" ||
          p == "fr" || p == "rf") {
        return k;
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  void lex_string(std::size_t prefix_len) {
    std::string prefix;
    for (std::size_t j = 0; j < prefix_len; ++j) {
      prefix += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_ + j])));
    }
    if (prefix.find('b') != std::string::npos) {
      fail("bytes literals are not supported", prefix_len);
    }
    const bool is_fstring = prefix.find('f') != std::string::npos;
    std::size_t i = pos_ + prefix_len;
    const char quote = text_[i];
    const bool triple = i + 2 < text_.size() && text_[i + 1] == quote && text_[i + 2] == quote;
    i += triple ? 3 : 1;
    while (true) {
      if (i >= text_.size()) {
        fail(triple ? "unterminated triple-quoted string literal"
                    : "unterminated string literal",
             1);
      }
      char c = text_[i];
      if (c == '\\') {
        i += 2;
        continue;
      }
      if (!triple && (c == '\n' || c == '\r')) {
        fail("unterminated string literal", 1);
      }
      if (c == quote) {
        if (!triple) {
          ++i;
          break;
        }
        if (i + 2 < text_.size() && text_[i + 1] == quote && text_[i + 2] == quote) {
          i += 3;
          break;
        }
      }
      ++i;
    }
    emit(is_fstring ? TokenKind::FStringSegment : TokenKind::String, i - pos_);
  }

  // Accepts digit ( '_'? digit )* for the given digit class; returns end.
  template <class Pred>
  std::size_t scan_digits(std::size_t i, Pred is_d) {
    if (i >= text_.size() || !is_d(text_[i])) return i;
    ++i;
    while (i < text_.size()) {
      if (is_d(text_[i])) {
        ++i;
      } else if (text_[i] == '_' && i + 1 < text_.size() && is_d(text_[i + 1])) {
        i += 2;
      } else {
        break;
      }
    }
    return i;
  }

  void lex_number() {
    std::size_t i = pos_;
    bool is_float = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                          peek(1) == 'b' || peek(1) == 'B')) {
      char base = static_cast<char>(std::tolower(static_cast<unsigned char>(peek(1))));
      i += 2;
      if (i < text_.size() && text_[i] == '_') ++i;
      std::size_t end = base == 'x'   ? scan_digits(i, is_hex)
                        : base == 'o' ? scan_digits(i, [](char c) { return c >= '0' && c <= '7'; })
                                      : scan_digits(i, [](char c) { return c == '0' || c == '1'; });
      if (end == i) {
        advance_to(i);
        fail("invalid numeric literal", 1);
      }
      i = end;
    } else {
      std::size_t int_end = scan_digits(i, is_digit);
      i = int_end;
      if (i < text_.size() && text_[i] == '.') {
        is_float = true;
        ++i;
        i = scan_digits(i, is_digit);
      }
      if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
        std::size_t exp_end = scan_digits(j, is_digit);
        if (exp_end == j) {
          advance_to(i);
          fail("invalid decimal literal", 1);
        }
        is_float = true;
        i = exp_end;
      }
      if (!is_float) {
        auto digits = text_.substr(pos_, int_end - pos_);
        if (digits.size() > 1 && digits[0] == '0' &&
            digits.find_first_not_of("0_") != std::string_view::npos) {
          fail("leading zeros in decimal integer literals are not permitted", digits.size());
        }
      }
    }
    if (i < text_.size() && (text_[i] == 'j' || text_[i] == 'J')) {
      advance_to(i);
      fail("imaginary literals are not supported", 1);
    }
    if (i < text_.size() && (is_ident_char(text_[i]) || text_[i] == '.')) {
      advance_to(i);
      fail("invalid decimal literal", 1);
    }
    emit(TokenKind::Number, i - pos_);
  }

  std::string_view text_;
  bool fragment_;
  std::optional<ParseError>* unclosed_;
  std::size_t base_offset_;
  std::size_t pos_ = 0;
  std::uint32_t line_;
  std::uint32_t column_;
  bool at_line_start_ = true;
  bool line_has_tokens_ = false;
  std::vector<std::size_t> indents_{0};
  std::vector<OpenBracket> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::FStringSegment: return "fstring-segment";
    case TokenKind::Operator: return "operator";
    case TokenKind::Delimiter: return "delimiter";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::Newline: return "newline";
    case TokenKind::Comment: return "comment";
  }
  return "unknown";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize_source(std::string_view text) {
  return Lexer(text, Span{}, false).run();
}

std::vector<Token> tokenize_source(std::string_view text, std::optional<ParseError>& unclosed) {
  return Lexer(text, Span{}, false, &unclosed).run();
}

std::vector<Token> tokenize_fragment(std::string_view text, const Span& origin) {
  return Lexer(text, origin, true).run();
}

}  // namespace abcd
