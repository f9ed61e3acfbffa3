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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abcd/errors.hpp"
#include "abcd/source.hpp"

namespace abcd {

enum class TokenKind {
  Keyword,
  Identifier,
  Number,
  String,
  // One f-string literal, prefix and quotes included. Implicit concatenation
  // yields several adjacent segments.
  FStringSegment,
  Operator,
  Delimiter,
  Indent,
  Dedent,
  Newline,
  Comment,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  Span span;

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
};

// Lexes a whole VPLang file. Indentation becomes Indent/Dedent tokens, every
// logical line ends in Newline, comments are kept as Comment tokens.
// Throws ParseError (phase Lex) on tabs in indentation, inconsistent dedents,
// unterminated strings, unbalanced brackets, illegal characters and invalid
// UTF-8. Empty input yields no tokens.
std::vector<Token> tokenize_source(std::string_view text);

// As above, except that a bracket still open at end of input does not throw:
// the tokens lexed so far are returned and the error is stored in `unclosed`.
std::vector<Token> tokenize_source(std::string_view text, std::optional<ParseError>& unclosed);

// Lexes an embedded expression (an f-string hole) found at `origin` inside a
// larger source. No indentation processing; line breaks are insignificant.
std::vector<Token> tokenize_fragment(std::string_view text, const Span& origin);

bool is_keyword(std::string_view word);

}  // namespace abcd
