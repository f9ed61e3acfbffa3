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

#include "abcd/query_tokenizer.hpp"

#include <locale>
#include <utility>

#include <boost/regex.hpp>

namespace abcd {

namespace {

// Whitespace as the reference tokenizer sees it (Unicode-aware \s).
#define ABCD_WS                                                                                \
  L"\\t\\n\\x{0b}\\f\\r\\x{1c}-\\x{1f} \\x{85}\\x{a0}\\x{1680}\\x{2000}-\\x{200a}\\x{2028}" \
  L"\\x{2029}\\x{202f}\\x{205f}\\x{3000}"

bool is_space(char32_t c) {
  switch (c) {
    case 0x20: case 0x85: case 0xa0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return (c >= 0x09 && c <= 0x0d) || (c >= 0x1c && c <= 0x1f) || (c >= 0x2000 && c <= 0x200a);
  }
}

std::wstring decode_utf8(std::string_view s) {
  std::wstring out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out += static_cast<wchar_t>(0xFFFD);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < len; ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out += static_cast<wchar_t>(cp);
    i += len;
  }
  return out;
}

void encode_utf8(std::string& out, char32_t cp) {
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

struct Rule {
  boost::wregex pattern;
  std::wstring replacement;
};

std::locale unicode_locale() {
  try {
    return std::locale("C.UTF-8");
  } catch (const std::runtime_error&) {
    return std::locale::classic();
  }
}

Rule rule(const std::locale& loc, const wchar_t* pattern, const wchar_t* replacement) {
  Rule r;
  r.pattern.imbue(loc);
  r.pattern.assign(pattern, boost::regex::perl | boost::regex::no_mod_m);
  r.replacement = replacement;
  return r;
}

// `$` below is written as (?=\n?\z) and `^` as \A, which is what they mean
// in the reference implementation's (non-multiline) regex dialect.
std::vector<Rule> build_rules() {
  const std::locale loc = unicode_locale();
  std::vector<Rule> rules;
  // Starting quotes.
  rules.push_back(rule(loc, L"([\u00ab\u201c\u2018\u201e]|[`]+)", L" $1 "));
  rules.push_back(rule(loc, L"\\A\"", L"``"));
  rules.push_back(rule(loc, L"(``)", L" $1 "));
  rules.push_back(rule(loc, L"([ \\(\\[{<])(\"|'{2})", L"$1 `` "));
  rules.push_back(rule(loc, L"(?i)(?<!\\w)(')(?!(?:re|ve|ll|m|t|s|d|n)\\b)(?=\\w)", L"$1 "));
  // Punctuation.
  rules.push_back(rule(loc,
                       L"([^\\.])(\\.)([\\]\\)}>\"'\u00bb\u201d\u2019 ]*)[" ABCD_WS L"]*(?=\\n?\\z)",
                       L"$1 $2 $3 "));
  rules.push_back(rule(loc, L"([:,])([^\\d])", L" $1 $2"));
  rules.push_back(rule(loc, L"([:,])(?=\\n?\\z)", L" $1 "));
  rules.push_back(rule(loc, L"\\.{2,}", L" $& "));
  rules.push_back(rule(loc, L"[;@#$%&]", L" $& "));
  rules.push_back(rule(loc, L"[\u2012-\u2015]", L" $& "));
  rules.push_back(rule(loc, L"([^\\.])(\\.)([\\]\\)}>\"']*)[" ABCD_WS L"]*(?=\\n?\\z)",
                       L"$1 $2$3 "));
  rules.push_back(rule(loc, L"[?!]", L" $& "));
  rules.push_back(rule(loc, L"([^'])' ", L"$1 ' "));
  rules.push_back(rule(loc, L"[*]", L" $& "));
  // Brackets and double dashes.
  rules.push_back(rule(loc, L"[\\]\\[\\(\\)\\{\\}\\<\\>]", L" $& "));
  rules.push_back(rule(loc, L"--", L" -- "));
  return rules;
}

std::vector<Rule> build_ending_rules() {
  const std::locale loc = unicode_locale();
  std::vector<Rule> rules;
  rules.push_back(rule(loc, L"([\u00bb\u201d\u2019])", L" $1 "));
  rules.push_back(rule(loc, L"''", L" '' "));
  rules.push_back(rule(loc, L"\"", L" '' "));
  rules.push_back(rule(loc, L"[" ABCD_WS L"]+", L" "));
  rules.push_back(rule(loc, L"([^' ])('[sS]|'[mM]|'[dD]|') ", L"$1 $2 "));
  rules.push_back(rule(loc, L"([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) ", L"$1 $2 "));
  // Contractions.
  for (const wchar_t* p : {L"(?i)\\b(can)(?#X)(not)\\b", L"(?i)\\b(d)(?#X)('ye)\\b",
                           L"(?i)\\b(gim)(?#X)(me)\\b", L"(?i)\\b(gon)(?#X)(na)\\b",
                           L"(?i)\\b(got)(?#X)(ta)\\b", L"(?i)\\b(lem)(?#X)(me)\\b",
                           L"(?i)\\b(more)(?#X)('n)\\b", L"(?i)\\b(wan)(?#X)(na)(?=[" ABCD_WS L"])",
                           L"(?i) ('t)(?#X)(is)\\b", L"(?i) ('t)(?#X)(was)\\b"}) {
    rules.push_back(rule(loc, p, L" $1 $2 "));
  }
  return rules;
}

const std::vector<Rule>& leading_rules() {
  static const std::vector<Rule> rules = build_rules();
  return rules;
}

const std::vector<Rule>& ending_rules() {
  static const std::vector<Rule> rules = build_ending_rules();
  return rules;
}

void apply(std::wstring& text, const std::vector<Rule>& rules) {
  for (const auto& r : rules) {
    text = boost::regex_replace(text, r.pattern, r.replacement,
                                boost::format_perl | boost::match_default);
  }
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  std::wstring work = decode_utf8(text);
  apply(work, leading_rules());
  work = L" " + work + L" ";
  apply(work, ending_rules());

  std::vector<std::string> tokens;
  std::string current;
  for (wchar_t wc : work) {
    auto c = static_cast<char32_t>(wc);
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(std::exchange(current, {}));
    } else {
      encode_utf8(current, c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace abcd
