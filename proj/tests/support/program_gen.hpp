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

// Seeded generator of random programs inside the accepted grammar. Every
// program it emits is also valid Python, so it doubles as oracle input.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abcd/prng.hpp"

namespace abcd::testing {

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

  // A program of roughly `target_lines` lines: an entry point plus helpers.
  std::string program(std::size_t target_lines) {
    lines_.clear();
    if (chance(1, 3)) emit(0, "import math");
    std::size_t helpers = target_lines / 60;
    for (std::size_t h = 0; h < helpers; ++h) {
      function("helper_" + std::to_string(h), 1 + pick(3), target_lines / (helpers + 2));
    }
    function("execute_command", 4, target_lines - std::min(target_lines, lines_.size()));
    std::string out;
    for (const auto& line : lines_) out += line + "\n";
    return out;
  }

 private:
  std::uint64_t pick(std::uint64_t n) { return rng_.below(n); }
  bool chance(std::uint64_t num, std::uint64_t den) { return rng_.below(den) < num; }

  template <class T>
  const T& choose(const std::vector<T>& items) {
    return items[pick(items.size())];
  }

  void emit(int indent, const std::string& text) {
    lines_.push_back(std::string(static_cast<std::size_t>(indent) * 4, ' ') + text);
  }

  std::string name() {
    static const std::vector<std::string> names = {
        "frame", "image_patch", "video_segment", "answer", "info", "caption", "count",
        "result", "items", "person", "score", "x", "y", "i", "j", "query", "patches"};
    return choose(names);
  }

  std::string method() {
    static const std::vector<std::string> methods = {
        "simple_query", "llm_query", "find", "exists", "frame_iterator", "trim",
        "compute_depth", "best_text_match", "crop", "verify_property", "select_answer"};
    return choose(methods);
  }

  std::string words() {
    static const std::vector<std::string> vocab = {
        "What", "is", "the", "person", "doing", "?", "Is", "there", "a", "dog", "in",
        "scene", "why", "did", "they", "leave", "after", "talking", "to", "mentor",
        "hero's", "U.S.", "\\\"quoted\\\"", "--", "it's", "(maybe)", "3.5", "x,y", "don't"};
    std::string out;
    std::size_t n = 1 + pick(8);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += choose(vocab);
    }
    return out;
  }

  std::string string_literal() {
    std::string body = words();
    switch (pick(4)) {
      case 0: return "'" + escape_for(body, '\'') + "'";
      case 1: return "f\"" + body + " {" + name() + "}\"";
      case 2: return "f'{" + name() + "!r} " + escape_for(body, '\'') + " {" + name() + ":>4}'";
      default: return "\"" + body + "\"";
    }
  }

  static std::string escape_for(const std::string& body, char quote) {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '\\' && i + 1 < body.size() && body[i + 1] == '"') {
        out += '"';
        ++i;
      } else if (body[i] == quote) {
        out += '\\';
        out += quote;
      } else {
        out += body[i];
      }
    }
    return out;
  }

  std::string atom() {
    switch (pick(9)) {
      case 0:
      case 1: return name();
      case 2: return std::to_string(pick(1000));
      case 3: return choose(std::vector<std::string>{"0.5", "2.0", "1e-3", "10.25", "3."});
      case 4: return choose(std::vector<std::string>{"True", "False", "None"});
      case 5:
      case 6: return string_literal();
      case 7: return name() + "." + choose(std::vector<std::string>{"width", "height", "left", "upper"});
      default: return "-" + std::to_string(1 + pick(9));
    }
  }

  std::string call(int depth) {
    std::string out = name() + "." + method() + "(";
    std::size_t args = pick(3);
    for (std::size_t a = 0; a < args; ++a) {
      if (a) out += ", ";
      out += a == 0 && chance(2, 3) ? string_literal() : expr(depth + 1);
    }
    if (chance(1, 4)) {
      out += args ? ", " : "";
      out += "to_yesno=" + choose(std::vector<std::string>{"True", "False"});
    }
    return out + ")";
  }

  std::string expr(int depth = 0) {
    if (depth >= 3) return atom();
    switch (pick(12)) {
      case 0: return call(depth);
      case 1: return "(" + expr(depth + 1) + " " +
                     choose(std::vector<std::string>{"+", "-", "*", "/", "//", "%"}) + " " +
                     expr(depth + 1) + ")";
      case 2: return "(" + expr(depth + 1) + " " + choose(std::vector<std::string>{"and", "or"}) +
                     " " + expr(depth + 1) + ")";
      case 3: return "(not " + expr(depth + 1) + ")";
      case 4: return "(" + expr(depth + 1) + " " +
                     choose(std::vector<std::string>{"==", "!=", "<", ">=", "in", "not in", "is",
                                                     "is not"}) +
                     " " + expr(depth + 1) + ")";
      case 5: {
        std::string out = "[";
        std::size_t n = pick(4);
        for (std::size_t k = 0; k < n; ++k) out += (k ? ", " : "") + expr(depth + 1);
        return out + "]";
      }
      case 6: return "(" + expr(depth + 1) + ", " + expr(depth + 1) + ")";
      case 7: {
        std::string out = "{";
        std::size_t n = pick(3);
        for (std::size_t k = 0; k < n; ++k) {
          out += (k ? ", " : "") + string_literal() + ": " + expr(depth + 1);
        }
        return out + "}";
      }
      case 8: return name() + "[" + expr(depth + 1) + "]";
      case 9: return name() + "[" + choose(std::vector<std::string>{"1:3", ":2", "::2", "-1:", "i:j"}) + "]";
      default: return atom();
    }
  }

  std::string target() {
    switch (pick(6)) {
      case 0: return name() + ", " + name();
      case 1: return name() + "[" + std::to_string(pick(4)) + "]";
      case 2: return name() + ".label";
      default: return name();
    }
  }

  void block(int indent, std::size_t budget, bool in_loop, bool in_function) {
    std::size_t start = lines_.size();
    statement(indent, in_loop, in_function, budget);
    while (lines_.size() - start < budget && chance(3, 4)) {
      statement(indent, in_loop, in_function, budget - (lines_.size() - start));
    }
  }

  void statement(int indent, bool in_loop, bool in_function, std::size_t budget) {
    bool nest = indent < 4 && budget > 3;
    switch (pick(nest ? 14 : 9)) {
      case 0:
      case 1:
      case 2: emit(indent, target() + " = " + expr()); break;
      case 3: emit(indent, name() + " " + choose(std::vector<std::string>{"+=", "-=", "*="}) + " " + expr()); break;
      case 4: emit(indent, call(0)); break;
      case 5:
        if (chance(1, 5)) emit(indent, "# " + words());
        if (chance(1, 6)) emit(0, "");
        emit(indent, name() + " = " + string_literal());
        break;
      case 6:
        if (in_loop) {
          emit(indent, chance(1, 2) ? "break" : "continue");
        } else {
          emit(indent, "pass");
        }
        break;
      case 7:
        if (in_function) {
          emit(indent, chance(1, 4) ? "return" : "return " + expr());
        } else {
          emit(indent, "pass");
        }
        break;
      case 8: emit(indent, "query = " + string_literal()); emit(indent, "answer = frame.simple_query(query)"); break;
      case 9:
      case 10: {
        emit(indent, "if " + expr() + ":");
        block(indent + 1, budget / 3, in_loop, in_function);
        std::size_t elifs = pick(3);
        for (std::size_t k = 0; k < elifs; ++k) {
          emit(indent, "elif " + expr() + ":");
          block(indent + 1, budget / 4, in_loop, in_function);
        }
        if (chance(1, 2)) {
          emit(indent, "else:");
          block(indent + 1, budget / 4, in_loop, in_function);
        }
        break;
      }
      case 11:
      case 12: {
        std::string tgt = chance(1, 2) ? "i, " + name() : name();
        std::string iter = chance(1, 2) ? "enumerate(" + name() + ")" : name() + "." + method() + "()";
        emit(indent, "for " + tgt + " in " + iter + ":");
        block(indent + 1, budget / 2, true, in_function);
        if (chance(1, 8)) {
          emit(indent, "else:");
          block(indent + 1, 2, in_loop, in_function);
        }
        break;
      }
      default:
        emit(indent, "while " + expr() + ":");
        block(indent + 1, budget / 3, true, in_function);
        break;
    }
  }

  void function(const std::string& fname, std::size_t params, std::size_t budget) {
    static const std::vector<std::string> pnames = {"video", "possible_answers", "query", "info"};
    std::string header = "def " + fname + "(";
    for (std::size_t p = 0; p < params; ++p) {
      header += (p ? ", " : "") + (p < pnames.size() ? pnames[p] : "p" + std::to_string(p));
    }
    if (fname != "execute_command" && chance(1, 3)) header += params ? ", limit=3" : "limit=3";
    header += ")";
    if (chance(1, 3)) header += "->[str, str, dict]";
    emit(0, header + ":");
    std::size_t start = lines_.size();
    emit(1, "video_segment = VideoSegment(video)");
    while (lines_.size() - start < std::max<std::size_t>(budget, 2)) {
      statement(1, false, true, budget - std::min(budget, lines_.size() - start));
    }
    emit(1, "return video_segment.select_answer(info, query, possible_answers)");
    emit(0, "");
  }

  SplitMix64 rng_;
  std::vector<std::string> lines_;
};

}  // namespace abcd::testing
