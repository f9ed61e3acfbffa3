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

#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>
#include <thread>

#include "abcd/ast_metrics.hpp"
#include "abcd/errors.hpp"
#include "abcd/parser.hpp"
#include "abcd/tree_dump.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using abcd::testing::fixture_path;
using abcd::testing::slurp;

namespace {

// Every program fixture paired with its golden oracle dump.
std::map<std::string, std::string> fixture_programs() {
  std::map<std::string, std::string> out;
  for (const auto* dir : {"", "grammar", "corpus/nextqa", "corpus/tim", "corpus/tim_conquer"}) {
    for (const auto& entry : fs::directory_iterator(fixture_path(dir))) {
      if (entry.path().extension() != ".vp") continue;
      std::string stem = entry.path().stem().string();
      if (stem == "bad") continue;
      out[stem] = entry.path().string();
    }
  }
  return out;
}

std::map<std::string, std::size_t> golden_counts() {
  std::map<std::string, std::size_t> out;
  std::istringstream in(slurp(fixture_path("golden/counts.tsv")));
  std::string stem;
  std::size_t count = 0;
  while (in >> stem >> count) out[stem] = count;
  return out;
}

abcd::ParseError parse_error(const std::string& text) {
  try {
    abcd::parse_program(text);
  } catch (const abcd::ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  throw std::logic_error("unreachable");
}

void check_spans(const abcd::AstNode& node) {
  for (const auto& link : node.children) {
    CHECK(node.span.contains(link.node->span));
    check_spans(*link.node);
  }
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("fixture dumps match the oracle goldens byte for byte") {
    auto programs = fixture_programs();
    auto counts = golden_counts();
    REQUIRE(programs.size() >= 20);
    REQUIRE(programs.size() == counts.size());
    for (const auto& [stem, path] : programs) {
      CAPTURE(stem);
      auto tree = abcd::parse_program(slurp(path));
      std::string golden = slurp(fixture_path("golden/" + stem + ".sexpr"));
      CHECK(abcd::dump_tree(tree, abcd::DumpFormat::Sexpr) + "\n" == golden);
      CHECK(abcd::count_nodes(tree) == counts.at(stem));
    }
  }

  TEST_CASE("small programs") {
    CHECK(abcd::dump_sexpr(abcd::parse_program("pass").root()) == "(Module (Pass))");
    CHECK(abcd::dump_sexpr(abcd::parse_program("").root()) == "(Module)");
    CHECK(abcd::dump_sexpr(abcd::parse_program("x = 1\n").root()) ==
          "(Module (Assign (Name id=x) (Constant value=1)))");
    CHECK(abcd::dump_sexpr(abcd::parse_program("import os\nx = None").root()) ==
          "(Module (Assign (Name id=x) (Constant value=None)))");
    CHECK(abcd::dump_sexpr(abcd::parse_program("y = f'a{b!r:>4}'").root()) ==
          "(Module (Assign (Name id=y) (FormattedString (StringLiteral value=\"a\") "
          "(FormatHole conversion=r (Name id=b) (FormattedString (StringLiteral value=\">4\"))))))");
    CHECK(abcd::dump_sexpr(abcd::parse_program("z = a not in b").root()) ==
          "(Module (Assign (Name id=z) (Compare op=\"not in\" (Name id=a) (Name id=b))))");
  }

  TEST_CASE("both listings parse") {
    CHECK_NOTHROW(abcd::parse_program(slurp(fixture_path("fevori.vp"))));
    CHECK_NOTHROW(abcd::parse_program(slurp(fixture_path("conquer.vp"))));
  }

  TEST_CASE("malformed function header fails in the parse phase") {
    auto e = parse_error("def f(:\n    pass\n");
    CHECK(e.phase() == abcd::ParsePhase::Parse);
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 7);
    CHECK(std::string(e.what()) == "1:7: " + e.message());
  }

  TEST_CASE("lexical errors") {
    auto tab = parse_error("if x:\n\ty = 1\n");
    CHECK(tab.phase() == abcd::ParsePhase::Lex);
    CHECK(tab.span().line == 2);
    CHECK(tab.message() == "tabs are not allowed in indentation");

    auto unclosed = parse_error("x = (1,\n");
    CHECK(unclosed.phase() == abcd::ParsePhase::Lex);
    CHECK(unclosed.message() == "'(' was never closed");
    CHECK(unclosed.span().column == 5);

    CHECK(parse_error("x = 'abc\n").message() == "unterminated string literal");
    CHECK(parse_error("x = $\n").message() == "illegal character '$'");
    CHECK(parse_error(std::string("x = '\xff'\n")).message() == "invalid UTF-8 byte sequence");
  }

  TEST_CASE("constructs outside the grammar are rejected") {
    for (const char* text : {"class A: pass", "x = lambda: 1", "x = [i for i in y]", "def f(*a): pass",
                             "x = {1, 2}", "async def f(): pass", "x: int = 1", "del x",
                             "x = f'{a=}'", "@d\ndef f(): pass", "x = a if b else c"}) {
      CAPTURE(text);
      CHECK_THROWS_AS(abcd::parse_program(text), abcd::ParseError);
    }
    CHECK(parse_error("if x:\npass\n").message() == "expected an indented block");
    CHECK(parse_error("x = f'{a=}'").message() ==
          "self-documenting f-string expressions are not supported");
  }

  TEST_CASE("deep nesting is an error rather than a crash") {
    std::string text = "x = " + std::string(1000, '(') + "1" + std::string(1000, ')') + "\n";
    CHECK_THROWS_AS(abcd::parse_program(text), abcd::ParseError);
    std::string fine = "x = " + std::string(50, '(') + "1" + std::string(50, ')') + "\n";
    CHECK_NOTHROW(abcd::parse_program(fine));
  }

  TEST_CASE("parsing is deterministic across calls and threads") {
    std::string text = slurp(fixture_path("conquer.vp"));
    std::string first = abcd::dump_sexpr(abcd::parse_program(text).root());
    std::string from_thread;
    std::thread worker([&] { from_thread = abcd::dump_sexpr(abcd::parse_program(text).root()); });
    worker.join();
    CHECK(abcd::dump_sexpr(abcd::parse_program(text).root()) == first);
    CHECK(from_thread == first);
  }

  TEST_CASE("spans nest and generated programs parse") {
    abcd::testing::ProgramGenerator gen(42);
    for (int k = 0; k < 200; ++k) {
      std::string text = gen.program(30);
      CAPTURE(text);
      auto tree = abcd::parse_program(text);
      check_spans(tree.root());
    }
    check_spans(abcd::parse_program(slurp(fixture_path("fevori.vp"))).root());
  }
}

TEST_SUITE("tree_dump") {
  TEST_CASE("json round trip reproduces the tree") {
    for (const char* name : {"fevori.vp", "conquer.vp", "grammar/g06_literals.vp", "grammar/g07_fstrings.vp"}) {
      CAPTURE(name);
      auto tree = abcd::parse_program(slurp(fixture_path(name)));
      auto doc = abcd::tree_to_json(tree.root());
      auto back = abcd::tree_from_json(nlohmann::json::parse(doc.dump()));
      CHECK(abcd::dump_sexpr(*back) == abcd::dump_sexpr(tree.root()));
      CHECK(abcd::tree_to_json(*back).dump() == doc.dump());
    }
  }

  TEST_CASE("dumps are deterministic") {
    auto tree = abcd::parse_program(slurp(fixture_path("fevori.vp")));
    CHECK(abcd::dump_tree(tree, abcd::DumpFormat::Json) == abcd::dump_tree(tree, abcd::DumpFormat::Json));
    CHECK(abcd::dump_tree(tree, abcd::DumpFormat::Sexpr) ==
          abcd::dump_tree(abcd::parse_program(slurp(fixture_path("fevori.vp"))), abcd::DumpFormat::Sexpr));
  }

  TEST_CASE("json layout of a tiny tree") {
    auto doc = abcd::tree_to_json(abcd::parse_program("x = 1.5").root());
    CHECK(doc["kind"] == "Module");
    const auto& assign = doc["children"][0];
    CHECK(assign["field"] == "body");
    CHECK(assign["node"]["kind"] == "Assign");
    const auto& constant = assign["node"]["children"][1]["node"];
    CHECK(constant["attributes"][0]["type"] == "float");
    CHECK(constant["attributes"][0]["value"] == "1.5");
    CHECK(constant["span"]["column"] == 5);
  }

  TEST_CASE("malformed json trees are rejected with a pointer") {
    auto doc = nlohmann::json::parse(abcd::tree_to_json(abcd::parse_program("x = 1").root()).dump());
    doc["children"][0]["node"]["kind"] = "Lambda";
    try {
      abcd::tree_from_json(doc);
      FAIL("expected a schema error");
    } catch (const abcd::SchemaError& e) {
      CHECK(e.pointer() == "/children/0/node/kind");
    }
    CHECK_THROWS_AS(abcd::tree_from_json(nlohmann::json::array()), abcd::SchemaError);
  }

  TEST_CASE("floats print like Python repr") {
    CHECK(abcd::format_float_repr(0.1) == "0.1");
    CHECK(abcd::format_float_repr(3.0) == "3.0");
    CHECK(abcd::format_float_repr(1e16) == "1e+16");
    CHECK(abcd::format_float_repr(1e-5) == "1e-05");
    CHECK(abcd::format_float_repr(0.0001) == "0.0001");
    CHECK(abcd::format_float_repr(123456789012345678.0) == "1.2345678901234568e+17");
    CHECK(abcd::format_float_repr(1e22) == "1e+22");
  }
}
