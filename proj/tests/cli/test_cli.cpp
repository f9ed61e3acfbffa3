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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "support/fixtures.hpp"

using abcd::testing::fixture_path;
using abcd::testing::slurp;
using abcd::testing::spit;
using abcd::testing::TempDir;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

Result run(const std::vector<std::string>& args, const std::string& env = {}) {
  TempDir dir;
  std::string cmd = env.empty() ? "env -u ABCD_CONFIG " : "env " + env + " ";
  cmd += quote(ABCD_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote(dir.file("out")) + " 2>" + quote(dir.file("err"));
  int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir.file("out"));
  r.err = slurp(dir.file("err"));
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("analyze") {
  auto json = run({"analyze", fixture_path("fevori.vp"), "--format", "json"});
  CHECK(json.code == 0);
  CHECK(contains(json.out, "\"call_count\": 2"));
  CHECK(json.err.empty());

  auto table = run({"analyze", fixture_path("fevori.vp")});
  CHECK(table.code == 0);
  CHECK(contains(table.out, "ast nodes         129"));

  auto bad = run({"analyze", fixture_path("bad.vp")});
  CHECK(bad.code == 1);
  CHECK(bad.out.empty());
  CHECK(contains(bad.err, "bad.vp:1:7: parse error: "));

  auto missing = run({"analyze", "missing.vp"});
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "io error"));

  CHECK(run({"analyze", fixture_path("fevori.vp"), "--format", "csv"}).code == 2);
  CHECK(run({"analyze", fixture_path("fevori.vp"), "--bogus"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
}

TEST_CASE("dump-ast and lint") {
  auto dump = run({"dump-ast", fixture_path("pass.vp")});
  CHECK(dump.code == 0);
  CHECK(dump.out == "(Module (Pass))\n");
  CHECK(contains(run({"dump-ast", fixture_path("pass.vp"), "-f", "json"}).out, "\"kind\": \"Module\""));

  auto clean = run({"lint", fixture_path("fevori.vp")});
  CHECK(clean.code == 0);
  CHECK(clean.out.empty());
  auto dirty = run({"lint", fixture_path("bad_entry.vp")});
  CHECK(dirty.code == 1);
  CHECK(contains(dirty.out, "error: no module-level function named 'execute_command'"));
  CHECK(contains(dirty.out, "[entry-point]"));
}

TEST_CASE("corpus") {
  std::string manifest = fixture_path("corpus/manifest.jsonl");
  auto table = run({"corpus", manifest});
  CHECK(table.code == 0);
  CHECK(contains(table.out, "nextqa-style            1.25        5.67      70.50"));

  auto a = run({"corpus", manifest, "--sample", "2", "--seed", "7", "-f", "json"});
  auto b = run({"corpus", manifest, "--sample", "2", "--seed", "7", "-f", "json", "--threads", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "\"sample_size\": 2"));

  auto csv = run({"corpus", manifest, "-f", "csv"});
  CHECK(csv.out.rfind("dataset,n_analyzed,", 0) == 0);

  auto too_many = run({"corpus", manifest, "--sample", "10"});
  CHECK(too_many.code == 2);
  CHECK(contains(too_many.err, "exceeds"));

  TempDir dir;
  spit(dir.path() / "broken.jsonl", "{\"id\": \"x\"}\n");
  auto broken = run({"corpus", dir.file("broken.jsonl")});
  CHECK(broken.code == 3);
  CHECK(contains(broken.err, "broken.jsonl:1: missing field 'path'"));
  CHECK(run({"corpus", dir.file("absent.jsonl")}).code == 1);
}

TEST_CASE("exclusions warn on stderr and still succeed") {
  TempDir dir;
  abcd::testing::CorpusSpec spec;
  spec.files_per_dataset = 20;
  spec.lines = 8;
  spec.unparsable = {2};
  std::string manifest = abcd::testing::write_corpus(dir, spec);
  auto r = run({"corpus", manifest});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1/20 (5.00%)"));
  CHECK(contains(r.err, "warning: dataset 'synthetic'"));
}

TEST_CASE("config precedence") {
  TempDir dir;
  spit(dir.path() / "tree.json", R"({"edge_mode": "tree", "seed": 3})");
  std::string manifest = fixture_path("corpus/manifest.jsonl");

  auto from_file = run({"corpus", manifest, "--config", dir.file("tree.json"), "-f", "json"});
  CHECK(contains(from_file.out, "\"edge_mode\": \"tree\""));
  auto from_env = run({"corpus", manifest, "-f", "json"}, "ABCD_CONFIG=" + quote(dir.file("tree.json")));
  CHECK(contains(from_env.out, "\"edge_mode\": \"tree\""));
  auto flag_wins = run({"corpus", manifest, "--config", dir.file("tree.json"), "--edge-mode", "field", "-f", "json"});
  CHECK(contains(flag_wins.out, "\"edge_mode\": \"field\""));
  CHECK(contains(flag_wins.out, "\"seed\": 3"));

  spit(dir.path() / "bad.json", R"({"edge_mode": "graph"})");
  auto bad = run({"corpus", manifest, "--config", dir.file("bad.json")});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "config error"));
}

TEST_CASE("compare") {
  TempDir dir;
  std::string manifest = fixture_path("corpus/manifest.jsonl");
  REQUIRE(run({"corpus", manifest, "-f", "json", "-o", dir.file("a.json")}).code == 0);
  REQUIRE(run({"corpus", manifest, "-f", "json", "-o", dir.file("tree.json"), "--edge-mode", "tree"}).code == 0);

  auto same = run({"compare", dir.file("a.json"), dir.file("a.json")});
  CHECK(same.code == 0);
  CHECK(contains(same.out, "+0.00  equal"));
  CHECK_FALSE(contains(same.out, "greater"));

  auto trend = run({"compare", dir.file("a.json"), dir.file("a.json"), "--dataset-a", "nextqa-style",
                    "--dataset-b", "tim-style", "-f", "json"});
  CHECK(trend.code == 0);
  CHECK_FALSE(contains(trend.out, "\"less\""));
  CHECK_FALSE(contains(trend.out, "\"equal\""));

  auto mismatch = run({"compare", dir.file("a.json"), dir.file("tree.json")});
  CHECK(mismatch.code == 2);
  CHECK(contains(mismatch.err, "config hash"));

  spit(dir.path() / "junk.json", "{\"schema\": \"abcd-report\"}");
  CHECK(run({"compare", dir.file("a.json"), dir.file("junk.json")}).code == 1);
}

TEST_CASE("help and version") {
  auto help = run({"--help"});
  CHECK(help.code == 0);
  for (const char* sub : {"analyze", "corpus", "compare", "dump-ast", "lint"}) CHECK(contains(help.out, sub));
  auto corpus_help = run({"corpus", "--help"});
  CHECK(corpus_help.code == 0);
  for (const char* flag : {"--config", "--format", "--sample", "--seed", "--registry", "--edge-mode",
                           "--token-aggregation", "--pooled", "--threads", "--output"}) {
    CHECK(contains(corpus_help.out, flag));
  }
  CHECK(run({"--version"}).out == "0.1.0\n");
  CHECK(run({}).code == 2);
}
