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

#include <set>
#include <string>

#include "abcd/config.hpp"
#include "abcd/corpus.hpp"
#include "abcd/errors.hpp"
#include "abcd/prng.hpp"
#include "abcd/report.hpp"
#include "support/fixtures.hpp"

using abcd::testing::fixture_path;
using abcd::testing::slurp;
using abcd::testing::TempDir;

namespace {

std::vector<std::string> ids(const abcd::CorpusManifest& m) {
  std::vector<std::string> out;
  for (const auto& e : m.entries) out.push_back(e.id);
  return out;
}

std::string manifest_error(const std::string& text) {
  try {
    abcd::parse_manifest(text, "/base", "m.jsonl");
  } catch (const abcd::ManifestError& e) {
    return e.what();
  }
  return "<no error>";
}

abcd::ProgramRecord analyzed(const std::string& dataset, std::size_t nodes, std::size_t calls,
                             std::vector<std::size_t> tokens) {
  abcd::ProgramRecord r;
  r.id = dataset + std::to_string(nodes);
  r.dataset = dataset;
  abcd::ProgramMetrics m;
  m.nodes = nodes;
  m.edges_tree = nodes - 1;
  m.edges_field = 2 * nodes;
  m.vlm_calls = calls;
  m.token_counts = tokens;
  if (!tokens.empty()) {
    double sum = 0;
    for (auto t : tokens) sum += static_cast<double>(t);
    m.token_mean = sum / static_cast<double>(tokens.size());
  }
  r.metrics = m;
  return r;
}

abcd::ProgramRecord excluded(const std::string& dataset) {
  abcd::ProgramRecord r;
  r.id = dataset + "-bad";
  r.dataset = dataset;
  r.status = abcd::ProgramStatus::Excluded;
  r.error = abcd::ParseErrorSummary{"parse", "invalid syntax", abcd::Span{1, 7, 6, 1}, ":"};
  return r;
}

abcd::CorpusReport fixture_report(const abcd::AnalysisConfig& config = {}) {
  auto manifest = abcd::load_manifest(fixture_path("corpus/manifest.jsonl"));
  return abcd::build_report(abcd::analyze_corpus(manifest, config), config);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    abcd::AnalysisConfig c;
    CHECK(c.registry == std::vector<std::string>{"simple_query", "llm_query"});
    CHECK(c.edge_mode == abcd::EdgeMode::Field);
    CHECK(c.token_aggregation == abcd::TokenAggregation::Macro);
    CHECK(c.seed == 0);
    CHECK_FALSE(c.sample_size);
    CHECK(c.exclusion_warn_threshold == 0.03);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("json round trip and overrides") {
    auto c = abcd::AnalysisConfig::from_json(nlohmann::json::parse(
        R"({"registry": ["simple_query"], "edge_mode": "tree", "token_aggregation": "micro",
            "sampling": "pooled", "sample_size": 512, "seed": 7, "threads": 3})"));
    CHECK(c.registry == std::vector<std::string>{"simple_query"});
    CHECK(c.edge_mode == abcd::EdgeMode::Tree);
    CHECK(c.sampling == abcd::SamplingMode::Pooled);
    CHECK(c.sample_size == 512u);
    CHECK(c.threads == 3);
    auto back = abcd::AnalysisConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
    back.threads = c.threads;  // not part of the serialized form
    CHECK(back == c);
    CHECK_FALSE(c.to_json().contains("threads"));

    abcd::AnalysisConfig merged;
    merged.merge_json(nlohmann::json::parse(R"({"seed": 11})"));
    CHECK(merged.seed == 11);
    CHECK(merged.edge_mode == abcd::EdgeMode::Field);
  }

  TEST_CASE("schema errors name the offending field") {
    auto error_of = [](const char* text) {
      try {
        abcd::AnalysisConfig::from_json(nlohmann::json::parse(text));
      } catch (const abcd::SchemaError& e) {
        return std::string(e.what());
      }
      return std::string("<no error>");
    };
    CHECK(error_of(R"({"edge_mode": "graph"})") == "/edge_mode: expected \"tree\" or \"field\"");
    CHECK(error_of(R"({"colour": 1})") == "/colour: unknown field");
    CHECK(error_of(R"({"seed": -1})") == "/seed: expected a non-negative integer");
    CHECK(error_of(R"([])") == "/: config must be a JSON object");
  }

  TEST_CASE("hash covers metric settings only") {
    abcd::AnalysisConfig a, b;
    b.seed = 99;
    b.threads = 8;
    b.sample_size = 3;
    CHECK(a.config_hash() == b.config_hash());
    b.edge_mode = abcd::EdgeMode::Tree;
    CHECK(a.config_hash() != b.config_hash());
    abcd::AnalysisConfig c;
    c.registry = {"llm_query", "simple_query"};
    CHECK(a.config_hash() == c.config_hash());
    CHECK(a.config_hash().size() == 16);
    CHECK(abcd::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(abcd::fnv1a_hex("a") == "af63dc4c8601ec8c");
  }

  TEST_CASE("load reports missing and malformed files") {
    TempDir dir;
    CHECK_THROWS_AS(abcd::AnalysisConfig::load(dir.file("absent.json")), abcd::IoError);
    abcd::testing::spit(dir.path() / "bad.json", "{not json");
    CHECK_THROWS_AS(abcd::AnalysisConfig::load(dir.file("bad.json")), abcd::ConfigError);
    abcd::testing::spit(dir.path() / "wrong.json", R"({"edge_mode": 3})");
    CHECK_THROWS_AS(abcd::AnalysisConfig::load(dir.file("wrong.json")), abcd::ConfigError);
    abcd::testing::spit(dir.path() / "ok.json", R"({"seed": 5})");
    CHECK(abcd::AnalysisConfig::load(dir.file("ok.json")).seed == 5);
  }

  TEST_CASE("validation") {
    abcd::AnalysisConfig c;
    c.exclusion_warn_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), abcd::ConfigError);
    c.exclusion_warn_threshold = 0.03;
    c.sample_size = 0;
    CHECK_THROWS_AS(c.validate(), abcd::ConfigError);
  }
}

TEST_SUITE("corpus") {
  TEST_CASE("splitmix64 reference outputs") {
    abcd::SplitMix64 zero(0);
    CHECK(zero.next() == 0xe220a8397b1dcdafULL);
    CHECK(zero.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(zero.next() == 0x06c45d188009454fULL);
    abcd::SplitMix64 other(1234567);
    CHECK(other.next() == 6457827717110365317ULL);
    CHECK(other.next() == 3203168211198807973ULL);
    abcd::SplitMix64 bounded(3);
    for (int i = 0; i < 1000; ++i) CHECK(bounded.below(7) < 7);
  }

  TEST_CASE("manifest parsing") {
    auto m = abcd::parse_manifest(
        "{\"id\": \"a\", \"path\": \"x/a.vp\", \"dataset\": \"d1\"}\n\n"
        "{\"id\": \"b\", \"path\": \"/abs/b.vp\", \"dataset\": \"d2\"}\n",
        "/base", "m.jsonl");
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].resolved_path == "/base/x/a.vp");
    CHECK(m.entries[1].resolved_path == "/abs/b.vp");
    CHECK(m.entries[1].line == 3);
    CHECK(abcd::dataset_labels(m) == std::vector<std::string>{"d1", "d2"});
  }

  TEST_CASE("manifest errors carry line numbers") {
    CHECK(manifest_error("{\"id\": \"a\", \"path\": \"a.vp\"}\n") == "m.jsonl:1: missing field 'dataset'");
    CHECK(manifest_error("\nnot json\n") == "m.jsonl:2: not valid JSON");
    CHECK(manifest_error("{\"id\": \"\", \"path\": \"a\", \"dataset\": \"d\"}") == "m.jsonl:1: field 'id' is empty");
    CHECK(manifest_error("{\"id\": \"a\", \"path\": \"a\", \"dataset\": \"d\", \"x\": 1}") ==
          "m.jsonl:1: unknown field 'x'");
    CHECK(manifest_error("{\"id\": 1, \"path\": \"a\", \"dataset\": \"d\"}") ==
          "m.jsonl:1: field 'id' must be a string");
    CHECK(manifest_error("{\"id\": \"a\", \"path\": \"a\", \"dataset\": \"d\"}\n"
                         "{\"id\": \"a\", \"path\": \"b\", \"dataset\": \"d\"}\n") ==
          "m.jsonl: duplicate id 'a' on lines 1 and 2");
    CHECK_THROWS_AS(abcd::load_manifest("/nonexistent/manifest.jsonl"), abcd::IoError);
  }

  TEST_CASE("seeded sampling") {
    TempDir dir;
    abcd::testing::CorpusSpec spec;
    spec.datasets = {"a", "b"};
    spec.files_per_dataset = 20;
    spec.lines = 5;
    auto manifest = abcd::load_manifest(abcd::testing::write_corpus(dir, spec));

    auto s1 = abcd::sample_corpus(manifest, 5, 1);
    CHECK(ids(s1) == ids(abcd::sample_corpus(manifest, 5, 1)));
    CHECK(ids(s1) != ids(abcd::sample_corpus(manifest, 5, 2)));
    CHECK(s1.entries.size() == 10);
    std::size_t in_a = 0;
    for (const auto& e : s1.entries) in_a += e.dataset == "a";
    CHECK(in_a == 5);
    // Manifest order is kept.
    std::size_t last = 0;
    for (const auto& e : s1.entries) {
      CHECK(e.line > last);
      last = e.line;
    }
    CHECK(ids(abcd::sample_corpus(manifest, 20, 9)) == ids(manifest));

    auto pooled = abcd::sample_corpus(manifest, 7, 1, abcd::SamplingMode::Pooled);
    CHECK(pooled.entries.size() == 7);

    CHECK_THROWS_AS(abcd::sample_corpus(manifest, 21, 1), abcd::ConfigError);
    CHECK_THROWS_AS(abcd::sample_corpus(manifest, 0, 1), abcd::ConfigError);
    CHECK_NOTHROW(abcd::sample_corpus(manifest, 40, 1, abcd::SamplingMode::Pooled));
  }

  TEST_CASE("exclusions and the warning threshold") {
    for (std::size_t planted : {2u, 3u, 5u}) {
      CAPTURE(planted);
      TempDir dir;
      abcd::testing::CorpusSpec spec;
      spec.files_per_dataset = 100;
      spec.lines = 10;
      for (std::size_t i = 0; i < planted; ++i) spec.unparsable.insert(10 * i + 3);
      auto manifest = abcd::load_manifest(abcd::testing::write_corpus(dir, spec));
      auto run = abcd::analyze_corpus(manifest, abcd::AnalysisConfig{});
      REQUIRE(run.exclusions.size() == 1);
      CHECK(run.exclusions[0].excluded == planted);
      CHECK(run.exclusions[0].fraction == doctest::Approx(planted / 100.0).epsilon(1e-12));
      CHECK(run.exclusions[0].warning == (planted == 5));
      CHECK(run.warnings.size() == (planted == 5 ? 1u : 0u));
      const auto& bad = run.records[3];
      CHECK(bad.status == abcd::ProgramStatus::Excluded);
      REQUIRE(bad.error);
      CHECK(bad.error->phase == "parse");
      CHECK(bad.error->span.line == 1);
      CHECK_FALSE(bad.metrics);
    }
  }

  TEST_CASE("missing program files abort the run") {
    TempDir dir;
    abcd::testing::spit(dir.path() / "m.jsonl", "{\"id\": \"a\", \"path\": \"nope.vp\", \"dataset\": \"d\"}\n");
    auto manifest = abcd::load_manifest(dir.file("m.jsonl"));
    CHECK_THROWS_AS(abcd::analyze_corpus(manifest, abcd::AnalysisConfig{}), abcd::IoError);
  }

  TEST_CASE("serial and concurrent runs agree") {
    TempDir dir;
    abcd::testing::CorpusSpec spec;
    spec.datasets = {"a", "b", "c"};
    spec.files_per_dataset = 30;
    spec.unparsable = {4, 50};
    auto manifest = abcd::load_manifest(abcd::testing::write_corpus(dir, spec));
    abcd::AnalysisConfig serial;
    serial.threads = 1;
    abcd::AnalysisConfig concurrent;
    concurrent.threads = 6;
    auto a = abcd::build_report(abcd::analyze_corpus(manifest, serial), serial);
    auto b = abcd::build_report(abcd::analyze_corpus(manifest, concurrent), concurrent);
    CHECK(abcd::serialize_report(a) == abcd::serialize_report(b));
  }
}

TEST_SUITE("report") {
  TEST_CASE("aggregation") {
    std::vector<abcd::ProgramRecord> records = {analyzed("d", 1, 0, {}), analyzed("d", 2, 1, {4}),
                                                analyzed("d", 3, 2, {2, 6}), analyzed("d", 4, 1, {}),
                                                excluded("d")};
    auto s = abcd::aggregate(records, 0.03).at(0);
    CHECK(s.n_analyzed == 4);
    CHECK(s.n_excluded == 1);
    CHECK(s.exclusion_fraction == doctest::Approx(0.2));
    CHECK(s.warning);
    CHECK(*s.ast_nodes.mean == doctest::Approx(2.5));
    CHECK(*s.ast_nodes.stddev == doctest::Approx(1.118033988749895));
    CHECK(*s.vlm_calls.mean == doctest::Approx(1.0));
    // Macro: mean of the two programs that have token means (4 and 4).
    CHECK(*s.vlm_tokens_macro.mean == doctest::Approx(4.0));
    // Micro: mean over the three sites 4, 2, 6.
    CHECK(*s.vlm_tokens_micro.mean == doctest::Approx(4.0));
    CHECK(*s.vlm_tokens_micro.stddev == doctest::Approx(1.632993161855452));

    auto none = abcd::aggregate({analyzed("e", 5, 0, {}), excluded("f")}, 0.03);
    CHECK_FALSE(none.at(0).vlm_tokens_macro.mean);
    CHECK_FALSE(none.at(1).ast_nodes.mean);
    CHECK(none.at(1).exclusion_fraction == 1.0);
  }

  TEST_CASE("fixture corpus trend") {
    auto report = fixture_report();
    REQUIRE(report.datasets.size() == 3);
    const auto& nq = report.datasets[0];
    const auto& tim = report.datasets[1];
    const auto& tc = report.datasets[2];
    CHECK(nq.dataset == "nextqa-style");
    CHECK(tc.dataset == "tim-conquer-style");
    CHECK(*tc.ast_nodes.mean > *tim.ast_nodes.mean);
    CHECK(*tim.ast_nodes.mean > *nq.ast_nodes.mean);
    CHECK(*tc.ast_edges_field.mean > *tim.ast_edges_field.mean);
    CHECK(*tim.ast_edges_field.mean > *nq.ast_edges_field.mean);
    CHECK(*tc.vlm_calls.mean > *nq.vlm_calls.mean);
    CHECK(*tc.vlm_tokens_macro.mean > *nq.vlm_tokens_macro.mean);
    CHECK(*nq.ast_nodes.mean == doctest::Approx(70.5));
  }

  TEST_CASE("json round trip") {
    auto report = fixture_report();
    std::string text = abcd::serialize_report(report);
    auto back = abcd::deserialize_report(text);
    CHECK(back == report);
    CHECK(abcd::serialize_report(back) == text);

    auto doc = nlohmann::json::parse(text);
    CHECK(doc["schema"] == "abcd-report");
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["programs"].size() == 12);
  }

  TEST_CASE("tampered reports are rejected") {
    auto doc = nlohmann::json::parse(abcd::serialize_report(fixture_report()));
    auto reject = [](nlohmann::json d, const std::string& pointer) {
      try {
        abcd::report_from_json(d);
        FAIL("expected a schema error at " << pointer);
      } catch (const abcd::SchemaError& e) {
        CHECK(e.pointer() == pointer);
      }
    };
    auto d1 = doc;
    d1["datasets"][0]["n_analyzed"] = "four";
    reject(d1, "/datasets/0/n_analyzed");
    auto d2 = doc;
    d2["schema_version"] = 2;
    reject(d2, "/schema_version");
    auto d3 = doc;
    d3["programs"][0]["metrics"].erase("ast");
    reject(d3, "/programs/0/metrics");
    auto d4 = doc;
    d4["extra"] = true;
    reject(d4, "/extra");
    CHECK_THROWS_AS(abcd::deserialize_report("{"), abcd::SchemaError);
  }

  TEST_CASE("empty corpus report") {
    abcd::AnalysisConfig config;
    auto report = abcd::build_report(abcd::CorpusRun{}, config);
    CHECK(report.datasets.empty());
    auto back = abcd::deserialize_report(abcd::serialize_report(report));
    CHECK(back == report);
    CHECK(abcd::render_table(report) ==
          "Dataset  VLM Calls  VLM Tokens  AST Nodes  AST Edges  AST Edges (tree)  Excluded\n");
  }

  TEST_CASE("table and csv rendering") {
    abcd::CorpusReport report;
    abcd::DatasetSummary s;
    s.dataset = "tim";
    s.n_analyzed = 97;
    s.n_excluded = 3;
    s.exclusion_fraction = 0.03;
    s.vlm_calls = {1.966, 0.5};
    s.vlm_tokens_macro = {20.6666, 3.0};
    s.ast_nodes = {141.805, 10.0};
    s.ast_edges_field = {205.0649, 12.0};
    s.ast_edges_tree = {140.805, 10.0};
    report.datasets.push_back(s);
    abcd::DatasetSummary empty;
    empty.dataset = "none";
    empty.n_excluded = 2;
    empty.exclusion_fraction = 1.0;
    report.datasets.push_back(empty);
    report.config_hash = report.config.config_hash();

    CHECK(abcd::render_table(report) ==
          "Dataset  VLM Calls  VLM Tokens  AST Nodes  AST Edges  AST Edges (tree)       Excluded\n"
          "tim           1.97       20.67     141.81     205.06            140.81  3/100 (3.00%)\n"
          "none           n/a         n/a        n/a        n/a               n/a  2/2 (100.00%)\n");

    std::string csv = abcd::render_csv(report);
    CHECK(csv.rfind("dataset,n_analyzed,n_excluded,exclusion_fraction,vlm_calls_mean,vlm_calls_stddev,", 0) == 0);
    CHECK(csv.find("\ntim,97,3,0.030000,1.966000,0.500000,20.666600,3.000000,,,141.805000,10.000000,"
                   "140.805000,10.000000,205.064900,12.000000\n") != std::string::npos);
    CHECK(csv.find("\nnone,0,2,1.000000,,,,,,,,,,,,\n") != std::string::npos);
  }

  TEST_CASE("comparison") {
    auto report = fixture_report();
    auto ab = abcd::compare_reports(report, "nextqa-style", report, "tim-style");
    auto ba = abcd::compare_reports(report, "tim-style", report, "nextqa-style");
    REQUIRE(ab.metrics.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CAPTURE(ab.metrics[i].metric);
      CHECK(ab.metrics[i].verdict == abcd::Verdict::Greater);
      CHECK(ba.metrics[i].verdict == abcd::Verdict::Less);
      CHECK(*ab.metrics[i].delta == doctest::Approx(-*ba.metrics[i].delta));
    }
    CHECK(ab.metrics[2].metric == "ast_nodes");
    CHECK(*ab.metrics[2].delta == doctest::Approx(54.5));

    auto same = abcd::compare_reports(report, "tim-style", report, "tim-style");
    for (const auto& m : same.metrics) {
      CHECK(m.verdict == abcd::Verdict::Equal);
      CHECK(*m.delta == 0.0);
    }

    abcd::AnalysisConfig tree_mode;
    tree_mode.edge_mode = abcd::EdgeMode::Tree;
    auto other = fixture_report(tree_mode);
    CHECK_THROWS_AS(abcd::compare_reports(report, "tim-style", other, "tim-style"), abcd::ConfigMismatchError);
    CHECK_THROWS_AS(abcd::compare_reports(report, "gqa", report, "tim-style"), abcd::ConfigError);
  }

  TEST_CASE("verdicts compare two-decimal values") {
    abcd::DatasetSummary a, b;
    a.dataset = "a";
    b.dataset = "b";
    a.vlm_calls = {1.001, 0.0};
    b.vlm_calls = {1.004, 0.0};
    a.ast_nodes = {10.0, 0.0};
    b.ast_nodes = {10.02, 0.0};
    auto c = abcd::compare(a, b, abcd::AnalysisConfig{});
    CHECK(c.metrics[0].verdict == abcd::Verdict::Equal);
    CHECK(c.metrics[1].verdict == abcd::Verdict::Undefined);
    CHECK_FALSE(c.metrics[1].delta);
    CHECK(c.metrics[2].verdict == abcd::Verdict::Greater);
    CHECK(abcd::render_comparison(c) ==
          "A: a\nB: b\n"
          "Metric          a      b  Delta (B-A)  Verdict\n"
          "vlm_calls    1.00   1.00        +0.00  equal\n"
          "vlm_tokens    n/a    n/a          n/a  undefined\n"
          "ast_nodes   10.00  10.02        +0.02  greater\n"
          "ast_edges     n/a    n/a          n/a  undefined\n");
  }
}
