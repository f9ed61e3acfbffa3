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

// Command-line front end. Everything goes through the C API in abcd/abcd.h.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abcd/abcd.h"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kManifest = 3 };

int exit_code_for(abcd_status status) {
  switch (status) {
    case ABCD_OK: return kOk;
    case ABCD_ERR_MANIFEST: return kManifest;
    case ABCD_ERR_CONFIG:
    case ABCD_ERR_ARGUMENT:
    case ABCD_ERR_MISMATCH: return kUsage;
    default: return kFailure;
  }
}

// Thrown to unwind out of a subcommand with a C API failure.
struct ApiFailure {
  abcd_status status;
  std::string context;
  std::string message;  // abcd_last_error() when empty
};

void check(abcd_status status, const std::string& context = {}) {
  if (status != ABCD_OK) throw ApiFailure{status, context, {}};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using ConfigHandle = Handle<abcd_config, abcd_config_free>;
using TreeHandle = Handle<abcd_tree, abcd_tree_free>;
using ReportHandle = Handle<abcd_report, abcd_report_free>;

struct OwnedString {
  char* ptr = nullptr;
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { abcd_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct Options {
  std::string config_path;
  std::string format;
  std::string output;
  std::optional<uint64_t> sample;
  std::optional<uint64_t> seed;
  std::vector<std::string> registry;
  std::string edge_mode;
  std::string token_aggregation;
  bool pooled = false;
  std::optional<uint32_t> threads;
  std::vector<std::string> inputs;
  std::string dataset_a;
  std::string dataset_b;
};

void write_output(const Options& opts, const std::string& data) {
  if (opts.output.empty() || opts.output == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  out << data;
  if (!out) throw ApiFailure{ABCD_ERR_IO, opts.output, "cannot write file"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiFailure{ABCD_ERR_IO, path, "cannot open file"};
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

abcd_format format_from_name(const std::string& name) {
  if (name == "json") return ABCD_FORMAT_JSON;
  if (name == "csv") return ABCD_FORMAT_CSV;
  if (name == "sexpr") return ABCD_FORMAT_SEXPR;
  return ABCD_FORMAT_TEXT;
}

// Defaults, then the config file (--config or $ABCD_CONFIG), then flags.
void build_config(const Options& opts, ConfigHandle& config) {
  std::string path = opts.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("ABCD_CONFIG"); env && *env) path = env;
  }
  if (path.empty()) {
    check(abcd_config_new(&config.ptr));
  } else {
    check(abcd_config_load(path.c_str(), &config.ptr));
  }
  if (!opts.registry.empty()) {
    std::vector<const char*> names;
    for (const auto& name : opts.registry) names.push_back(name.c_str());
    check(abcd_config_set_registry(config.ptr, names.data(), names.size()));
  }
  if (!opts.edge_mode.empty()) {
    check(abcd_config_set_edge_mode(config.ptr,
                                    opts.edge_mode == "tree" ? ABCD_EDGES_TREE : ABCD_EDGES_FIELD));
  }
  if (!opts.token_aggregation.empty()) {
    check(abcd_config_set_token_aggregation(config.ptr, opts.token_aggregation.c_str()));
  }
  if (opts.sample) check(abcd_config_set_sample_size(config.ptr, *opts.sample));
  if (opts.seed) check(abcd_config_set_seed(config.ptr, *opts.seed));
  if (opts.pooled) check(abcd_config_set_pooled(config.ptr, 1));
  if (opts.threads) check(abcd_config_set_threads(config.ptr, *opts.threads));
}

void parse_input(const std::string& path, TreeHandle& tree) {
  check(abcd_tree_parse_file(path.c_str(), &tree.ptr), path);
}

int run_analyze(const Options& opts) {
  ConfigHandle config;
  build_config(opts, config);
  TreeHandle tree;
  parse_input(opts.inputs.at(0), tree);
  OwnedString out;
  check(abcd_tree_analyze(tree.ptr, config.ptr, format_from_name(opts.format), &out.ptr));
  write_output(opts, out.str());
  return kOk;
}

int run_corpus(const Options& opts) {
  ConfigHandle config;
  build_config(opts, config);
  ReportHandle report;
  check(abcd_corpus_run(opts.inputs.at(0).c_str(), config.ptr, &report.ptr));
  for (size_t i = 0; i < abcd_report_warning_count(report.ptr); ++i) {
    std::cerr << "abcd: warning: " << abcd_report_warning(report.ptr, i) << "\n";
  }
  OwnedString out;
  check(abcd_report_render(report.ptr, format_from_name(opts.format), &out.ptr));
  write_output(opts, out.str());
  return kOk;
}

void load_report(const std::string& path, ReportHandle& report) {
  std::string text = read_file(path);
  check(abcd_report_from_json(text.c_str(), &report.ptr), path);
}

std::vector<std::string> dataset_names(const abcd_report* report) {
  std::vector<std::string> names;
  for (size_t i = 0; i < abcd_report_dataset_count(report); ++i) {
    names.emplace_back(abcd_report_dataset_name(report, i));
  }
  return names;
}

int run_compare(const Options& opts) {
  ReportHandle a, b;
  load_report(opts.inputs.at(0), a);
  load_report(opts.inputs.at(1), b);
  auto names_a = dataset_names(a.ptr);
  auto names_b = dataset_names(b.ptr);

  std::vector<std::pair<std::string, std::string>> pairs;
  if (!opts.dataset_a.empty() || !opts.dataset_b.empty()) {
    std::string da = opts.dataset_a, db = opts.dataset_b;
    if (da.empty()) da = names_a.size() == 1 ? names_a[0] : db;
    if (db.empty()) db = names_b.size() == 1 ? names_b[0] : da;
    pairs.emplace_back(da, db);
  } else if (names_a.size() == 1 && names_b.size() == 1) {
    pairs.emplace_back(names_a[0], names_b[0]);
  } else {
    for (const auto& name : names_a) {
      for (const auto& other : names_b) {
        if (name == other) pairs.emplace_back(name, name);
      }
    }
    if (pairs.empty()) {
      std::cerr << "abcd: the reports share no dataset; pick one with --dataset-a/--dataset-b\n";
      return kUsage;
    }
  }

  abcd_format format = format_from_name(opts.format);
  std::string data;
  if (format == ABCD_FORMAT_JSON && pairs.size() > 1) data = "[\n";
  for (size_t i = 0; i < pairs.size(); ++i) {
    OwnedString out;
    check(abcd_report_compare(a.ptr, pairs[i].first.c_str(), b.ptr, pairs[i].second.c_str(), format,
                              &out.ptr));
    std::string piece = out.str();
    if (format == ABCD_FORMAT_JSON && pairs.size() > 1) {
      while (!piece.empty() && piece.back() == '\n') piece.pop_back();
      data += piece + (i + 1 < pairs.size() ? ",\n" : "\n");
    } else {
      if (i > 0) data += "\n";
      data += piece;
    }
  }
  if (format == ABCD_FORMAT_JSON && pairs.size() > 1) data += "]\n";
  write_output(opts, data);
  return kOk;
}

int run_dump_ast(const Options& opts) {
  TreeHandle tree;
  parse_input(opts.inputs.at(0), tree);
  OwnedString out;
  check(abcd_tree_dump(tree.ptr, format_from_name(opts.format), &out.ptr));
  write_output(opts, out.str());
  return kOk;
}

int run_lint(const Options& opts) {
  ConfigHandle config;
  build_config(opts, config);
  TreeHandle tree;
  parse_input(opts.inputs.at(0), tree);
  OwnedString out;
  int has_errors = 0;
  check(abcd_tree_lint(tree.ptr, config.ptr, format_from_name(opts.format), &out.ptr, &has_errors));
  write_output(opts, out.str());
  return has_errors ? kFailure : kOk;
}

void add_output(CLI::App* cmd, Options& opts) {
  cmd->add_option("-o,--output", opts.output, "Write results to this file instead of stdout");
}

void add_config(CLI::App* cmd, Options& opts) {
  cmd->add_option("-c,--config", opts.config_path,
                  "JSON config file (default: $ABCD_CONFIG when set)");
}

void add_metric_flags(CLI::App* cmd, Options& opts) {
  add_config(cmd, opts);
  cmd->add_option("--registry", opts.registry, "VLM method names, comma separated")
      ->delimiter(',');
  cmd->add_option("--edge-mode", opts.edge_mode, "Edge counting mode")
      ->check(CLI::IsMember({"tree", "field"}));
  cmd->add_option("--token-aggregation", opts.token_aggregation, "Token mean aggregation")
      ->check(CLI::IsMember({"macro", "micro"}));
}

void add_format(CLI::App* cmd, Options& opts, const std::string& fallback,
                const std::map<std::string, std::string>& choices) {
  opts.format = fallback;
  std::vector<std::string> names;
  for (const auto& [name, internal] : choices) names.push_back(name);
  cmd->add_option("-f,--format", opts.format, "Output format")
      ->check(CLI::IsMember(names))
      ->transform([choices](std::string value) {
        auto it = choices.find(value);
        return it == choices.end() ? value : it->second;
      })
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abstract perception and compositional reasoning metrics for visual programs", "abcd"};
  app.set_version_flag("--version", std::string(abcd_version()));
  app.require_subcommand(1);

  Options analyze_opts, corpus_opts, compare_opts, dump_opts, lint_opts;

  auto* analyze = app.add_subcommand("analyze", "Metrics, VLM call sites and lint findings for one program");
  analyze->add_option("file", analyze_opts.inputs, "Program source")->required()->expected(1);
  add_metric_flags(analyze, analyze_opts);
  add_format(analyze, analyze_opts, "table", {{"table", "text"}, {"json", "json"}});
  add_output(analyze, analyze_opts);

  auto* corpus = app.add_subcommand("corpus", "Analyze a JSONL manifest and aggregate per dataset");
  corpus->add_option("manifest", corpus_opts.inputs, "JSONL manifest")->required()->expected(1);
  add_metric_flags(corpus, corpus_opts);
  corpus->add_option("--sample", corpus_opts.sample, "Sample N programs per dataset")
      ->check(CLI::PositiveNumber);
  corpus->add_option("--seed", corpus_opts.seed, "Sampling seed");
  corpus->add_flag("--pooled", corpus_opts.pooled, "Sample N programs from the whole corpus instead");
  corpus->add_option("--threads", corpus_opts.threads, "Worker threads (0 = hardware concurrency)")
      ->check(CLI::Range(0, 1024));
  add_format(corpus, corpus_opts, "table", {{"table", "text"}, {"json", "json"}, {"csv", "csv"}});
  add_output(corpus, corpus_opts);

  auto* compare = app.add_subcommand("compare", "Compare headline metrics of two corpus reports");
  compare->add_option("reports", compare_opts.inputs, "REPORT_A REPORT_B (JSON)")->required()->expected(2);
  compare->add_option("--dataset-a", compare_opts.dataset_a, "Dataset label in the first report");
  compare->add_option("--dataset-b", compare_opts.dataset_b, "Dataset label in the second report");
  add_format(compare, compare_opts, "text", {{"text", "text"}, {"json", "json"}});
  add_output(compare, compare_opts);

  auto* dump = app.add_subcommand("dump-ast", "Print the syntax tree of one program");
  dump->add_option("file", dump_opts.inputs, "Program source")->required()->expected(1);
  add_format(dump, dump_opts, "sexpr", {{"sexpr", "sexpr"}, {"json", "json"}});
  add_output(dump, dump_opts);

  auto* lint = app.add_subcommand("lint", "Check one program against the API description");
  lint->add_option("file", lint_opts.inputs, "Program source")->required()->expected(1);
  add_config(lint, lint_opts);
  add_format(lint, lint_opts, "text", {{"text", "text"}, {"json", "json"}});
  add_output(lint, lint_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return run_analyze(analyze_opts);
    if (*corpus) return run_corpus(corpus_opts);
    if (*compare) return run_compare(compare_opts);
    if (*dump) return run_dump_ast(dump_opts);
    if (*lint) return run_lint(lint_opts);
  } catch (const ApiFailure& failure) {
    std::string detail = failure.message.empty() ? abcd_last_error() : failure.message;
    std::cerr << "abcd: ";
    if (failure.status == ABCD_ERR_PARSE) {
      // The detail already reads "line:col: parse error: ...".
      std::cerr << failure.context << ":" << detail << "\n";
    } else {
      if (!failure.context.empty()) std::cerr << failure.context << ": ";
      std::cerr << abcd_status_name(failure.status) << ": " << detail << "\n";
    }
    return exit_code_for(failure.status);
  }
  return kUsage;
}
