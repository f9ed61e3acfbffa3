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

#include "abcd/abcd.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "abcd/analysis.hpp"
#include "abcd/config.hpp"
#include "abcd/corpus.hpp"
#include "abcd/errors.hpp"
#include "abcd/parser.hpp"
#include "abcd/report.hpp"
#include "abcd/tree_dump.hpp"

struct abcd_config {
  abcd::AnalysisConfig value;
};

struct abcd_tree {
  explicit abcd_tree(abcd::SyntaxTree t) : tree(std::move(t)) {}
  abcd::SyntaxTree tree;
};

struct abcd_report {
  abcd::CorpusReport value;
};

namespace {

thread_local std::string g_last_error;

abcd_status fail(abcd_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
abcd_status guarded(Body&& body) {
  try {
    return body();
  } catch (const abcd::ParseError& e) {
    return fail(ABCD_ERR_PARSE, std::to_string(e.span().line) + ":" + std::to_string(e.span().column) +
                                    ": " + abcd::to_string(e.phase()) + " error: " + e.message());
  } catch (const abcd::IoError& e) {
    return fail(ABCD_ERR_IO, e.what());
  } catch (const abcd::ManifestError& e) {
    return fail(ABCD_ERR_MANIFEST, e.what());
  } catch (const abcd::ConfigError& e) {
    return fail(ABCD_ERR_CONFIG, e.what());
  } catch (const abcd::SchemaError& e) {
    return fail(ABCD_ERR_SCHEMA, e.what());
  } catch (const abcd::ConfigMismatchError& e) {
    return fail(ABCD_ERR_MISMATCH, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ABCD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ABCD_ERR_INTERNAL, e.what());
  }
}

abcd_status give_string(const std::string& text, char** out) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (!buf) return fail(ABCD_ERR_INTERNAL, "out of memory");
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  *out = buf;
  return ABCD_OK;
}

abcd_status null_argument(const char* name) {
  return fail(ABCD_ERR_ARGUMENT, std::string("argument '") + name + "' must not be null");
}

const abcd::AnalysisConfig& config_or_default(const abcd_config* config) {
  static const abcd::AnalysisConfig defaults;
  return config ? config->value : defaults;
}

abcd_status parse_json_config(const std::string& text, abcd_config** out) {
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) return fail(ABCD_ERR_CONFIG, "config is not valid JSON");
  auto config = std::make_unique<abcd_config>();
  config->value = abcd::AnalysisConfig::from_json(doc);
  *out = config.release();
  return ABCD_OK;
}

}  // namespace

extern "C" {

const char* abcd_version(void) { return abcd::kToolVersion.data(); }

const char* abcd_status_name(abcd_status status) {
  switch (status) {
    case ABCD_OK: return "ok";
    case ABCD_ERR_PARSE: return "parse error";
    case ABCD_ERR_IO: return "io error";
    case ABCD_ERR_MANIFEST: return "manifest error";
    case ABCD_ERR_CONFIG: return "config error";
    case ABCD_ERR_SCHEMA: return "schema error";
    case ABCD_ERR_ARGUMENT: return "invalid argument";
    case ABCD_ERR_MISMATCH: return "config mismatch";
    case ABCD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* abcd_last_error(void) { return g_last_error.c_str(); }

void abcd_string_free(char* text) { std::free(text); }

abcd_status abcd_config_new(abcd_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new abcd_config();
    return ABCD_OK;
  });
}

abcd_status abcd_config_from_json(const char* json, abcd_config** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    try {
      return parse_json_config(json, out);
    } catch (const abcd::SchemaError& e) {
      return fail(ABCD_ERR_CONFIG, std::string("config ") + e.what());
    }
  });
}

abcd_status abcd_config_load(const char* path, abcd_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto config = std::make_unique<abcd_config>();
    config->value = abcd::AnalysisConfig::load(path);
    *out = config.release();
    return ABCD_OK;
  });
}

void abcd_config_free(abcd_config* config) { delete config; }

abcd_status abcd_config_set_registry(abcd_config* config, const char* const* names, size_t count) {
  if (!config) return null_argument("config");
  if (!names && count) return null_argument("names");
  return guarded([&] {
    std::vector<std::string> list;
    for (size_t i = 0; i < count; ++i) {
      if (!names[i]) return null_argument("names[i]");
      list.emplace_back(names[i]);
    }
    abcd::CalleeRegistry check(list);
    config->value.registry = std::move(list);
    return ABCD_OK;
  });
}

abcd_status abcd_config_set_edge_mode(abcd_config* config, abcd_edge_mode mode) {
  if (!config) return null_argument("config");
  if (mode != ABCD_EDGES_TREE && mode != ABCD_EDGES_FIELD) {
    return fail(ABCD_ERR_ARGUMENT, "unknown edge mode");
  }
  config->value.edge_mode = mode == ABCD_EDGES_TREE ? abcd::EdgeMode::Tree : abcd::EdgeMode::Field;
  return ABCD_OK;
}

abcd_status abcd_config_set_token_aggregation(abcd_config* config, const char* value) {
  if (!config) return null_argument("config");
  if (!value) return null_argument("value");
  std::string v = value;
  if (v == "macro") {
    config->value.token_aggregation = abcd::TokenAggregation::Macro;
  } else if (v == "micro") {
    config->value.token_aggregation = abcd::TokenAggregation::Micro;
  } else {
    return fail(ABCD_ERR_CONFIG, "token aggregation must be \"macro\" or \"micro\", got \"" + v + "\"");
  }
  return ABCD_OK;
}

abcd_status abcd_config_set_sample_size(abcd_config* config, uint64_t n) {
  if (!config) return null_argument("config");
  if (n == 0) {
    config->value.sample_size.reset();
  } else {
    config->value.sample_size = n;
  }
  return ABCD_OK;
}

abcd_status abcd_config_set_seed(abcd_config* config, uint64_t seed) {
  if (!config) return null_argument("config");
  config->value.seed = seed;
  return ABCD_OK;
}

abcd_status abcd_config_set_pooled(abcd_config* config, int pooled) {
  if (!config) return null_argument("config");
  config->value.sampling = pooled ? abcd::SamplingMode::Pooled : abcd::SamplingMode::Stratified;
  return ABCD_OK;
}

abcd_status abcd_config_set_threads(abcd_config* config, uint32_t threads) {
  if (!config) return null_argument("config");
  if (threads > 1024) return fail(ABCD_ERR_CONFIG, "at most 1024 threads");
  config->value.threads = threads;
  return ABCD_OK;
}

abcd_status abcd_config_to_json(const abcd_config* config, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] { return give_string(config->value.to_json().dump(2) + "\n", out); });
}

abcd_status abcd_tree_parse(const char* text, size_t length, abcd_tree** out) {
  if (!text && length) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto tree = std::make_unique<abcd_tree>(abcd::parse_program(std::string_view(text ? text : "", length)));
    *out = tree.release();
    return ABCD_OK;
  });
}

abcd_status abcd_tree_parse_file(const char* path, abcd_tree** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto source = std::make_shared<abcd::SourceProgram>();
    source->path = path;
    source->text = abcd::read_text_file(path);
    auto tree = std::make_unique<abcd_tree>(
        abcd::parse_program(std::shared_ptr<const abcd::SourceProgram>(std::move(source))));
    *out = tree.release();
    return ABCD_OK;
  });
}

void abcd_tree_free(abcd_tree* tree) { delete tree; }

size_t abcd_tree_node_count(const abcd_tree* tree) { return tree ? abcd::count_nodes(tree->tree) : 0; }

size_t abcd_tree_edge_count(const abcd_tree* tree, abcd_edge_mode mode) {
  if (!tree) return 0;
  return abcd::count_edges(tree->tree, mode == ABCD_EDGES_TREE ? abcd::EdgeMode::Tree
                                                               : abcd::EdgeMode::Field);
}

abcd_status abcd_tree_dump(const abcd_tree* tree, abcd_format format, char** out) {
  if (!tree) return null_argument("tree");
  if (!out) return null_argument("out");
  if (format != ABCD_FORMAT_SEXPR && format != ABCD_FORMAT_JSON) {
    return fail(ABCD_ERR_ARGUMENT, "tree dumps are available as sexpr or json");
  }
  return guarded([&] {
    auto f = format == ABCD_FORMAT_SEXPR ? abcd::DumpFormat::Sexpr : abcd::DumpFormat::Json;
    return give_string(abcd::dump_tree(tree->tree, f) + "\n", out);
  });
}

abcd_status abcd_tree_analyze(const abcd_tree* tree, const abcd_config* config, abcd_format format,
                              char** out) {
  if (!tree) return null_argument("tree");
  if (!out) return null_argument("out");
  if (format != ABCD_FORMAT_JSON && format != ABCD_FORMAT_TEXT) {
    return fail(ABCD_ERR_ARGUMENT, "analysis output is available as json or text");
  }
  return guarded([&] {
    const auto& cfg = config_or_default(config);
    auto analysis = abcd::analyze_tree(tree->tree, cfg);
    if (format == ABCD_FORMAT_JSON) {
      return give_string(abcd::analysis_to_json(analysis, cfg).dump(2) + "\n", out);
    }
    return give_string(abcd::render_analysis(analysis, cfg), out);
  });
}

abcd_status abcd_tree_lint(const abcd_tree* tree, const abcd_config* config, abcd_format format,
                           char** out, int* has_errors) {
  if (!tree) return null_argument("tree");
  if (!out) return null_argument("out");
  if (format != ABCD_FORMAT_JSON && format != ABCD_FORMAT_TEXT) {
    return fail(ABCD_ERR_ARGUMENT, "lint output is available as json or text");
  }
  return guarded([&] {
    auto findings = abcd::lint_api_usage(tree->tree, config_or_default(config).api_spec);
    if (has_errors) *has_errors = abcd::has_errors(findings) ? 1 : 0;
    if (format == ABCD_FORMAT_JSON) return give_string(abcd::lint_to_json(findings).dump(2) + "\n", out);
    std::string source = tree->tree.source() ? tree->tree.source()->path : std::string("<input>");
    return give_string(abcd::render_lint(findings, source), out);
  });
}

abcd_status abcd_corpus_run(const char* manifest_path, const abcd_config* config, abcd_report** out) {
  if (!manifest_path) return null_argument("manifest_path");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& cfg = config_or_default(config);
    cfg.validate();
    abcd::CorpusManifest manifest = abcd::load_manifest(manifest_path);
    if (cfg.sample_size) {
      manifest = abcd::sample_corpus(manifest, *cfg.sample_size, cfg.seed, cfg.sampling);
    }
    auto run = abcd::analyze_corpus(manifest, cfg);
    auto report = std::make_unique<abcd_report>();
    report->value = abcd::build_report(run, cfg);
    *out = report.release();
    return ABCD_OK;
  });
}

abcd_status abcd_report_from_json(const char* json, abcd_report** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto report = std::make_unique<abcd_report>();
    report->value = abcd::deserialize_report(json);
    *out = report.release();
    return ABCD_OK;
  });
}

void abcd_report_free(abcd_report* report) { delete report; }

abcd_status abcd_report_render(const abcd_report* report, abcd_format format, char** out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  return guarded([&] {
    switch (format) {
      case ABCD_FORMAT_JSON: return give_string(abcd::serialize_report(report->value), out);
      case ABCD_FORMAT_TEXT: return give_string(abcd::render_table(report->value), out);
      case ABCD_FORMAT_CSV: return give_string(abcd::render_csv(report->value), out);
      default: break;
    }
    return fail(ABCD_ERR_ARGUMENT, "reports render as json, text or csv");
  });
}

size_t abcd_report_dataset_count(const abcd_report* report) {
  return report ? report->value.datasets.size() : 0;
}

const char* abcd_report_dataset_name(const abcd_report* report, size_t index) {
  if (!report || index >= report->value.datasets.size()) return nullptr;
  return report->value.datasets[index].dataset.c_str();
}

size_t abcd_report_warning_count(const abcd_report* report) {
  return report ? report->value.warnings.size() : 0;
}

const char* abcd_report_warning(const abcd_report* report, size_t index) {
  if (!report || index >= report->value.warnings.size()) return nullptr;
  return report->value.warnings[index].c_str();
}

abcd_status abcd_report_compare(const abcd_report* a, const char* dataset_a, const abcd_report* b,
                                const char* dataset_b, abcd_format format, char** out) {
  if (!a) return null_argument("a");
  if (!b) return null_argument("b");
  if (!dataset_a) return null_argument("dataset_a");
  if (!dataset_b) return null_argument("dataset_b");
  if (!out) return null_argument("out");
  if (format != ABCD_FORMAT_JSON && format != ABCD_FORMAT_TEXT) {
    return fail(ABCD_ERR_ARGUMENT, "comparisons render as json or text");
  }
  return guarded([&] {
    auto cmp = abcd::compare_reports(a->value, dataset_a, b->value, dataset_b);
    if (format == ABCD_FORMAT_JSON) return give_string(abcd::comparison_to_json(cmp).dump(2) + "\n", out);
    return give_string(abcd::render_comparison(cmp), out);
  });
}

}  // extern "C"
