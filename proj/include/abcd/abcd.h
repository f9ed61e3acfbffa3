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

/* C interface to the ABCD analyzer.
 *
 * Objects are opaque handles created by *_new / *_parse / *_run functions and
 * released with the matching *_free function. Every fallible call returns an
 * abcd_status; on failure abcd_last_error() describes the problem (the text
 * is per thread and valid until the next failing call on that thread).
 * Strings returned through `char** out` parameters are heap allocated and
 * must be released with abcd_string_free(). */

#ifndef ABCD_ABCD_H
#define ABCD_ABCD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ABCD_BUILDING_LIBRARY)
#    define ABCD_API __declspec(dllexport)
#  else
#    define ABCD_API __declspec(dllimport)
#  endif
#else
#  define ABCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum abcd_status {
  ABCD_OK = 0,
  ABCD_ERR_PARSE = 1,    /* program text outside the grammar */
  ABCD_ERR_IO = 2,       /* file could not be read */
  ABCD_ERR_MANIFEST = 3, /* malformed corpus manifest */
  ABCD_ERR_CONFIG = 4,   /* invalid configuration or sample size */
  ABCD_ERR_SCHEMA = 5,   /* JSON document does not match its schema */
  ABCD_ERR_ARGUMENT = 6, /* null handle or bad enum value */
  ABCD_ERR_MISMATCH = 7, /* reports with different metric configurations */
  ABCD_ERR_INTERNAL = 8
} abcd_status;

typedef enum abcd_format {
  ABCD_FORMAT_TEXT = 0, /* aligned plain-text table */
  ABCD_FORMAT_JSON = 1,
  ABCD_FORMAT_CSV = 2,
  ABCD_FORMAT_SEXPR = 3
} abcd_format;

typedef enum abcd_edge_mode { ABCD_EDGES_TREE = 0, ABCD_EDGES_FIELD = 1 } abcd_edge_mode;

typedef struct abcd_config abcd_config;
typedef struct abcd_tree abcd_tree;
typedef struct abcd_report abcd_report;

ABCD_API const char* abcd_version(void);
ABCD_API const char* abcd_status_name(abcd_status status);
ABCD_API const char* abcd_last_error(void);
ABCD_API void abcd_string_free(char* text);

/* Configuration. A fresh config holds the defaults. */
ABCD_API abcd_status abcd_config_new(abcd_config** out);
ABCD_API abcd_status abcd_config_from_json(const char* json, abcd_config** out);
ABCD_API abcd_status abcd_config_load(const char* path, abcd_config** out);
ABCD_API void abcd_config_free(abcd_config* config);
ABCD_API abcd_status abcd_config_set_registry(abcd_config* config, const char* const* names,
                                              size_t count);
ABCD_API abcd_status abcd_config_set_edge_mode(abcd_config* config, abcd_edge_mode mode);
/* "macro" or "micro". */
ABCD_API abcd_status abcd_config_set_token_aggregation(abcd_config* config, const char* value);
/* 0 disables sampling. */
ABCD_API abcd_status abcd_config_set_sample_size(abcd_config* config, uint64_t n);
ABCD_API abcd_status abcd_config_set_seed(abcd_config* config, uint64_t seed);
ABCD_API abcd_status abcd_config_set_pooled(abcd_config* config, int pooled);
/* 0 uses the hardware concurrency. */
ABCD_API abcd_status abcd_config_set_threads(abcd_config* config, uint32_t threads);
ABCD_API abcd_status abcd_config_to_json(const abcd_config* config, char** out);

/* Single programs. */
ABCD_API abcd_status abcd_tree_parse(const char* text, size_t length, abcd_tree** out);
ABCD_API abcd_status abcd_tree_parse_file(const char* path, abcd_tree** out);
ABCD_API void abcd_tree_free(abcd_tree* tree);
ABCD_API size_t abcd_tree_node_count(const abcd_tree* tree);
ABCD_API size_t abcd_tree_edge_count(const abcd_tree* tree, abcd_edge_mode mode);
/* ABCD_FORMAT_SEXPR or ABCD_FORMAT_JSON. */
ABCD_API abcd_status abcd_tree_dump(const abcd_tree* tree, abcd_format format, char** out);
/* Metrics, call sites and lint findings; ABCD_FORMAT_JSON or ABCD_FORMAT_TEXT.
 * `config` may be null for the defaults. */
ABCD_API abcd_status abcd_tree_analyze(const abcd_tree* tree, const abcd_config* config,
                                       abcd_format format, char** out);
/* Lint findings as JSON or text; *has_errors is set when any finding has
 * severity "error". */
ABCD_API abcd_status abcd_tree_lint(const abcd_tree* tree, const abcd_config* config,
                                    abcd_format format, char** out, int* has_errors);

/* Corpora and reports. */
ABCD_API abcd_status abcd_corpus_run(const char* manifest_path, const abcd_config* config,
                                     abcd_report** out);
ABCD_API abcd_status abcd_report_from_json(const char* json, abcd_report** out);
ABCD_API void abcd_report_free(abcd_report* report);
/* ABCD_FORMAT_JSON, ABCD_FORMAT_TEXT or ABCD_FORMAT_CSV. */
ABCD_API abcd_status abcd_report_render(const abcd_report* report, abcd_format format, char** out);
ABCD_API size_t abcd_report_dataset_count(const abcd_report* report);
ABCD_API const char* abcd_report_dataset_name(const abcd_report* report, size_t index);
ABCD_API size_t abcd_report_warning_count(const abcd_report* report);
ABCD_API const char* abcd_report_warning(const abcd_report* report, size_t index);
/* Headline metrics of dataset_b (in b) against dataset_a (in a), as JSON or
 * text. Fails with ABCD_ERR_MISMATCH when the config hashes differ. */
ABCD_API abcd_status abcd_report_compare(const abcd_report* a, const char* dataset_a,
                                         const abcd_report* b, const char* dataset_b,
                                         abcd_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ABCD_ABCD_H */
