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

#include "abcd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

MetricStat stat_of(const std::vector<double>& values) {
  MetricStat s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  s.mean = mean;
  s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

OJson optional_number(const std::optional<double>& v) { return v ? OJson(*v) : OJson(); }

OJson stat_to_json(const MetricStat& s) {
  return OJson{{"mean", optional_number(s.mean)}, {"stddev", optional_number(s.stddev)}};
}

// ---- strict reader ------------------------------------------------------------

class Reader {
 public:
  Reader(const Json& value, std::string pointer) : v_(value), ptr_(std::move(pointer)) {}

  const std::string& pointer() const { return ptr_; }
  const Json& raw() const { return v_; }

  Reader object(std::initializer_list<std::string_view> fields) const {
    if (!v_.is_object()) fail("expected an object");
    for (const auto& item : v_.items()) {
      if (std::find(fields.begin(), fields.end(), item.key()) == fields.end()) {
        throw SchemaError(ptr_ + "/" + item.key(), "unknown field");
      }
    }
    for (auto f : fields) {
      if (!v_.contains(std::string(f))) fail("missing field '" + std::string(f) + "'");
    }
    return *this;
  }

  Reader operator[](std::string_view key) const {
    return Reader(v_.at(std::string(key)), ptr_ + "/" + std::string(key));
  }

  std::vector<Reader> array() const {
    if (!v_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < v_.size(); ++i) out.emplace_back(v_[i], ptr_ + "/" + std::to_string(i));
    return out;
  }

  std::string string() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }

  std::uint64_t unsigned_int() const {
    if (!v_.is_number_unsigned()) fail("expected a non-negative integer");
    return v_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!v_.is_boolean()) fail("expected a boolean");
    return v_.get<bool>();
  }

  double number() const {
    if (!v_.is_number()) fail("expected a number");
    return v_.get<double>();
  }

  std::optional<double> optional_number() const {
    if (v_.is_null()) return std::nullopt;
    return number();
  }

  [[noreturn]] void fail(const std::string& message) const { throw SchemaError(ptr_, message); }

 private:
  const Json& v_;
  std::string ptr_;
};

MetricStat stat_from(const Reader& r) {
  Reader o = r.object({"mean", "stddev"});
  MetricStat s;
  s.mean = o["mean"].optional_number();
  s.stddev = o["stddev"].optional_number();
  if (s.mean.has_value() != s.stddev.has_value()) {
    o.fail("mean and stddev must both be null or both be numbers");
  }
  return s;
}

constexpr std::string_view kStatNames[] = {"vlm_calls",  "vlm_tokens_macro", "vlm_tokens_micro",
                                           "ast_nodes",  "ast_edges_tree",   "ast_edges_field"};

MetricStat DatasetSummary::*const kStatMembers[] = {
    &DatasetSummary::vlm_calls, &DatasetSummary::vlm_tokens_macro,
    &DatasetSummary::vlm_tokens_micro, &DatasetSummary::ast_nodes,
    &DatasetSummary::ast_edges_tree, &DatasetSummary::ast_edges_field};

OJson summary_to_json(const DatasetSummary& s) {
  OJson out;
  out["dataset"] = s.dataset;
  out["n_analyzed"] = s.n_analyzed;
  out["n_excluded"] = s.n_excluded;
  out["exclusion_fraction"] = s.exclusion_fraction;
  out["warning"] = s.warning;
  OJson metrics;
  for (std::size_t i = 0; i < std::size(kStatNames); ++i) {
    metrics[std::string(kStatNames[i])] = stat_to_json(s.*kStatMembers[i]);
  }
  out["metrics"] = std::move(metrics);
  return out;
}

DatasetSummary summary_from(const Reader& r) {
  Reader o = r.object(
      {"dataset", "n_analyzed", "n_excluded", "exclusion_fraction", "warning", "metrics"});
  DatasetSummary s;
  s.dataset = o["dataset"].string();
  s.n_analyzed = o["n_analyzed"].unsigned_int();
  s.n_excluded = o["n_excluded"].unsigned_int();
  s.exclusion_fraction = o["exclusion_fraction"].number();
  s.warning = o["warning"].boolean();
  Reader m = o["metrics"].object({kStatNames[0], kStatNames[1], kStatNames[2], kStatNames[3],
                                  kStatNames[4], kStatNames[5]});
  for (std::size_t i = 0; i < std::size(kStatNames); ++i) {
    s.*kStatMembers[i] = stat_from(m[kStatNames[i]]);
  }
  return s;
}

ProgramRecord record_from(const Reader& r) {
  if (!r.raw().is_object()) r.fail("expected an object");
  const bool excluded = r.raw().contains("error");
  Reader o = excluded ? r.object({"id", "dataset", "path", "status", "error"})
                      : r.object({"id", "dataset", "path", "status", "metrics"});
  ProgramRecord rec;
  rec.id = o["id"].string();
  rec.dataset = o["dataset"].string();
  rec.path = o["path"].string();
  std::string status = o["status"].string();
  if (status != (excluded ? "excluded" : "analyzed")) {
    o["status"].fail(excluded ? "records with an error must have status \"excluded\""
                              : "records with metrics must have status \"analyzed\"");
  }
  if (excluded) {
    rec.status = ProgramStatus::Excluded;
    Reader e = o["error"].object({"phase", "message", "line", "column", "offset", "length", "lexeme"});
    ParseErrorSummary err;
    err.phase = e["phase"].string();
    if (err.phase != "lex" && err.phase != "parse") e["phase"].fail("expected \"lex\" or \"parse\"");
    err.message = e["message"].string();
    err.span.line = static_cast<std::uint32_t>(e["line"].unsigned_int());
    err.span.column = static_cast<std::uint32_t>(e["column"].unsigned_int());
    err.span.offset = e["offset"].unsigned_int();
    err.span.length = e["length"].unsigned_int();
    err.lexeme = e["lexeme"].string();
    rec.error = std::move(err);
    return rec;
  }
  rec.status = ProgramStatus::Analyzed;
  Reader m = o["metrics"].object({"vlm", "ast", "lint"});
  ProgramMetrics pm;
  Reader vlm = m["vlm"].object({"call_count", "unresolved_sites", "token_counts", "token_mean"});
  pm.vlm_calls = vlm["call_count"].unsigned_int();
  pm.unresolved_sites = vlm["unresolved_sites"].unsigned_int();
  for (const auto& c : vlm["token_counts"].array()) pm.token_counts.push_back(c.unsigned_int());
  pm.token_mean = vlm["token_mean"].optional_number();
  Reader ast = m["ast"].object({"nodes", "edges_tree", "edges_field", "max_depth", "per_kind"});
  pm.nodes = ast["nodes"].unsigned_int();
  pm.edges_tree = ast["edges_tree"].unsigned_int();
  pm.edges_field = ast["edges_field"].unsigned_int();
  pm.max_depth = ast["max_depth"].unsigned_int();
  Reader kinds = ast["per_kind"];
  if (!kinds.raw().is_object()) kinds.fail("expected an object");
  for (const auto& item : kinds.raw().items()) {
    auto kind = node_kind_from_string(item.key());
    if (!kind) throw SchemaError(kinds.pointer() + "/" + item.key(), "unknown node kind");
    pm.per_kind[static_cast<std::size_t>(*kind)] = kinds[item.key()].unsigned_int();
  }
  Reader lint = m["lint"].object({"findings", "errors"});
  pm.lint_findings = lint["findings"].unsigned_int();
  pm.lint_errors = lint["errors"].unsigned_int();
  rec.metrics = std::move(pm);
  return rec;
}

std::string cell(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string("n/a");
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Verdict verdict_of(double a, double b) {
  double ra = std::stod(format_fixed(a, 2));
  double rb = std::stod(format_fixed(b, 2));
  if (rb > ra) return Verdict::Greater;
  if (rb < ra) return Verdict::Less;
  return Verdict::Equal;
}

const DatasetSummary& find_dataset(const CorpusReport& report, std::string_view label,
                                   const char* which) {
  for (const auto& s : report.datasets) {
    if (s.dataset == label) return s;
  }
  throw ConfigError(std::string("dataset '") + std::string(label) + "' not found in report " + which);
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out = buf;
  if (out.find_first_not_of("-0.") == std::string::npos && out[0] == '-') out.erase(0, 1);
  return out;
}

std::vector<DatasetSummary> aggregate(const std::vector<ProgramRecord>& records,
                                      double exclusion_warn_threshold) {
  std::vector<std::string> labels;
  for (const auto& r : records) {
    if (std::find(labels.begin(), labels.end(), r.dataset) == labels.end()) labels.push_back(r.dataset);
  }
  std::vector<DatasetSummary> out;
  for (const auto& label : labels) {
    DatasetSummary s;
    s.dataset = label;
    std::vector<double> calls, macro, micro, nodes, edges_tree, edges_field;
    for (const auto& r : records) {
      if (r.dataset != label) continue;
      if (r.status == ProgramStatus::Excluded || !r.metrics) {
        ++s.n_excluded;
        continue;
      }
      ++s.n_analyzed;
      const ProgramMetrics& m = *r.metrics;
      calls.push_back(static_cast<double>(m.vlm_calls));
      if (m.token_mean) macro.push_back(*m.token_mean);
      for (auto c : m.token_counts) micro.push_back(static_cast<double>(c));
      nodes.push_back(static_cast<double>(m.nodes));
      edges_tree.push_back(static_cast<double>(m.edges_tree));
      edges_field.push_back(static_cast<double>(m.edges_field));
    }
    const std::size_t total = s.n_analyzed + s.n_excluded;
    s.exclusion_fraction = total ? static_cast<double>(s.n_excluded) / static_cast<double>(total) : 0.0;
    s.warning = s.exclusion_fraction > exclusion_warn_threshold;
    s.vlm_calls = stat_of(calls);
    s.vlm_tokens_macro = stat_of(macro);
    s.vlm_tokens_micro = stat_of(micro);
    s.ast_nodes = stat_of(nodes);
    s.ast_edges_tree = stat_of(edges_tree);
    s.ast_edges_field = stat_of(edges_field);
    out.push_back(std::move(s));
  }
  return out;
}

CorpusReport build_report(const CorpusRun& run, const AnalysisConfig& config) {
  CorpusReport report;
  report.config = config;
  report.config_hash = config.config_hash();
  report.datasets = aggregate(run.records, config.exclusion_warn_threshold);
  report.warnings = run.warnings;
  report.programs = run.records;
  return report;
}

OJson program_record_to_json(const ProgramRecord& r) {
  OJson out;
  out["id"] = r.id;
  out["dataset"] = r.dataset;
  out["path"] = r.path;
  if (r.status == ProgramStatus::Excluded && r.error) {
    out["status"] = "excluded";
    const auto& e = *r.error;
    out["error"] = OJson{{"phase", e.phase},         {"message", e.message},
                         {"line", e.span.line},      {"column", e.span.column},
                         {"offset", e.span.offset},  {"length", e.span.length},
                         {"lexeme", e.lexeme}};
    return out;
  }
  out["status"] = "analyzed";
  const ProgramMetrics& m = *r.metrics;
  OJson per_kind = OJson::object();
  for (NodeKind k : all_node_kinds()) {
    if (auto n = m.per_kind[static_cast<std::size_t>(k)]) per_kind[std::string(to_string(k))] = n;
  }
  out["metrics"] = OJson{
      {"vlm", OJson{{"call_count", m.vlm_calls},
                    {"unresolved_sites", m.unresolved_sites},
                    {"token_counts", m.token_counts},
                    {"token_mean", optional_number(m.token_mean)}}},
      {"ast", OJson{{"nodes", m.nodes},
                    {"edges_tree", m.edges_tree},
                    {"edges_field", m.edges_field},
                    {"max_depth", m.max_depth},
                    {"per_kind", std::move(per_kind)}}},
      {"lint", OJson{{"findings", m.lint_findings}, {"errors", m.lint_errors}}}};
  return out;
}

OJson report_to_json(const CorpusReport& report) {
  OJson out;
  out["schema"] = std::string(kReportSchema);
  out["schema_version"] = kReportSchemaVersion;
  out["tool_version"] = report.tool_version;
  out["node_kinds_version"] = report.node_kinds_version;
  out["config_hash"] = report.config_hash;
  out["config"] = report.config.to_json();
  OJson datasets = OJson::array();
  for (const auto& s : report.datasets) datasets.push_back(summary_to_json(s));
  out["datasets"] = std::move(datasets);
  out["warnings"] = report.warnings;
  OJson programs = OJson::array();
  for (const auto& r : report.programs) programs.push_back(program_record_to_json(r));
  out["programs"] = std::move(programs);
  return out;
}

std::string serialize_report(const CorpusReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

CorpusReport report_from_json(const Json& doc) {
  Reader root = Reader(doc, "").object({"schema", "schema_version", "tool_version",
                                        "node_kinds_version", "config_hash", "config", "datasets",
                                        "warnings", "programs"});
  if (root["schema"].string() != kReportSchema) root["schema"].fail("not an abcd report");
  if (root["schema_version"].unsigned_int() != kReportSchemaVersion) {
    root["schema_version"].fail("unsupported schema version");
  }
  CorpusReport report;
  report.tool_version = root["tool_version"].string();
  report.node_kinds_version = static_cast<int>(root["node_kinds_version"].unsigned_int());
  report.config_hash = root["config_hash"].string();
  const Reader config = root["config"].object({"registry", "edge_mode", "token_aggregation",
                                               "sampling", "sample_size", "seed",
                                               "exclusion_warn_threshold", "api_spec"});
  try {
    report.config = AnalysisConfig::from_json(config.raw());
  } catch (const SchemaError& e) {
    throw SchemaError("/config" + e.pointer(), e.detail());
  } catch (const ConfigError& e) {
    throw SchemaError("/config", e.what());
  }
  for (const auto& d : root["datasets"].array()) report.datasets.push_back(summary_from(d));
  for (const auto& w : root["warnings"].array()) report.warnings.push_back(w.string());
  for (const auto& p : root["programs"].array()) report.programs.push_back(record_from(p));
  return report;
}

CorpusReport deserialize_report(std::string_view text) {
  Json doc = Json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw SchemaError("", "not valid JSON");
  return report_from_json(doc);
}

std::string render_table(const CorpusReport& report) {
  const EdgeMode secondary = report.config.edge_mode == EdgeMode::Field ? EdgeMode::Tree : EdgeMode::Field;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Dataset", "VLM Calls", "VLM Tokens", "AST Nodes", "AST Edges",
                  "AST Edges (" + std::string(to_string(secondary)) + ")", "Excluded"});
  for (const auto& s : report.datasets) {
    rows.push_back({s.dataset, cell(s.vlm_calls.mean, 2),
                    cell(s.vlm_tokens(report.config.token_aggregation).mean, 2),
                    cell(s.ast_nodes.mean, 2),
                    cell(s.ast_edges(report.config.edge_mode).mean, 2),
                    cell(s.ast_edges(secondary).mean, 2),
                    std::to_string(s.n_excluded) + "/" + std::to_string(s.n_analyzed + s.n_excluded) +
                        " (" + format_fixed(100.0 * s.exclusion_fraction, 2) + "%)"});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string render_csv(const CorpusReport& report) {
  std::string out = "dataset,n_analyzed,n_excluded,exclusion_fraction";
  for (auto name : kStatNames) {
    out += "," + std::string(name) + "_mean," + std::string(name) + "_stddev";
  }
  out += "\n";
  for (const auto& s : report.datasets) {
    out += csv_field(s.dataset) + "," + std::to_string(s.n_analyzed) + "," +
           std::to_string(s.n_excluded) + "," + format_fixed(s.exclusion_fraction, 6);
    for (auto member : kStatMembers) {
      const MetricStat& st = s.*member;
      out += "," + (st.mean ? format_fixed(*st.mean, 6) : std::string());
      out += "," + (st.stddev ? format_fixed(*st.stddev, 6) : std::string());
    }
    out += "\n";
  }
  return out;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Greater: return "greater";
    case Verdict::Less: return "less";
    case Verdict::Equal: return "equal";
    case Verdict::Undefined: break;
  }
  return "undefined";
}

ComparisonReport compare(const DatasetSummary& a, const DatasetSummary& b,
                         const AnalysisConfig& config) {
  ComparisonReport out;
  out.dataset_a = a.dataset;
  out.dataset_b = b.dataset;
  out.config_hash = config.config_hash();
  auto add = [&](const char* name, const MetricStat& sa, const MetricStat& sb) {
    MetricComparison m;
    m.metric = name;
    m.a = sa.mean;
    m.b = sb.mean;
    if (m.a && m.b) {
      m.delta = *m.b - *m.a;
      m.verdict = verdict_of(*m.a, *m.b);
    }
    out.metrics.push_back(std::move(m));
  };
  add("vlm_calls", a.vlm_calls, b.vlm_calls);
  add("vlm_tokens", a.vlm_tokens(config.token_aggregation), b.vlm_tokens(config.token_aggregation));
  add("ast_nodes", a.ast_nodes, b.ast_nodes);
  add("ast_edges", a.ast_edges(config.edge_mode), b.ast_edges(config.edge_mode));
  return out;
}

ComparisonReport compare_reports(const CorpusReport& a, std::string_view dataset_a,
                                 const CorpusReport& b, std::string_view dataset_b) {
  if (a.config_hash != b.config_hash) {
    throw ConfigMismatchError("reports were produced with different metric configurations (config hash " +
                              a.config_hash + " vs " + b.config_hash + ")");
  }
  return compare(find_dataset(a, dataset_a, "A"), find_dataset(b, dataset_b, "B"), a.config);
}

OJson comparison_to_json(const ComparisonReport& c) {
  OJson metrics = OJson::array();
  for (const auto& m : c.metrics) {
    metrics.push_back(OJson{{"metric", m.metric},
                            {"a", optional_number(m.a)},
                            {"b", optional_number(m.b)},
                            {"delta", optional_number(m.delta)},
                            {"verdict", std::string(to_string(m.verdict))}});
  }
  return OJson{{"dataset_a", c.dataset_a},
               {"dataset_b", c.dataset_b},
               {"config_hash", c.config_hash},
               {"metrics", std::move(metrics)}};
}

std::string render_comparison(const ComparisonReport& c) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Metric", c.dataset_a, c.dataset_b, "Delta (B-A)", "Verdict"});
  for (const auto& m : c.metrics) {
    std::string delta = "n/a";
    if (m.delta) {
      delta = format_fixed(*m.delta, 2);
      if (delta[0] != '-') delta = "+" + delta;
    }
    rows.push_back({m.metric, cell(m.a, 2), cell(m.b, 2), delta, std::string(to_string(m.verdict))});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out = "A: " + c.dataset_a + "\nB: " + c.dataset_b + "\n";
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      std::string pad(width[i] - row[i].size(), ' ');
      line += (i == 0 || i == 4) ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace abcd
