/*
 * Copyright 2026 The XMentor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xmentor/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "csv.hpp"
#include "json.hpp"

namespace xmentor {
namespace {

using json = nlohmann::json;

// Walks a parsed JSON value while tracking the JSON pointer for diagnostics.
class Node {
 public:
  Node(const json& value, std::string path)
      : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(ParseError::Kind::kSchema,
                     (path_.empty() ? std::string("/") : path_) + ": " +
                         message,
                     path_.empty() ? "/" : path_);
  }

  void require_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  bool has(const char* key) const {
    return value_.is_object() && value_.contains(key) &&
           !value_.at(key).is_null();
  }

  Node child(const char* key) const {
    require_object();
    const auto it = value_.find(key);
    if (it == value_.end()) {
      Node(value_, path_ + "/" + key).fail("missing required field");
    }
    return Node(*it, path_ + "/" + key);
  }

  Node element(std::size_t index) const {
    return Node(value_.at(index), path_ + "/" + std::to_string(index));
  }

  std::string as_string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  double as_real() const {
    if (value_.is_string()) {
      const auto text = value_.get<std::string>();
      std::string lower;
      for (const char c : text) lower.push_back(static_cast<char>(std::tolower(
          static_cast<unsigned char>(c))));
      if (lower.find("nan") != std::string::npos ||
          lower.find("inf") != std::string::npos) {
        fail("non-finite weight");
      }
      fail("expected a number");
    }
    if (!value_.is_number()) fail("expected a number");
    const double out = value_.get<double>();
    if (!std::isfinite(out)) fail("non-finite weight");
    return out;
  }

  std::size_t as_count() const {
    if (!value_.is_number_unsigned() &&
        !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return value_.get<std::size_t>();
  }

  bool as_bool() const {
    if (!value_.is_boolean()) fail("expected a boolean");
    return value_.get<bool>();
  }

  const json::array_t& as_array() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.get_ref<const json::array_t&>();
  }

  // Fields not in `known`, as canonical JSON text.
  Extensions extensions(std::initializer_list<std::string_view> known) const {
    Extensions out;
    for (const auto& [key, item] : value_.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        out.emplace(key, item.dump());
      }
    }
    return out;
  }

 private:
  const json& value_;
  std::string path_;
};

void put_extensions(json& target, const Extensions& extensions) {
  for (const auto& [key, text] : extensions) {
    target[key] = json::parse(text);
  }
}

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Kind::kSyntax,
                     std::string("syntax error at byte ") +
                         std::to_string(e.byte) + ": " + e.what(),
                     "", e.byte);
  }
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

void check_envelope(const Node& root, std::string_view expected_kind) {
  root.require_object();
  const std::string version = root.child("schema_version").as_string();
  if (version != kSchemaVersion) {
    root.child("schema_version")
        .fail("unsupported schema_version '" + version + "'");
  }
  if (root.has("kind")) {
    const std::string kind = root.child("kind").as_string();
    if (kind != expected_kind) {
      root.child("kind").fail("expected kind '" + std::string(expected_kind) +
                              "', got '" + kind + "'");
    }
  } else if (expected_kind != "explanation") {
    root.child("kind").fail("missing required field");
  }
}

json envelope(std::string_view kind) {
  json out = json::object();
  out["schema_version"] = kSchemaVersion;
  out["kind"] = kind;
  return out;
}

Prediction read_prediction(const Node& root) {
  Prediction prediction;
  if (!root.has("prediction")) return prediction;
  const Node node = root.child("prediction");
  node.require_object();
  if (node.has("label")) prediction.label = node.child("label").as_string();
  if (node.has("score")) prediction.score = node.child("score").as_real();
  prediction.extensions = node.extensions({"label", "score"});
  return prediction;
}

json write_prediction(const Prediction& prediction) {
  json out = json::object();
  out["label"] = prediction.label;
  if (prediction.score.has_value()) out["score"] = *prediction.score;
  put_extensions(out, prediction.extensions);
  return out;
}

ExplanationSet read_set(const Node& root) {
  check_envelope(root, "explanation");
  ExplanationSet set;
  set.instance_id = root.child("instance_id").as_string();
  set.prediction = read_prediction(root);

  const Node explanations = root.child("explanations");
  const auto& items = explanations.as_array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Node node = explanations.element(i);
    node.require_object();
    Explanation explanation;
    explanation.explainer = node.child("explainer").as_string();
    const Node attributions = node.child("attributions");
    const auto& entries = attributions.as_array();
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const Node entry = attributions.element(j);
      entry.require_object();
      FeatureAttribution attribution;
      attribution.feature = entry.child("feature").as_string();
      attribution.weight = entry.child("weight").as_real();
      attribution.extensions = entry.extensions({"feature", "weight"});
      explanation.attributions.push_back(std::move(attribution));
    }
    explanation.extensions = node.extensions({"explainer", "attributions"});
    set.explanations.push_back(std::move(explanation));
  }
  set.extensions = root.extensions({"schema_version", "kind", "instance_id",
                                    "prediction", "explanations"});
  return set;
}

json write_set(const ExplanationSet& set) {
  json out = json::object();
  out["schema_version"] = kSchemaVersion;
  out["instance_id"] = set.instance_id;
  out["prediction"] = write_prediction(set.prediction);
  json explanations = json::array();
  for (const auto& explanation : set.explanations) {
    json node = json::object();
    node["explainer"] = explanation.explainer;
    json attributions = json::array();
    for (const auto& attribution : explanation.attributions) {
      json entry = json::object();
      entry["feature"] = attribution.feature;
      entry["weight"] = attribution.weight;
      put_extensions(entry, attribution.extensions);
      attributions.push_back(std::move(entry));
    }
    node["attributions"] = std::move(attributions);
    put_extensions(node, explanation.extensions);
    explanations.push_back(std::move(node));
  }
  out["explanations"] = std::move(explanations);
  put_extensions(out, set.extensions);
  return out;
}

void validate_or_throw(const ExplanationSet& set, const std::string& path) {
  auto findings = validate(set);
  if (has_errors(findings)) {
    ValidationError error(findings);
    throw ParseError(ParseError::Kind::kValidation, error.what(), path,
                     std::nullopt, std::move(findings));
  }
}

std::vector<json> corpus_values(std::string_view bytes) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '[') {
    json root = parse_json(bytes);
    return root.get<std::vector<json>>();
  }
  try {
    return {parse_json(bytes)};
  } catch (const ParseError& whole) {
    // Newline-delimited documents.
    std::vector<json> out;
    std::size_t start = 0;
    while (start <= bytes.size()) {
      std::size_t end = bytes.find('\n', start);
      if (end == std::string_view::npos) end = bytes.size();
      const std::string_view line = bytes.substr(start, end - start);
      if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
        try {
          out.push_back(json::parse(line.begin(), line.end()));
        } catch (const json::parse_error&) {
          throw whole;
        }
      }
      start = end + 1;
    }
    if (out.size() < 2) throw whole;
    return out;
  }
}

std::vector<ExplanationSet> read_corpus(std::string_view bytes,
                                        bool validated) {
  const auto values = corpus_values(bytes);
  const bool single = values.size() == 1 &&
                      bytes.find_first_not_of(" \t\r\n") != std::string::npos &&
                      bytes[bytes.find_first_not_of(" \t\r\n")] != '[';
  std::vector<ExplanationSet> sets;
  sets.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string path = single ? "" : "/" + std::to_string(i);
    ExplanationSet set = read_set(Node(values[i], path));
    if (validated) validate_or_throw(set, path.empty() ? "/" : path);
    sets.push_back(std::move(set));
  }
  return sets;
}

json ranked_to_json(const std::vector<RankedFeature>& ranked) {
  json out = json::array();
  for (const auto& entry : ranked) {
    out.push_back({{"feature", entry.feature},
                   {"consensus_rank", entry.consensus_rank}});
  }
  return out;
}

std::vector<RankedFeature> ranked_from(const Node& node) {
  std::vector<RankedFeature> out;
  const auto& items = node.as_array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Node entry = node.element(i);
    out.push_back(RankedFeature{entry.child("feature").as_string(),
                                entry.child("consensus_rank").as_count()});
  }
  return out;
}

std::vector<std::string> strings_from(const Node& node) {
  std::vector<std::string> out;
  const auto& items = node.as_array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back(node.element(i).as_string());
  }
  return out;
}

json findings_to_json(const InstanceFindings& findings) {
  json out = envelope("validation");
  out["instance_id"] = findings.instance_id;
  out["valid"] = !has_errors(findings.findings);
  json list = json::array();
  for (const auto& finding : findings.findings) {
    list.push_back(
        {{"kind", to_string(finding.kind)},
         {"severity",
          finding.severity == Severity::kError ? "error" : "warning"},
         {"instance_id", finding.instance_id},
         {"explainer", finding.explainer},
         {"feature", finding.feature},
         {"message", finding.message}});
  }
  out["findings"] = std::move(list);
  return out;
}

json aggregation_to_json(const AggregatedExplanation& result,
                         bool with_trace) {
  json out = envelope("aggregation");
  out["instance_id"] = result.instance_id;
  out["prediction"] = write_prediction(result.prediction);
  out["explainers"] = result.explainers;
  out["k"] = result.trace.k_used;
  out["feature_count"] = result.trace.feature_count;
  json features = json::array();
  for (const auto& entry : result.features) {
    json node = json::object();
    node["feature"] = entry.feature;
    node["consensus_rank"] = entry.consensus_rank;
    node["sign"] = to_string(entry.sign);
    node["mean_weight"] = entry.mean_weight;
    node["support"] = entry.support;
    json signs = json::object();
    for (std::size_t i = 0; i < entry.explainer_signs.size() &&
                            i < result.explainers.size();
         ++i) {
      signs[result.explainers[i]] = to_string(entry.explainer_signs[i]);
    }
    node["signs"] = std::move(signs);
    features.push_back(std::move(node));
  }
  out["features"] = std::move(features);

  if (with_trace) {
    const AggregationTrace& trace = result.trace;
    json node = json::object();
    node["strict_rank_set"] = ranked_to_json(trace.strict_rank_set);
    node["blacklist"] = trace.blacklist;
    node["loose_rank_set"] = ranked_to_json(trace.loose_rank_set);
    node["strict_sign_set"] = trace.strict_sign_set;
    node["loose_sign_set"] = trace.loose_sign_set;
    json modes = json::array();
    for (const Mode mode : trace.modes_used) modes.push_back(to_string(mode));
    node["modes_used"] = std::move(modes);
    node["tie_break_ranks"] = trace.tie_break_ranks;
    node["note"] = trace.note;
    out["trace"] = std::move(node);
  }
  return out;
}

json matrix_to_json(const AgreementMatrix& matrix) {
  json rows = json::array();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < matrix.size(); ++j) row.push_back(matrix(i, j));
    rows.push_back(std::move(row));
  }
  return {{"explainers", matrix.explainers()},
          {"k", matrix.k()},
          {"values", std::move(rows)}};
}

json metrics_to_json(const InstanceMetrics& metrics) {
  json out = envelope("metrics");
  out["instance_id"] = metrics.instance_id;
  out["k"] = metrics.k;
  json pairs = json::array();
  for (const auto& pair : metrics.pairs) {
    const PairMetrics& m = pair.metrics;
    pairs.push_back({{"explainer_a", pair.explainer_a},
                     {"explainer_b", pair.explainer_b},
                     {"k", m.k},
                     {"fa", m.fa},
                     {"ra", m.ra},
                     {"sa", m.sa},
                     {"rank_mismatch_count", m.rank_mismatch_count},
                     {"sign_mismatch_count", m.sign_mismatch_count}});
  }
  out["pairs"] = std::move(pairs);
  if (!metrics.matrices.empty()) {
    json matrices = json::object();
    for (const auto& matrix : metrics.matrices) {
      matrices[std::string(to_string(matrix.metric()))] =
          matrix_to_json(matrix);
    }
    out["matrices"] = std::move(matrices);
  }
  return out;
}

json histogram_to_json(const Histogram& histogram) {
  json out = json::array();
  for (const auto& [value, frequency] : histogram) {
    out.push_back({{"count", value}, {"frequency", frequency}});
  }
  return out;
}

std::string_view trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

ParseError::ParseError(Kind kind, std::string message, std::string path,
                       std::optional<std::size_t> byte_offset,
                       std::vector<Finding> findings)
    : Error(std::move(message)),
      kind_(kind),
      path_(std::move(path)),
      byte_offset_(byte_offset),
      findings_(std::move(findings)) {}

std::string_view to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kSyntax:
      return "SyntaxError";
    case ParseError::Kind::kSchema:
      return "SchemaViolation";
    case ParseError::Kind::kValidation:
      return "ValidationFailure";
  }
  return "ParseError";
}

ExplanationSet parse_document(std::string_view bytes) {
  const json root = parse_json(bytes);
  ExplanationSet set = read_set(Node(root, ""));
  validate_or_throw(set, "/");
  return set;
}

std::vector<ExplanationSet> parse_corpus(std::string_view bytes) {
  return read_corpus(bytes, true);
}

std::vector<ExplanationSet> parse_corpus_unvalidated(std::string_view bytes) {
  return read_corpus(bytes, false);
}

std::string write_document(const ExplanationSet& set) {
  return dump(write_set(set));
}

std::string write_corpus(std::span<const ExplanationSet> sets) {
  json out = json::array();
  for (const auto& set : sets) out.push_back(write_set(set));
  return dump(out);
}

std::string write_aggregation(const AggregatedExplanation& result,
                              bool with_trace) {
  return dump(aggregation_to_json(result, with_trace));
}

std::string write_aggregations(std::span<const AggregatedExplanation> results,
                               bool with_trace) {
  json out = json::array();
  for (const auto& result : results) {
    out.push_back(aggregation_to_json(result, with_trace));
  }
  return dump(out);
}

AggregatedExplanation parse_aggregation(std::string_view bytes) {
  const json value = parse_json(bytes);
  const Node root(value, "");
  check_envelope(root, "aggregation");

  AggregatedExplanation result;
  result.instance_id = root.child("instance_id").as_string();
  result.prediction = read_prediction(root);
  result.explainers = strings_from(root.child("explainers"));
  result.trace.k_used = root.child("k").as_count();
  result.trace.feature_count = root.child("feature_count").as_count();

  const Node features = root.child("features");
  const auto& items = features.as_array();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Node node = features.element(i);
    AggregatedFeature entry;
    entry.feature = node.child("feature").as_string();
    entry.consensus_rank = node.child("consensus_rank").as_count();
    const Node sign_node = node.child("sign");
    const auto sign = parse_sign(sign_node.as_string());
    if (!sign) sign_node.fail("unknown sign");
    entry.sign = *sign;
    entry.mean_weight = node.child("mean_weight").as_real();
    entry.support = node.child("support").as_count();
    if (node.has("signs")) {
      const Node signs = node.child("signs");
      signs.require_object();
      for (const auto& explainer : result.explainers) {
        const Node item = signs.child(explainer.c_str());
        const auto parsed = parse_sign(item.as_string());
        if (!parsed) item.fail("unknown sign");
        entry.explainer_signs.push_back(*parsed);
      }
    }
    result.features.push_back(std::move(entry));
  }

  if (root.has("trace")) {
    const Node node = root.child("trace");
    AggregationTrace& trace = result.trace;
    trace.strict_rank_set = ranked_from(node.child("strict_rank_set"));
    trace.blacklist = strings_from(node.child("blacklist"));
    trace.loose_rank_set = ranked_from(node.child("loose_rank_set"));
    trace.strict_sign_set = strings_from(node.child("strict_sign_set"));
    trace.loose_sign_set = strings_from(node.child("loose_sign_set"));
    const Node modes = node.child("modes_used");
    for (std::size_t i = 0; i < modes.as_array().size(); ++i) {
      const std::string mode = modes.element(i).as_string();
      if (mode == "loose_rank") {
        trace.modes_used.push_back(Mode::kLooseRank);
      } else if (mode == "loose_sign") {
        trace.modes_used.push_back(Mode::kLooseSign);
      } else {
        modes.element(i).fail("unknown mode '" + mode + "'");
      }
    }
    const Node ties = node.child("tie_break_ranks");
    for (std::size_t i = 0; i < ties.as_array().size(); ++i) {
      trace.tie_break_ranks.push_back(ties.element(i).as_count());
    }
    trace.note = node.child("note").as_string();
  }
  return result;
}

std::string write_metrics(const InstanceMetrics& metrics) {
  return dump(metrics_to_json(metrics));
}

std::string write_metrics(std::span<const InstanceMetrics> metrics) {
  json out = json::array();
  for (const auto& entry : metrics) out.push_back(metrics_to_json(entry));
  return dump(out);
}

std::string write_findings(const InstanceFindings& findings) {
  return dump(findings_to_json(findings));
}

std::string write_findings(std::span<const InstanceFindings> findings) {
  json out = json::array();
  for (const auto& entry : findings) out.push_back(findings_to_json(entry));
  return dump(out);
}

std::string write_report_summary(const ReportSummary& summary) {
  json out = envelope("report");
  out["instances"] = summary.instances;
  json pairs = json::array();
  for (std::size_t i = 0; i < summary.histograms.pairs.size(); ++i) {
    const PairHistograms& entry = summary.histograms.pairs[i];
    json node = {{"explainer_a", entry.explainer_a},
                 {"explainer_b", entry.explainer_b},
                 {"instances", entry.instances},
                 {"rank_mismatch_histogram",
                  histogram_to_json(entry.rank_mismatch)},
                 {"sign_mismatch_histogram",
                  histogram_to_json(entry.sign_mismatch)}};
    if (i < summary.means.size()) {
      const auto& means = summary.means[i];
      node["mean_fa"] = means.fa;
      node["mean_ra"] = means.ra;
      node["mean_sa"] = means.sa;
      node["mean_rank_mismatch"] = means.rank_mismatch;
      node["mean_sign_mismatch"] = means.sign_mismatch;
    }
    pairs.push_back(std::move(node));
  }
  out["pairs"] = std::move(pairs);
  out["total_mass"] = summary.histograms.total_mass();
  return dump(out);
}

AggregationConfig parse_config(std::string_view bytes) {
  const json value = parse_json(bytes);
  const Node root(value, "");
  root.require_object();
  AggregationConfig config;
  for (const auto& [key, item] : value.items()) {
    const Node node(item, "/" + key);
    if (key == "small_max") {
      config.small_max = node.as_count();
    } else if (key == "moderate_max") {
      config.moderate_max = node.as_count();
    } else if (key == "k_small") {
      config.k_small = node.as_count();
    } else if (key == "k_moderate") {
      config.k_moderate = node.as_count();
    } else if (key == "k_large") {
      config.k_large = node.as_count();
    } else if (key == "neutral_eps") {
      config.neutral_eps = node.as_real();
    } else if (key == "tie_break") {
      if (node.as_string() != "mean_rank_then_lexicographic") {
        node.fail("unsupported tie_break policy");
      }
    } else if (key == "schema_version") {
      if (node.as_string() != kSchemaVersion) {
        node.fail("unsupported schema_version");
      }
    } else {
      node.fail("unknown config field");
    }
  }
  try {
    config.check();
  } catch (const Error& e) {
    throw ParseError(ParseError::Kind::kSchema, e.what(), "/");
  }
  return config;
}

std::vector<ExplanationSet> import_table(std::string_view text,
                                         const TableLayout& layout) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::read(text);
  } catch (const csv::CsvError& e) {
    throw ParseError(ParseError::Kind::kSyntax,
                     "line " + std::to_string(e.line()) + ": " + e.what(),
                     "line " + std::to_string(e.line()));
  }
  if (rows.empty()) {
    throw ParseError(ParseError::Kind::kSyntax, "empty table: no header row");
  }

  const auto& header = rows.front().fields;
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw ParseError(ParseError::Kind::kSchema,
                     "missing column '" + name + "'", "header");
  };
  const std::size_t instance_col = column(layout.instance_column);
  const std::size_t explainer_col = column(layout.explainer_column);
  const std::size_t feature_col = column(layout.feature_column);
  const std::size_t weight_col = column(layout.weight_column);
  const std::optional<std::size_t> label_col =
      layout.label_column ? std::optional(column(*layout.label_column))
                          : std::nullopt;
  const std::optional<std::size_t> score_col =
      layout.score_column ? std::optional(column(*layout.score_column))
                          : std::nullopt;

  auto parse_real = [](std::string_view field, const std::string& where,
                       const char* what) {
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
      throw ParseError(ParseError::Kind::kSchema,
                       where + ": " + what + " '" + std::string(field) +
                           "' is not a number",
                       where);
    }
    if (!std::isfinite(value)) {
      throw ParseError(ParseError::Kind::kSchema,
                       where + ": non-finite " + what, where);
    }
    return value;
  };

  std::vector<ExplanationSet> sets;
  std::map<std::string, std::size_t> set_index;
  std::set<std::tuple<std::string, std::string, std::string>> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    const std::string where = "line " + std::to_string(row.line);
    if (row.fields.size() != header.size()) {
      throw ParseError(ParseError::Kind::kSchema,
                       where + ": expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(row.fields.size()),
                       where);
    }
    const std::string instance(trim(row.fields[instance_col]));
    const std::string explainer(trim(row.fields[explainer_col]));
    const std::string feature(trim(row.fields[feature_col]));
    const double weight =
        parse_real(trim(row.fields[weight_col]), where, "weight");

    if (!seen.emplace(instance, explainer, feature).second) {
      throw ParseError(ParseError::Kind::kSchema,
                       where + ": DuplicateRecord (" + instance + ", " +
                           explainer + ", " + feature + ")",
                       where);
    }

    auto [it, inserted] = set_index.try_emplace(instance, sets.size());
    if (inserted) {
      ExplanationSet set;
      set.instance_id = instance;
      if (label_col) set.prediction.label = trim(row.fields[*label_col]);
      if (score_col) {
        set.prediction.score =
            parse_real(trim(row.fields[*score_col]), where, "score");
      }
      sets.push_back(std::move(set));
    }
    ExplanationSet& set = sets[it->second];
    auto explanation =
        std::find_if(set.explanations.begin(), set.explanations.end(),
                     [&](const Explanation& e) { return e.explainer == explainer; });
    if (explanation == set.explanations.end()) {
      set.explanations.push_back(Explanation{explainer, {}, {}});
      explanation = std::prev(set.explanations.end());
    }
    explanation->attributions.push_back(FeatureAttribution{feature, weight, {}});
  }

  for (auto& set : sets) {
    for (auto& explanation : set.explanations) {
      std::stable_sort(explanation.attributions.begin(),
                       explanation.attributions.end(),
                       [](const FeatureAttribution& a,
                          const FeatureAttribution& b) {
                         return std::fabs(a.weight) > std::fabs(b.weight);
                       });
    }
  }
  return sets;
}

}  // namespace xmentor
