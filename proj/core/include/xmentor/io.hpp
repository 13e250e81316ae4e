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

// The "xmentor/1" interchange format.
//
// An explanation document is a JSON object:
//
//   {
//     "schema_version": "xmentor/1",
//     "instance_id": "...",
//     "prediction": {"label": "Defect", "score": 0.83},
//     "explanations": [
//       {"explainer": "LIME",
//        "attributions": [{"feature": "CountLine", "weight": 0.24}, ...]},
//       ...
//     ]
//   }
//
// A corpus is a JSON array of documents, or newline-delimited documents.
// Aggregation, metrics, validation and report documents share the envelope
// and carry a "kind" field. All writers emit canonical text: sorted keys,
// shortest round-trip number formatting, trailing newline.

#ifndef XMENTOR_IO_HPP_
#define XMENTOR_IO_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmentor/metrics.hpp"
#include "xmentor/model.hpp"

namespace xmentor {

inline constexpr std::string_view kSchemaVersion = "xmentor/1";

class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kSchema, kValidation };

  ParseError(Kind kind, std::string message, std::string path = {},
             std::optional<std::size_t> byte_offset = std::nullopt,
             std::vector<Finding> findings = {});

  Kind kind() const { return kind_; }
  // JSON pointer of the offending field, empty if not applicable.
  const std::string& path() const { return path_; }
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  Kind kind_;
  std::string path_;
  std::optional<std::size_t> byte_offset_;
  std::vector<Finding> findings_;
};

std::string_view to_string(ParseError::Kind kind);

// Parses and validates one explanation document.
ExplanationSet parse_document(std::string_view bytes);

// Parses a corpus: a JSON array of documents, a single document, or
// newline-delimited documents. Every element is validated.
std::vector<ExplanationSet> parse_corpus(std::string_view bytes);

// Like parse_corpus but skips validation; for the `validate` subcommand,
// which reports findings instead of failing.
std::vector<ExplanationSet> parse_corpus_unvalidated(std::string_view bytes);

std::string write_document(const ExplanationSet& set);
std::string write_corpus(std::span<const ExplanationSet> sets);

std::string write_aggregation(const AggregatedExplanation& result,
                              bool with_trace);
std::string write_aggregations(std::span<const AggregatedExplanation> results,
                               bool with_trace);
AggregatedExplanation parse_aggregation(std::string_view bytes);

struct InstanceMetrics {
  std::string instance_id;
  std::size_t k = 0;
  std::vector<PairReport> pairs;
  // FA, RA, SA matrices; empty when only a single pair was requested.
  std::vector<AgreementMatrix> matrices;
};

std::string write_metrics(const InstanceMetrics& metrics);
std::string write_metrics(std::span<const InstanceMetrics> metrics);

struct InstanceFindings {
  std::string instance_id;
  std::vector<Finding> findings;
};

std::string write_findings(const InstanceFindings& findings);
std::string write_findings(std::span<const InstanceFindings> findings);

// Summary of a `report` run.
struct ReportSummary {
  std::size_t instances = 0;
  CorpusHistograms histograms;
  // Mean FA/RA/SA per explainer pair, aligned with histograms.pairs.
  struct PairMeans {
    double fa = 0.0;
    double ra = 0.0;
    double sa = 0.0;
    double rank_mismatch = 0.0;
    double sign_mismatch = 0.0;
  };
  std::vector<PairMeans> means;
};

std::string write_report_summary(const ReportSummary& summary);

// Parses a JSON aggregation config; absent fields keep their defaults.
AggregationConfig parse_config(std::string_view bytes);

// Column names for import_table. Label and score columns are optional.
struct TableLayout {
  std::string instance_column = "instance_id";
  std::string explainer_column = "explainer";
  std::string feature_column = "feature";
  std::string weight_column = "weight";
  std::optional<std::string> label_column;
  std::optional<std::string> score_column;
};

// Long-format CSV (header row, comma separated, UTF-8) to explanation sets,
// one per instance id in order of first appearance. Attributions are ordered
// by |weight| descending, ties in row order. Throws ParseError for missing
// columns, malformed rows or a duplicate (instance, explainer, feature).
std::vector<ExplanationSet> import_table(std::string_view csv,
                                         const TableLayout& layout = {});

}  // namespace xmentor

#endif  // XMENTOR_IO_HPP_
