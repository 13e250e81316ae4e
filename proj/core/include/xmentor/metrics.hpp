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

// Pairwise top-k agreement between two explanations.
//
//   FA = |top_k(a) ∩ top_k(b)| / k
//   RA = |{f in the intersection : rank_a(f) = rank_b(f)}| / k
//   SA = |{f in the intersection : sign_a(f) = sign_b(f)}| / k
//
// The denominator is always k, so RA <= FA and SA <= FA hold structurally.
// k*(FA-RA) and k*(FA-SA) count shared features that disagree in rank and in
// sign respectively.

#ifndef XMENTOR_METRICS_HPP_
#define XMENTOR_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xmentor/model.hpp"

namespace xmentor {

struct PairMetrics {
  std::size_t k = 0;
  double fa = 0.0;
  double ra = 0.0;
  double sa = 0.0;
  std::size_t rank_mismatch_count = 0;
  std::size_t sign_mismatch_count = 0;

  friend bool operator==(const PairMetrics&, const PairMetrics&) = default;
};

double feature_agreement(const Explanation& a, const Explanation& b,
                         std::size_t k);
double rank_agreement(const Explanation& a, const Explanation& b,
                      std::size_t k);
double sign_agreement(const Explanation& a, const Explanation& b,
                      std::size_t k, double neutral_eps = 0.0);

struct DisagreementCounts {
  std::size_t rank_mismatch = 0;
  std::size_t sign_mismatch = 0;

  friend bool operator==(const DisagreementCounts&,
                         const DisagreementCounts&) = default;
};

DisagreementCounts disagreement_counts(const Explanation& a,
                                       const Explanation& b, std::size_t k,
                                       double neutral_eps = 0.0);

// All of the above in one pass. Throws Error for k == 0.
PairMetrics pair_metrics(const Explanation& a, const Explanation& b,
                         std::size_t k, double neutral_eps = 0.0);

enum class Metric { kFeature, kRank, kSign };

std::string_view to_string(Metric metric);
std::optional<Metric> parse_metric(std::string_view text);

// Symmetric matrix of one metric over every explainer pair, diagonal
// included. Rows/columns follow the explainer order of the input set.
class AgreementMatrix {
 public:
  AgreementMatrix(Metric metric, std::size_t k,
                  std::vector<std::string> explainers,
                  std::vector<double> values);

  Metric metric() const { return metric_; }
  std::size_t k() const { return k_; }
  const std::vector<std::string>& explainers() const { return explainers_; }
  std::size_t size() const { return explainers_.size(); }

  double operator()(std::size_t row, std::size_t col) const {
    return values_[row * explainers_.size() + col];
  }
  // Throws LookupError for unknown explainer ids.
  double at(std::string_view a, std::string_view b) const;

 private:
  std::size_t index_of(std::string_view explainer) const;

  Metric metric_;
  std::size_t k_;
  std::vector<std::string> explainers_;
  std::vector<double> values_;  // Row-major.
};

AgreementMatrix pairwise_matrix(const ExplanationSet& set, std::size_t k,
                                Metric metric, double neutral_eps = 0.0);

struct PairReport {
  std::string explainer_a;
  std::string explainer_b;
  PairMetrics metrics;

  friend bool operator==(const PairReport&, const PairReport&) = default;
};

// Every unordered explainer pair (i < j in input order) of one instance.
std::vector<PairReport> pair_reports(const ExplanationSet& set, std::size_t k,
                                     double neutral_eps = 0.0);

// Chooses k per instance: a fixed value, or threshold_k(n, config).
struct KPolicy {
  std::optional<std::size_t> fixed;
  AggregationConfig config;

  static KPolicy Fixed(std::size_t k) { return KPolicy{k, {}}; }
  static KPolicy Threshold(AggregationConfig config = {}) {
    return KPolicy{std::nullopt, config};
  }

  std::size_t resolve(const ExplanationSet& set) const;
};

// Frequency table: mismatch count -> number of (instance, pair) occurrences.
using Histogram = std::map<std::size_t, std::size_t>;

struct PairHistograms {
  // Lexicographically ordered pair: explainer_a < explainer_b.
  std::string explainer_a;
  std::string explainer_b;
  Histogram rank_mismatch;
  Histogram sign_mismatch;
  std::size_t instances = 0;

  friend bool operator==(const PairHistograms&,
                         const PairHistograms&) = default;
};

struct CorpusHistograms {
  // Sorted by (explainer_a, explainer_b).
  std::vector<PairHistograms> pairs;

  // Sum of all frequencies; equals the number of (instance, pair)
  // combinations in the corpus.
  std::size_t total_mass() const;
  // Throws LookupError if the pair never occurs. Order of a/b is irrelevant.
  const PairHistograms& pair(std::string_view a, std::string_view b) const;

  friend bool operator==(const CorpusHistograms&,
                         const CorpusHistograms&) = default;
};

// An empty corpus yields empty histograms.
CorpusHistograms corpus_histograms(std::span<const ExplanationSet> sets,
                                   const KPolicy& policy,
                                   double neutral_eps = 0.0);

}  // namespace xmentor

#endif  // XMENTOR_METRICS_HPP_
