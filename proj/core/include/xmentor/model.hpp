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

// Domain types shared by every xmentor module: signed feature attributions,
// per-explainer ranked explanations, explanation sets, the aggregation
// configuration and the aggregated result.
//
// Rank convention: the 1-based position of a feature in an explanation's
// attribution list is its rank. A feature that an explainer does not list has
// rank n+1 and a Neutral sign, where n is the size of the feature universe of
// the enclosing ExplanationSet.

#ifndef XMENTOR_MODEL_HPP_
#define XMENTOR_MODEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xmentor {

// Unknown document fields, keyed by field name, stored as canonical JSON text
// so they survive a parse/write round trip untouched.
using Extensions = std::map<std::string, std::string>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an explainer or feature id does not exist in a set or matrix.
class LookupError : public Error {
 public:
  using Error::Error;
};

enum class Sign { kPositive, kNegative, kNeutral };

// "positive" / "negative" / "neutral".
std::string_view to_string(Sign sign);
// '+', '-' or '0'.
char sign_symbol(Sign sign);
std::optional<Sign> parse_sign(std::string_view text);

// Neutral iff |weight| <= neutral_eps, otherwise the sign of weight.
// Throws Error for NaN or infinite weights.
Sign derive_sign(double weight, double neutral_eps = 0.0);

struct FeatureAttribution {
  std::string feature;
  double weight = 0.0;
  Extensions extensions;

  friend bool operator==(const FeatureAttribution&,
                         const FeatureAttribution&) = default;
};

struct Explanation {
  std::string explainer;
  // Rank order. Position i holds the feature of rank i+1.
  std::vector<FeatureAttribution> attributions;
  Extensions extensions;

  std::size_t size() const { return attributions.size(); }

  // nullptr when the feature is not listed.
  const FeatureAttribution* find(std::string_view feature) const;

  // 1-based position, or nullopt when the feature is not listed.
  std::optional<std::size_t> position_of(std::string_view feature) const;

  // Rank under the missing-feature convention: position, or n+1 if absent.
  std::size_t rank_of(std::string_view feature, std::size_t n) const;

  // Sign under the missing-feature convention: Neutral if absent.
  Sign sign_of(std::string_view feature, double neutral_eps = 0.0) const;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

// First min(k, size) features in rank order.
std::vector<std::string> top_k(const Explanation& explanation, std::size_t k);

struct Prediction {
  std::string label;
  std::optional<double> score;
  Extensions extensions;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct ExplanationSet {
  std::string instance_id;
  Prediction prediction;
  std::vector<Explanation> explanations;
  Extensions extensions;

  // Union of features over all explanations, sorted lexicographically.
  std::vector<std::string> feature_universe() const;

  // Throws LookupError when no explanation has that explainer id.
  const Explanation& explanation(std::string_view explainer) const;

  friend bool operator==(const ExplanationSet&, const ExplanationSet&) =
      default;
};

enum class TieBreak { kMeanRankThenLexicographic };

struct AggregationConfig {
  std::size_t small_max = 6;
  std::size_t moderate_max = 15;
  std::size_t k_small = 3;
  std::size_t k_moderate = 5;
  std::size_t k_large = 10;
  double neutral_eps = 0.0;
  TieBreak tie_break = TieBreak::kMeanRankThenLexicographic;

  // Throws Error if the boundaries or k values are inconsistent.
  void check() const;

  friend bool operator==(const AggregationConfig&,
                         const AggregationConfig&) = default;
};

// ---------------------------------------------------------------------------
// Validation.

enum class Severity { kError, kWarning };

enum class FindingKind {
  kTooFewExplainers,
  kDuplicateExplainer,
  kEmptyExplainerId,
  kEmptyInstanceId,
  kDuplicateFeature,
  kEmptyFeatureId,
  kNonFiniteWeight,
  kEmptyFeatureUniverse,
  kScoreOutOfRange,
  kUnsortedWeights,
};

std::string_view to_string(FindingKind kind);

struct Finding {
  FindingKind kind;
  Severity severity = Severity::kError;
  std::string instance_id;
  std::string explainer;
  std::string feature;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// One finding per violated invariant, empty for a well-formed set. Unsorted
// weights are reported with Severity::kWarning since list order is
// authoritative for rank.
std::vector<Finding> validate(const ExplanationSet& set);

bool has_errors(const std::vector<Finding>& findings);

// Raised when an operation that requires a valid set receives an invalid one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Finding> findings);
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

// Throws ValidationError if validate() reports any error-severity finding.
void require_valid(const ExplanationSet& set);

std::string describe(const Finding& finding);

// ---------------------------------------------------------------------------
// Aggregated output.

struct RankedFeature {
  std::string feature;
  std::size_t consensus_rank = 0;

  friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

enum class Mode { kLooseRank, kLooseSign };

std::string_view to_string(Mode mode);

struct AggregationTrace {
  std::size_t feature_count = 0;
  std::size_t k_used = 0;
  std::vector<RankedFeature> strict_rank_set;
  // Sorted lexicographically.
  std::vector<std::string> blacklist;
  // Candidates after loose rank extension; empty when loose rank did not fire.
  std::vector<RankedFeature> loose_rank_set;
  std::vector<std::string> strict_sign_set;
  // Empty when loose sign did not fire.
  std::vector<std::string> loose_sign_set;
  std::vector<Mode> modes_used;
  // Ranks whose plurality was decided by the tie-break rule.
  std::vector<std::size_t> tie_break_ranks;
  std::string note;

  bool fired(Mode mode) const;

  friend bool operator==(const AggregationTrace&,
                         const AggregationTrace&) = default;
};

struct AggregatedFeature {
  std::string feature;
  std::size_t consensus_rank = 0;
  Sign sign = Sign::kNeutral;
  // Mean over all explainers, a missing feature counting as 0.
  double mean_weight = 0.0;
  // Explainers whose sign equals `sign`.
  std::size_t support = 0;
  // One sign per explainer, aligned with AggregatedExplanation::explainers.
  std::vector<Sign> explainer_signs;

  friend bool operator==(const AggregatedFeature&,
                         const AggregatedFeature&) = default;
};

struct AggregatedExplanation {
  std::string instance_id;
  Prediction prediction;
  // Explainer ids sorted lexicographically, so the result does not depend
  // on the order explanations appear in the input document.
  std::vector<std::string> explainers;
  std::vector<AggregatedFeature> features;
  AggregationTrace trace;

  std::vector<std::string> feature_names() const;

  friend bool operator==(const AggregatedExplanation&,
                         const AggregatedExplanation&) = default;
};

}  // namespace xmentor

#endif  // XMENTOR_MODEL_HPP_
