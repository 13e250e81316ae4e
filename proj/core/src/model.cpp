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

#include "xmentor/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace xmentor {

std::string_view to_string(Sign sign) {
  switch (sign) {
    case Sign::kPositive:
      return "positive";
    case Sign::kNegative:
      return "negative";
    case Sign::kNeutral:
      return "neutral";
  }
  return "neutral";
}

char sign_symbol(Sign sign) {
  switch (sign) {
    case Sign::kPositive:
      return '+';
    case Sign::kNegative:
      return '-';
    case Sign::kNeutral:
      return '0';
  }
  return '0';
}

std::optional<Sign> parse_sign(std::string_view text) {
  if (text == "positive" || text == "+") return Sign::kPositive;
  if (text == "negative" || text == "-") return Sign::kNegative;
  if (text == "neutral" || text == "0") return Sign::kNeutral;
  return std::nullopt;
}

Sign derive_sign(double weight, double neutral_eps) {
  if (!std::isfinite(weight)) {
    throw Error("derive_sign: non-finite weight");
  }
  if (std::fabs(weight) <= neutral_eps) return Sign::kNeutral;
  return weight > 0 ? Sign::kPositive : Sign::kNegative;
}

const FeatureAttribution* Explanation::find(std::string_view feature) const {
  for (const auto& attribution : attributions) {
    if (attribution.feature == feature) return &attribution;
  }
  return nullptr;
}

std::optional<std::size_t> Explanation::position_of(
    std::string_view feature) const {
  for (std::size_t i = 0; i < attributions.size(); ++i) {
    if (attributions[i].feature == feature) return i + 1;
  }
  return std::nullopt;
}

std::size_t Explanation::rank_of(std::string_view feature,
                                 std::size_t n) const {
  return position_of(feature).value_or(n + 1);
}

Sign Explanation::sign_of(std::string_view feature, double neutral_eps) const {
  const FeatureAttribution* attribution = find(feature);
  if (attribution == nullptr) return Sign::kNeutral;
  return derive_sign(attribution->weight, neutral_eps);
}

std::vector<std::string> top_k(const Explanation& explanation, std::size_t k) {
  const std::size_t count = std::min(k, explanation.attributions.size());
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(explanation.attributions[i].feature);
  }
  return out;
}

std::vector<std::string> ExplanationSet::feature_universe() const {
  std::set<std::string> universe;
  for (const auto& explanation : explanations) {
    for (const auto& attribution : explanation.attributions) {
      universe.insert(attribution.feature);
    }
  }
  return {universe.begin(), universe.end()};
}

const Explanation& ExplanationSet::explanation(
    std::string_view explainer) const {
  for (const auto& explanation : explanations) {
    if (explanation.explainer == explainer) return explanation;
  }
  throw LookupError("unknown explainer '" + std::string(explainer) +
                    "' in instance '" + instance_id + "'");
}

void AggregationConfig::check() const {
  if (small_max == 0 || moderate_max == 0) {
    throw Error("config: small_max and moderate_max must be positive");
  }
  if (small_max >= moderate_max) {
    throw Error("config: small_max must be < moderate_max");
  }
  if (k_small == 0 || k_moderate == 0 || k_large == 0) {
    throw Error("config: k_small, k_moderate and k_large must be positive");
  }
  if (k_small > k_moderate || k_moderate > k_large) {
    throw Error("config: require k_small <= k_moderate <= k_large");
  }
  if (!std::isfinite(neutral_eps) || neutral_eps < 0) {
    throw Error("config: neutral_eps must be finite and non-negative");
  }
}

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kTooFewExplainers:
      return "TooFewExplainers";
    case FindingKind::kDuplicateExplainer:
      return "DuplicateExplainer";
    case FindingKind::kEmptyExplainerId:
      return "EmptyExplainerId";
    case FindingKind::kEmptyInstanceId:
      return "EmptyInstanceId";
    case FindingKind::kDuplicateFeature:
      return "DuplicateFeature";
    case FindingKind::kEmptyFeatureId:
      return "EmptyFeatureId";
    case FindingKind::kNonFiniteWeight:
      return "NonFiniteWeight";
    case FindingKind::kEmptyFeatureUniverse:
      return "EmptyFeatureUniverse";
    case FindingKind::kScoreOutOfRange:
      return "ScoreOutOfRange";
    case FindingKind::kUnsortedWeights:
      return "UnsortedWeights";
  }
  return "Unknown";
}

std::vector<Finding> validate(const ExplanationSet& set) {
  std::vector<Finding> findings;
  auto add = [&](FindingKind kind, std::string explainer, std::string feature,
                 std::string message,
                 Severity severity = Severity::kError) {
    findings.push_back(Finding{kind, severity, set.instance_id,
                               std::move(explainer), std::move(feature),
                               std::move(message)});
  };

  if (set.instance_id.empty()) {
    add(FindingKind::kEmptyInstanceId, "", "", "instance_id is empty");
  }
  if (set.prediction.score.has_value()) {
    const double score = *set.prediction.score;
    if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
      add(FindingKind::kScoreOutOfRange, "", "",
          "prediction score must lie in [0, 1]");
    }
  }
  if (set.explanations.size() < 2) {
    add(FindingKind::kTooFewExplainers, "", "",
        "at least 2 explanations are required, got " +
            std::to_string(set.explanations.size()));
  }

  std::set<std::string> explainers;
  std::size_t listed = 0;
  for (const auto& explanation : set.explanations) {
    if (explanation.explainer.empty()) {
      add(FindingKind::kEmptyExplainerId, "", "", "explainer id is empty");
    } else if (!explainers.insert(explanation.explainer).second) {
      add(FindingKind::kDuplicateExplainer, explanation.explainer, "",
          "explainer id appears more than once");
    }

    std::set<std::string> features;
    bool sorted = true;
    double previous = 0.0;
    for (std::size_t i = 0; i < explanation.attributions.size(); ++i) {
      const auto& attribution = explanation.attributions[i];
      ++listed;
      if (attribution.feature.empty()) {
        add(FindingKind::kEmptyFeatureId, explanation.explainer, "",
            "feature id at position " + std::to_string(i + 1) + " is empty");
      } else if (!features.insert(attribution.feature).second) {
        add(FindingKind::kDuplicateFeature, explanation.explainer,
            attribution.feature, "feature listed more than once");
      }
      if (!std::isfinite(attribution.weight)) {
        add(FindingKind::kNonFiniteWeight, explanation.explainer,
            attribution.feature, "weight is not finite");
        sorted = false;  // Ordering is meaningless with NaN; skip the check.
        continue;
      }
      const double magnitude = std::fabs(attribution.weight);
      if (i > 0 && sorted && magnitude > previous) {
        add(FindingKind::kUnsortedWeights, explanation.explainer,
            attribution.feature,
            "|weight| increases at position " + std::to_string(i + 1) +
                "; list order is used as rank",
            Severity::kWarning);
        sorted = false;
      }
      previous = magnitude;
    }
  }
  if (listed == 0) {
    add(FindingKind::kEmptyFeatureUniverse, "", "",
        "no explanation lists any feature");
  }
  return findings;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::kError;
  });
}

std::string describe(const Finding& finding) {
  std::ostringstream out;
  out << (finding.severity == Severity::kError ? "error" : "warning") << " "
      << to_string(finding.kind) << " [instance '" << finding.instance_id
      << "'";
  if (!finding.explainer.empty()) {
    out << ", explainer '" << finding.explainer << "'";
  }
  if (!finding.feature.empty()) {
    out << ", feature '" << finding.feature << "'";
  }
  out << "]: " << finding.message;
  return out.str();
}

namespace {

std::string summarize(const std::vector<Finding>& findings) {
  std::string text = "invalid explanation set";
  for (const auto& finding : findings) {
    if (finding.severity != Severity::kError) continue;
    text += "; " + describe(finding);
  }
  return text;
}

}  // namespace

ValidationError::ValidationError(std::vector<Finding> findings)
    : Error(summarize(findings)), findings_(std::move(findings)) {}

void require_valid(const ExplanationSet& set) {
  auto findings = validate(set);
  if (has_errors(findings)) throw ValidationError(std::move(findings));
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kLooseRank:
      return "loose_rank";
    case Mode::kLooseSign:
      return "loose_sign";
  }
  return "unknown";
}

bool AggregationTrace::fired(Mode mode) const {
  return std::find(modes_used.begin(), modes_used.end(), mode) !=
         modes_used.end();
}

std::vector<std::string> AggregatedExplanation::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features.size());
  for (const auto& entry : features) names.push_back(entry.feature);
  return names;
}

}  // namespace xmentor
