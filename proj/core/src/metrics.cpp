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

#include "xmentor/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "xmentor/aggregate.hpp"

namespace xmentor {
namespace {

struct Counts {
  std::size_t shared = 0;
  std::size_t same_rank = 0;
  std::size_t same_sign = 0;
};

Counts count_agreement(const Explanation& a, const Explanation& b,
                       std::size_t k, double neutral_eps) {
  if (k == 0) throw Error("agreement metrics require k >= 1");
  const std::size_t depth_a = std::min(k, a.size());
  const std::size_t depth_b = std::min(k, b.size());

  std::unordered_map<std::string_view, std::size_t> positions_b;
  positions_b.reserve(depth_b);
  for (std::size_t j = 0; j < depth_b; ++j) {
    positions_b.emplace(b.attributions[j].feature, j);
  }

  Counts counts;
  for (std::size_t i = 0; i < depth_a; ++i) {
    const auto& attribution = a.attributions[i];
    const auto it = positions_b.find(attribution.feature);
    if (it == positions_b.end()) continue;
    ++counts.shared;
    if (it->second == i) ++counts.same_rank;
    if (derive_sign(attribution.weight, neutral_eps) ==
        derive_sign(b.attributions[it->second].weight, neutral_eps)) {
      ++counts.same_sign;
    }
  }
  return counts;
}

double ratio(std::size_t count, std::size_t k) {
  return static_cast<double>(count) / static_cast<double>(k);
}

}  // namespace

double feature_agreement(const Explanation& a, const Explanation& b,
                         std::size_t k) {
  return ratio(count_agreement(a, b, k, 0.0).shared, k);
}

double rank_agreement(const Explanation& a, const Explanation& b,
                      std::size_t k) {
  return ratio(count_agreement(a, b, k, 0.0).same_rank, k);
}

double sign_agreement(const Explanation& a, const Explanation& b,
                      std::size_t k, double neutral_eps) {
  return ratio(count_agreement(a, b, k, neutral_eps).same_sign, k);
}

DisagreementCounts disagreement_counts(const Explanation& a,
                                       const Explanation& b, std::size_t k,
                                       double neutral_eps) {
  const Counts counts = count_agreement(a, b, k, neutral_eps);
  return {counts.shared - counts.same_rank, counts.shared - counts.same_sign};
}

PairMetrics pair_metrics(const Explanation& a, const Explanation& b,
                         std::size_t k, double neutral_eps) {
  const Counts counts = count_agreement(a, b, k, neutral_eps);
  PairMetrics metrics;
  metrics.k = k;
  metrics.fa = ratio(counts.shared, k);
  metrics.ra = ratio(counts.same_rank, k);
  metrics.sa = ratio(counts.same_sign, k);
  metrics.rank_mismatch_count = counts.shared - counts.same_rank;
  metrics.sign_mismatch_count = counts.shared - counts.same_sign;
  return metrics;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kFeature:
      return "FA";
    case Metric::kRank:
      return "RA";
    case Metric::kSign:
      return "SA";
  }
  return "FA";
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "FA" || text == "fa") return Metric::kFeature;
  if (text == "RA" || text == "ra") return Metric::kRank;
  if (text == "SA" || text == "sa") return Metric::kSign;
  return std::nullopt;
}

AgreementMatrix::AgreementMatrix(Metric metric, std::size_t k,
                                 std::vector<std::string> explainers,
                                 std::vector<double> values)
    : metric_(metric),
      k_(k),
      explainers_(std::move(explainers)),
      values_(std::move(values)) {
  if (values_.size() != explainers_.size() * explainers_.size()) {
    throw Error("AgreementMatrix: value count does not match explainers");
  }
}

std::size_t AgreementMatrix::index_of(std::string_view explainer) const {
  const auto it = std::find(explainers_.begin(), explainers_.end(), explainer);
  if (it == explainers_.end()) {
    throw LookupError("unknown explainer '" + std::string(explainer) +
                      "' in agreement matrix");
  }
  return static_cast<std::size_t>(it - explainers_.begin());
}

double AgreementMatrix::at(std::string_view a, std::string_view b) const {
  return (*this)(index_of(a), index_of(b));
}

AgreementMatrix pairwise_matrix(const ExplanationSet& set, std::size_t k,
                                Metric metric, double neutral_eps) {
  if (set.explanations.size() < 2) {
    throw Error("pairwise_matrix requires at least 2 explanations");
  }
  const std::size_t m = set.explanations.size();
  std::vector<std::string> explainers;
  explainers.reserve(m);
  for (const auto& explanation : set.explanations) {
    explainers.push_back(explanation.explainer);
  }

  std::vector<double> values(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const PairMetrics pm = pair_metrics(set.explanations[i],
                                          set.explanations[j], k, neutral_eps);
      double value = pm.fa;
      if (metric == Metric::kRank) value = pm.ra;
      if (metric == Metric::kSign) value = pm.sa;
      values[i * m + j] = value;
      values[j * m + i] = value;
    }
  }
  return AgreementMatrix(metric, k, std::move(explainers), std::move(values));
}

std::vector<PairReport> pair_reports(const ExplanationSet& set, std::size_t k,
                                     double neutral_eps) {
  std::vector<PairReport> reports;
  const auto& explanations = set.explanations;
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    for (std::size_t j = i + 1; j < explanations.size(); ++j) {
      reports.push_back(PairReport{
          explanations[i].explainer, explanations[j].explainer,
          pair_metrics(explanations[i], explanations[j], k, neutral_eps)});
    }
  }
  return reports;
}

std::size_t KPolicy::resolve(const ExplanationSet& set) const {
  if (fixed.has_value()) return *fixed;
  return threshold_k(set.feature_universe().size(), config);
}

std::size_t CorpusHistograms::total_mass() const {
  std::size_t mass = 0;
  for (const auto& entry : pairs) {
    for (const auto& [value, frequency] : entry.rank_mismatch) {
      mass += frequency;
    }
  }
  return mass;
}

const PairHistograms& CorpusHistograms::pair(std::string_view a,
                                             std::string_view b) const {
  if (b < a) std::swap(a, b);
  for (const auto& entry : pairs) {
    if (entry.explainer_a == a && entry.explainer_b == b) return entry;
  }
  throw LookupError("no histogram for explainer pair '" + std::string(a) +
                    ":" + std::string(b) + "'");
}

CorpusHistograms corpus_histograms(std::span<const ExplanationSet> sets,
                                   const KPolicy& policy, double neutral_eps) {
  // Merge in instance_id order so the result is independent of input order.
  std::vector<const ExplanationSet*> ordered;
  ordered.reserve(sets.size());
  for (const auto& set : sets) ordered.push_back(&set);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ExplanationSet* a, const ExplanationSet* b) {
                     return a->instance_id < b->instance_id;
                   });

  std::map<std::pair<std::string, std::string>, PairHistograms> merged;
  for (const ExplanationSet* set : ordered) {
    const std::size_t k = policy.resolve(*set);
    for (const auto& report : pair_reports(*set, k, neutral_eps)) {
      auto key = std::minmax(report.explainer_a, report.explainer_b);
      auto [it, inserted] = merged.try_emplace(
          std::pair<std::string, std::string>(key.first, key.second));
      PairHistograms& entry = it->second;
      if (inserted) {
        entry.explainer_a = key.first;
        entry.explainer_b = key.second;
      }
      ++entry.rank_mismatch[report.metrics.rank_mismatch_count];
      ++entry.sign_mismatch[report.metrics.sign_mismatch_count];
      ++entry.instances;
    }
  }

  CorpusHistograms out;
  out.pairs.reserve(merged.size());
  for (auto& [key, entry] : merged) out.pairs.push_back(std::move(entry));
  return out;
}

}  // namespace xmentor
