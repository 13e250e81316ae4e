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

#include "xmentor/aggregate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace xmentor {
namespace {

using MeanRanks = std::unordered_map<std::string, double>;

MeanRanks compute_mean_ranks(const ExplanationSet& set,
                             const std::vector<std::string>& universe) {
  const std::size_t n = universe.size();
  MeanRanks out;
  out.reserve(universe.size());
  for (const auto& feature : universe) {
    out.emplace(feature, mean_rank(set, feature, n));
  }
  return out;
}

// Strict weak order on (key, mean rank, name).
struct Keyed {
  double key;
  double mean_rank;
  std::string feature;

  bool operator<(const Keyed& other) const {
    if (key != other.key) return key < other.key;
    if (mean_rank != other.mean_rank) return mean_rank < other.mean_rank;
    return feature < other.feature;
  }
};

std::vector<std::string> names_of(const std::vector<RankedFeature>& ranked) {
  std::vector<std::string> names;
  names.reserve(ranked.size());
  for (const auto& entry : ranked) names.push_back(entry.feature);
  return names;
}

std::size_t sign_index(Sign sign) { return static_cast<std::size_t>(sign); }

}  // namespace

std::size_t threshold_k(std::size_t n, const AggregationConfig& config) {
  if (n == 0) throw Error("threshold_k: feature universe is empty");
  std::size_t k = config.k_large;
  if (n <= config.small_max) {
    k = config.k_small;
  } else if (n <= config.moderate_max) {
    k = config.k_moderate;
  }
  return std::min(k, n);
}

double mean_rank(const ExplanationSet& set, const std::string& feature,
                 std::size_t n) {
  if (set.explanations.empty()) return static_cast<double>(n + 1);
  std::size_t total = 0;
  for (const auto& explanation : set.explanations) {
    total += explanation.rank_of(feature, n);
  }
  return static_cast<double>(total) /
         static_cast<double>(set.explanations.size());
}

std::vector<RankTally> rank_tallies(const ExplanationSet& set) {
  const auto universe = set.feature_universe();
  const std::size_t n = universe.size();
  const MeanRanks means = compute_mean_ranks(set, universe);

  std::vector<RankTally> tallies;
  tallies.reserve(n);
  for (std::size_t rank = 1; rank <= n; ++rank) {
    RankTally tally;
    tally.rank = rank;
    for (const auto& explanation : set.explanations) {
      if (explanation.size() >= rank) {
        ++tally.votes[explanation.attributions[rank - 1].feature];
      }
    }
    if (!tally.votes.empty()) {
      std::size_t best_votes = 0;
      for (const auto& [feature, votes] : tally.votes) {
        best_votes = std::max(best_votes, votes);
      }
      const std::string* best = nullptr;
      std::size_t leaders = 0;
      for (const auto& [feature, votes] : tally.votes) {
        if (votes != best_votes) continue;
        ++leaders;
        // `votes` iterates in name order, so strict < keeps the smaller name
        // on equal mean rank.
        if (best == nullptr || means.at(feature) < means.at(*best)) {
          best = &feature;
        }
      }
      tally.plurality = *best;
      tally.tie_broken = leaders > 1;
      for (const auto& [feature, votes] : tally.votes) {
        if (feature != *best) tally.minority_alternatives.insert(feature);
      }
    }
    tallies.push_back(std::move(tally));
  }
  return tallies;
}

StrictRankResult strict_rank_select(const ExplanationSet& set) {
  StrictRankResult result;
  result.tallies = rank_tallies(set);
  std::set<std::string> selected;

  for (const auto& tally : result.tallies) {
    if (!tally.plurality.has_value()) continue;
    if (tally.tie_broken) result.tie_break_ranks.push_back(tally.rank);
    const std::string& head = *tally.plurality;
    if (!result.blacklist.contains(head) && !selected.contains(head)) {
      selected.insert(head);
      result.selected.push_back(RankedFeature{head, tally.rank});
    }
    for (const auto& alternative : tally.minority_alternatives) {
      if (!selected.contains(alternative)) {
        result.blacklist.insert(alternative);
      }
    }
  }
  return result;
}

std::vector<RankedFeature> loose_rank_extend(const StrictRankResult& strict,
                                             const ExplanationSet& set,
                                             std::size_t k) {
  if (strict.selected.size() >= k) return strict.selected;

  const auto universe = set.feature_universe();
  const MeanRanks means = compute_mean_ranks(set, universe);

  std::unordered_map<std::string, std::size_t> first_plurality;
  for (const auto& tally : strict.tallies) {
    if (tally.plurality.has_value()) {
      first_plurality.try_emplace(*tally.plurality, tally.rank);
    }
  }

  std::set<std::string> selected;
  std::vector<Keyed> keyed;
  keyed.reserve(universe.size());
  for (const auto& entry : strict.selected) {
    selected.insert(entry.feature);
    keyed.push_back(Keyed{static_cast<double>(entry.consensus_rank),
                          means.at(entry.feature), entry.feature});
  }
  for (const auto& feature : universe) {
    if (selected.contains(feature)) continue;
    const auto it = first_plurality.find(feature);
    const double key = it != first_plurality.end()
                           ? static_cast<double>(it->second)
                           : means.at(feature);
    keyed.push_back(Keyed{key, means.at(feature), feature});
  }
  std::sort(keyed.begin(), keyed.end());

  // Integer ranks stay strictly ascending; a fractional mean-rank key takes
  // the next free integer at or above it.
  std::vector<RankedFeature> candidates;
  candidates.reserve(keyed.size());
  std::size_t previous = 0;
  for (const auto& entry : keyed) {
    const auto ceiling = static_cast<std::size_t>(std::ceil(entry.key));
    const std::size_t rank = std::max(ceiling, previous + 1);
    candidates.push_back(RankedFeature{entry.feature, rank});
    previous = rank;
  }
  return candidates;
}

SignProfile sign_profile(const ExplanationSet& set, const std::string& feature,
                         double neutral_eps) {
  const bool listed = std::any_of(
      set.explanations.begin(), set.explanations.end(),
      [&](const Explanation& e) { return e.find(feature) != nullptr; });
  if (!listed) {
    throw LookupError("unknown feature '" + feature + "' in instance '" +
                      set.instance_id + "'");
  }

  SignProfile profile;
  profile.feature = feature;
  std::array<std::size_t, 3> counts{};
  for (const auto& explanation : set.explanations) {
    const Sign sign = explanation.sign_of(feature, neutral_eps);
    profile.per_explainer_signs.push_back(sign);
    ++counts[sign_index(sign)];
  }
  const std::size_t total = profile.per_explainer_signs.size();
  for (const Sign sign : {Sign::kPositive, Sign::kNegative, Sign::kNeutral}) {
    if (2 * counts[sign_index(sign)] > total) profile.majority_sign = sign;
    if (counts[sign_index(sign)] == total) profile.unanimous = true;
  }
  return profile;
}

std::vector<RankedFeature> strict_sign_filter(
    const std::vector<RankedFeature>& candidates, const ExplanationSet& set,
    double neutral_eps) {
  std::vector<RankedFeature> survivors;
  for (const auto& candidate : candidates) {
    if (sign_profile(set, candidate.feature, neutral_eps).unanimous) {
      survivors.push_back(candidate);
    }
  }
  return survivors;
}

std::vector<RankedFeature> loose_sign_filter(
    const std::vector<RankedFeature>& candidates, const ExplanationSet& set,
    double neutral_eps) {
  std::vector<RankedFeature> survivors;
  for (const auto& candidate : candidates) {
    if (sign_profile(set, candidate.feature, neutral_eps)
            .majority_sign.has_value()) {
      survivors.push_back(candidate);
    }
  }
  return survivors;
}

AggregatedExplanation finalize(const std::vector<RankedFeature>& survivors,
                               const ExplanationSet& set, std::size_t k,
                               AggregationTrace trace, double neutral_eps) {
  const auto universe = set.feature_universe();
  const std::size_t n = universe.size();

  std::vector<std::pair<Keyed, std::size_t>> order;
  order.reserve(survivors.size());
  for (const auto& survivor : survivors) {
    order.emplace_back(
        Keyed{static_cast<double>(survivor.consensus_rank),
              mean_rank(set, survivor.feature, n), survivor.feature},
        survivor.consensus_rank);
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (order.size() > k) order.resize(k);

  std::vector<const Explanation*> by_name;
  by_name.reserve(set.explanations.size());
  for (const auto& explanation : set.explanations) {
    by_name.push_back(&explanation);
  }
  std::sort(by_name.begin(), by_name.end(),
            [](const Explanation* a, const Explanation* b) {
              return a->explainer < b->explainer;
            });

  AggregatedExplanation result;
  result.instance_id = set.instance_id;
  result.prediction = set.prediction;
  for (const auto* explanation : by_name) {
    result.explainers.push_back(explanation->explainer);
  }

  for (const auto& [keyed, consensus_rank] : order) {
    const std::string& feature = keyed.feature;
    AggregatedFeature entry;
    entry.feature = feature;
    entry.consensus_rank = consensus_rank;

    std::vector<double> weights;
    weights.reserve(by_name.size());
    for (const auto* explanation : by_name) {
      const FeatureAttribution* attribution = explanation->find(feature);
      weights.push_back(attribution != nullptr ? attribution->weight : 0.0);
      entry.explainer_signs.push_back(
          explanation->sign_of(feature, neutral_eps));
    }
    // Summation order fixed by value so reordering explainers cannot change
    // the rounding.
    std::sort(weights.begin(), weights.end());
    double sum = 0.0;
    for (const double w : weights) sum += w;
    entry.mean_weight =
        weights.empty() ? 0.0 : sum / static_cast<double>(weights.size());

    const SignProfile profile = sign_profile(set, feature, neutral_eps);
    entry.sign = profile.majority_sign.value_or(Sign::kNeutral);
    entry.support = static_cast<std::size_t>(
        std::count(entry.explainer_signs.begin(), entry.explainer_signs.end(),
                   entry.sign));
    result.features.push_back(std::move(entry));
  }

  result.trace = std::move(trace);
  if (result.features.empty() && result.trace.note.empty()) {
    result.trace.note = "no feature survived aggregation";
  }
  return result;
}

AggregatedExplanation aggregate(const ExplanationSet& set,
                                const AggregationConfig& config) {
  config.check();
  require_valid(set);

  const std::size_t n = set.feature_universe().size();
  const std::size_t k = threshold_k(n, config);
  const double eps = config.neutral_eps;

  AggregationTrace trace;
  trace.feature_count = n;
  trace.k_used = k;

  StrictRankResult strict = strict_rank_select(set);
  trace.strict_rank_set = strict.selected;
  trace.blacklist.assign(strict.blacklist.begin(), strict.blacklist.end());
  trace.tie_break_ranks = strict.tie_break_ranks;

  std::vector<RankedFeature> candidates = strict.selected;
  if (strict.selected.size() < k) {
    candidates = loose_rank_extend(strict, set, k);
    trace.loose_rank_set = candidates;
    trace.modes_used.push_back(Mode::kLooseRank);
  }

  std::vector<RankedFeature> survivors =
      strict_sign_filter(candidates, set, eps);
  trace.strict_sign_set = names_of(survivors);
  if (survivors.size() < k) {
    survivors = loose_sign_filter(candidates, set, eps);
    trace.loose_sign_set = names_of(survivors);
    trace.modes_used.push_back(Mode::kLooseSign);
  }

  if (candidates.empty()) {
    trace.note = "strict and loose rank agreement produced no candidates";
  } else if (survivors.empty()) {
    trace.note = "no candidate has a majority sign";
  }
  return finalize(survivors, set, k, std::move(trace), eps);
}

}  // namespace xmentor
