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

// Rank-aware aggregation of several explanations into one top-k explanation.
//
// Stages, in order:
//   1. threshold_k        k from the feature-universe size n.
//   2. strict_rank_select per rank, select the plurality feature; blacklist
//                         the minority alternatives.
//   3. loose_rank_extend  only if fewer than k were selected: restore every
//                         unselected feature at its plurality rank (or mean
//                         rank if it never was a plurality).
//   4. strict_sign_filter keep candidates whose sign is unanimous.
//   5. loose_sign_filter  only if fewer than k survived: keep candidates with
//                         a strict-majority sign.
//   6. finalize           order by consensus rank and keep the top k.
//
// Plurality ties are broken by the smallest mean rank across explainers
// (missing features rank n+1), then by feature name. Neither rule depends on
// the order of explanations in the input.

#ifndef XMENTOR_AGGREGATE_HPP_
#define XMENTOR_AGGREGATE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xmentor/model.hpp"

namespace xmentor {

std::size_t threshold_k(std::size_t n, const AggregationConfig& config = {});

// Mean rank of `feature` over all explanations, missing features counting as
// n+1.
double mean_rank(const ExplanationSet& set, const std::string& feature,
                 std::size_t n);

struct RankTally {
  std::size_t rank = 0;
  std::map<std::string, std::size_t> votes;
  std::optional<std::string> plurality;
  std::set<std::string> minority_alternatives;
  // More than one feature shared the maximal vote count.
  bool tie_broken = false;
};

// Tallies for ranks 1..n. A rank no explainer reaches has empty votes.
std::vector<RankTally> rank_tallies(const ExplanationSet& set);

struct StrictRankResult {
  std::vector<RankedFeature> selected;  // Ascending consensus rank.
  std::set<std::string> blacklist;
  std::vector<RankTally> tallies;
  std::vector<std::size_t> tie_break_ranks;
};

StrictRankResult strict_rank_select(const ExplanationSet& set);

// Returns `strict.selected` unchanged when it already holds k features;
// otherwise every unselected feature is merged in and the full list is
// returned in ascending consensus rank.
std::vector<RankedFeature> loose_rank_extend(const StrictRankResult& strict,
                                             const ExplanationSet& set,
                                             std::size_t k);

struct SignProfile {
  std::string feature;
  // One sign per explanation, input order.
  std::vector<Sign> per_explainer_signs;
  bool unanimous = false;
  // Defined iff one sign class holds strictly more than half the entries.
  std::optional<Sign> majority_sign;
};

// Throws LookupError if no explanation lists `feature`.
SignProfile sign_profile(const ExplanationSet& set, const std::string& feature,
                         double neutral_eps = 0.0);

std::vector<RankedFeature> strict_sign_filter(
    const std::vector<RankedFeature>& candidates, const ExplanationSet& set,
    double neutral_eps = 0.0);

std::vector<RankedFeature> loose_sign_filter(
    const std::vector<RankedFeature>& candidates, const ExplanationSet& set,
    double neutral_eps = 0.0);

// Orders survivors by (consensus rank, mean rank, name), truncates to k and
// attaches sign, mean weight and support. `trace` is copied into the result.
AggregatedExplanation finalize(const std::vector<RankedFeature>& survivors,
                               const ExplanationSet& set, std::size_t k,
                               AggregationTrace trace,
                               double neutral_eps = 0.0);

// Full pipeline. Throws ValidationError for invalid sets and Error for an
// inconsistent config.
AggregatedExplanation aggregate(const ExplanationSet& set,
                                const AggregationConfig& config = {});

}  // namespace xmentor

#endif  // XMENTOR_AGGREGATE_HPP_
