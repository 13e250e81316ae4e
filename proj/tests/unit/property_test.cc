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

// Randomised invariants over synthetic corpora. Each test sweeps all three
// generator regimes.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "xmentor/aggregate.hpp"
#include "xmentor/io.hpp"
#include "xmentor/metrics.hpp"
#include "xmentor/synth.hpp"

namespace xmentor {

void PrintTo(Perturbation perturbation, std::ostream* os) {
  *os << to_string(perturbation);
}

namespace {

class RegimeTest : public ::testing::TestWithParam<Perturbation> {
 protected:
  std::vector<ExplanationSet> corpus(std::uint64_t seed, std::size_t count,
                                     std::size_t max_features = 30) const {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.perturbation = GetParam();
    spec.min_features = 3;
    spec.max_features = max_features;
    spec.n_explainers = 3 + seed % 3;
    return generate(spec, count);
  }
};

TEST_P(RegimeTest, MetricBounds) {
  for (const auto& set : corpus(1, 150)) {
    const std::size_t n = set.feature_universe().size();
    for (std::size_t k = 1; k <= n + 1; k += 2) {
      for (const auto& report : pair_reports(set, k)) {
        const PairMetrics& m = report.metrics;
        ASSERT_GE(m.ra, 0.0);
        ASSERT_LE(m.ra, m.fa);
        ASSERT_LE(m.sa, m.fa);
        ASSERT_LE(m.fa, 1.0);
        const long shared = std::lround(m.fa * static_cast<double>(k));
        ASSERT_EQ(shared - std::lround(m.ra * static_cast<double>(k)),
                  static_cast<long>(m.rank_mismatch_count));
        ASSERT_EQ(shared - std::lround(m.sa * static_cast<double>(k)),
                  static_cast<long>(m.sign_mismatch_count));
        const PairMetrics swapped =
            pair_metrics(set.explanation(report.explainer_b),
                         set.explanation(report.explainer_a), k);
        ASSERT_EQ(swapped, m);
      }
    }
  }
}

TEST_P(RegimeTest, AggregateShape) {
  for (const auto& set : corpus(2, 300)) {
    const AggregatedExplanation result = aggregate(set);
    const auto universe = set.feature_universe();
    const std::size_t m = set.explanations.size();
    ASSERT_LE(result.features.size(), result.trace.k_used);
    ASSERT_EQ(result.trace.k_used, threshold_k(universe.size()));
    std::set<std::string> seen;
    std::size_t last_rank = 0;
    for (const auto& f : result.features) {
      ASSERT_TRUE(seen.insert(f.feature).second);
      ASSERT_TRUE(std::binary_search(universe.begin(), universe.end(),
                                     f.feature));
      ASSERT_GT(f.consensus_rank, last_rank);
      last_rank = f.consensus_rank;
      ASSERT_GT(2 * f.support, m);
      ASSERT_EQ(f.explainer_signs.size(), m);
      ASSERT_EQ(static_cast<std::size_t>(std::count(
                    f.explainer_signs.begin(), f.explainer_signs.end(), f.sign)),
                f.support);
    }
    ASSERT_TRUE(std::is_sorted(result.explainers.begin(),
                               result.explainers.end()));
    if (!result.trace.fired(Mode::kLooseSign)) {
      for (const auto& f : result.features) ASSERT_EQ(f.support, m);
    }
  }
}

TEST_P(RegimeTest, ExplainerOrderIrrelevant) {
  for (const auto& set : corpus(3, 200)) {
    ExplanationSet reversed = set;
    std::reverse(reversed.explanations.begin(), reversed.explanations.end());
    ASSERT_EQ(aggregate(reversed), aggregate(set)) << set.instance_id;
  }
}

TEST_P(RegimeTest, DuplicatingEveryExplainerKeepsResult) {
  for (const auto& set : corpus(4, 200)) {
    ExplanationSet doubled = set;
    for (const auto& e : set.explanations) {
      Explanation copy = e;
      copy.explainer += "-copy";
      doubled.explanations.push_back(std::move(copy));
    }
    const auto a = aggregate(set);
    const auto b = aggregate(doubled);
    ASSERT_EQ(a.feature_names(), b.feature_names()) << set.instance_id;
    for (std::size_t i = 0; i < a.features.size(); ++i) {
      ASSERT_EQ(a.features[i].consensus_rank, b.features[i].consensus_rank);
      ASSERT_EQ(a.features[i].sign, b.features[i].sign);
      ASSERT_EQ(2 * a.features[i].support, b.features[i].support);
    }
  }
}

TEST_P(RegimeTest, AggregationDocumentRoundTrip) {
  for (const auto& set : corpus(5, 100)) {
    const auto result = aggregate(set);
    const std::string text = write_aggregation(result, true);
    ASSERT_EQ(parse_aggregation(text), result);
    ASSERT_EQ(write_aggregation(parse_aggregation(text), true), text);
  }
}

TEST_P(RegimeTest, HistogramMassCountsPairs) {
  const auto sets = corpus(6, 120);
  const CorpusHistograms h = corpus_histograms(sets, KPolicy::Threshold());
  std::size_t expected = 0;
  for (const auto& set : sets) {
    const std::size_t m = set.explanations.size();
    expected += m * (m - 1) / 2;
  }
  EXPECT_EQ(h.total_mass(), expected);
  for (const auto& pair : h.pairs) {
    std::size_t rank_mass = 0;
    for (const auto& [count, freq] : pair.rank_mismatch) rank_mass += freq;
    EXPECT_EQ(rank_mass, pair.instances);
    EXPECT_LT(pair.explainer_a, pair.explainer_b);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Regimes, RegimeTest,
    ::testing::Values(Perturbation::kIndependentRandom,
                      Perturbation::kRankJitterSignPreserving,
                      Perturbation::kSignFlipRankPreserving),
    [](const ::testing::TestParamInfo<Perturbation>& info) {
      switch (info.param) {
        case Perturbation::kIndependentRandom:
          return std::string("Independent");
        case Perturbation::kRankJitterSignPreserving:
          return std::string("RankJitter");
        case Perturbation::kSignFlipRankPreserving:
          return std::string("SignFlip");
      }
      return std::string("Unknown");
    });

}  // namespace
}  // namespace xmentor
