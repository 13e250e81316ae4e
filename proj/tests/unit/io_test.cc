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

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.hpp"
#include "xmentor/aggregate.hpp"
#include "xmentor/synth.hpp"

namespace xmentor {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using testing::read_fixture;
using testing::golden_set;
using testing::pairwise_set;

ParseError::Kind kind_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseError::Kind::kSyntax;
}

TEST(ParseDocument, Fixtures) {
  EXPECT_EQ(parse_document(read_fixture("golden.xm")), golden_set());
  EXPECT_EQ(parse_document(read_fixture("pairwise.xm")), pairwise_set());
}

TEST(ParseDocument, EmptyInputIsSyntaxError) {
  EXPECT_EQ(kind_of(""), ParseError::Kind::kSyntax);
  EXPECT_EQ(kind_of("{\"schema_version\": "), ParseError::Kind::kSyntax);
}

TEST(ParseDocument, SchemaViolations) {
  // Weight given as a string.
  EXPECT_EQ(kind_of(R"({"schema_version":"xmentor/1","instance_id":"x",
      "explanations":[
        {"explainer":"A","attributions":[{"feature":"f","weight":"NaN"}]},
        {"explainer":"B","attributions":[{"feature":"f","weight":1}]}]})"),
            ParseError::Kind::kSchema);
  EXPECT_EQ(kind_of(R"({"schema_version":"xmentor/2","instance_id":"x",
      "explanations":[]})"),
            ParseError::Kind::kSchema);
  EXPECT_EQ(kind_of(R"({"schema_version":"xmentor/1","explanations":[]})"),
            ParseError::Kind::kSchema);
  EXPECT_EQ(kind_of("[1, 2]"), ParseError::Kind::kSchema);
}

TEST(ParseDocument, SchemaErrorCarriesPath) {
  try {
    parse_document(R"({"schema_version":"xmentor/1","instance_id":"x",
      "explanations":[
        {"explainer":"A","attributions":[{"feature":"f","weight":1}]},
        {"explainer":"B","attributions":[{"feature":"f"}]}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kSchema);
    EXPECT_EQ(e.path(), "/explanations/1/attributions/0/weight");
  }
}

TEST(ParseDocument, ValidationFailureListsFindings) {
  try {
    parse_document(R"({"schema_version":"xmentor/1","instance_id":"x",
      "explanations":[
        {"explainer":"A","attributions":[{"feature":"f","weight":1}]}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kValidation);
    ASSERT_FALSE(e.findings().empty());
    EXPECT_EQ(e.findings().front().kind, FindingKind::kTooFewExplainers);
  }
}

TEST(ParseError, KindNames) {
  EXPECT_EQ(to_string(ParseError::Kind::kSyntax), "SyntaxError");
  EXPECT_EQ(to_string(ParseError::Kind::kSchema), "SchemaViolation");
  EXPECT_EQ(to_string(ParseError::Kind::kValidation), "ValidationFailure");
}

TEST(WriteDocument, RoundTripsFixtures) {
  for (const ExplanationSet& set : {golden_set(), pairwise_set()}) {
    const std::string text = write_document(set);
    EXPECT_EQ(parse_document(text), set);
    EXPECT_EQ(write_document(parse_document(text)), text);
  }
}

TEST(WriteDocument, UnknownFieldsSurvive) {
  const std::string text = R"({"schema_version":"xmentor/1","instance_id":"x",
      "source":{"repo":"demo","commit":"abc"},
      "prediction":{"label":"Clean","calibrated":true},
      "explanations":[
        {"explainer":"A","runtime_ms":12,
         "attributions":[{"feature":"f","weight":1,"raw":[1,2]}]},
        {"explainer":"B","attributions":[{"feature":"f","weight":0.5}]}]})";
  const ExplanationSet set = parse_document(text);
  EXPECT_EQ(set.extensions.count("source"), 1u);
  EXPECT_EQ(set.prediction.extensions.at("calibrated"), "true");
  EXPECT_EQ(set.explanations[0].extensions.at("runtime_ms"), "12");
  EXPECT_EQ(set.explanations[0].attributions[0].extensions.at("raw"), "[1,2]");
  const std::string written = write_document(set);
  EXPECT_THAT(written, HasSubstr("\"runtime_ms\": 12"));
  EXPECT_EQ(parse_document(written), set);
}

TEST(WriteDocument, CanonicalText) {
  const std::string text = write_document(pairwise_set());
  EXPECT_EQ(text.back(), '\n');
  // Keys sorted, shortest round-trip numbers.
  EXPECT_LT(text.find("\"explanations\""), text.find("\"instance_id\""));
  EXPECT_THAT(text, HasSubstr("0.24"));
  EXPECT_EQ(text.find("0.23999"), std::string::npos);
}

TEST(ParseCorpus, ArraySingleAndNdjson) {
  const std::vector<ExplanationSet> sets{golden_set(), pairwise_set()};
  EXPECT_EQ(parse_corpus(write_corpus(sets)), sets);
  EXPECT_THAT(parse_corpus(read_fixture("golden.xm")),
              ElementsAre(golden_set()));

  std::string ndjson;
  for (const auto& set : sets) {
    std::string line = write_document(set);
    std::erase(line, '\n');
    ndjson += line + "\n\n";
  }
  EXPECT_EQ(parse_corpus(ndjson), sets);
}

TEST(ParseCorpus, RoundTripsSyntheticCorpora) {
  for (const Perturbation p :
       {Perturbation::kIndependentRandom, Perturbation::kRankJitterSignPreserving,
        Perturbation::kSignFlipRankPreserving}) {
    GeneratorSpec spec;
    spec.seed = 77;
    spec.perturbation = p;
    spec.max_features = 12;
    const auto corpus = generate(spec, 50);
    const std::string text = write_corpus(corpus);
    EXPECT_EQ(parse_corpus(text), corpus);
    EXPECT_EQ(write_corpus(parse_corpus(text)), text);
  }
}

TEST(ParseCorpus, UnvalidatedKeepsInvalidSets) {
  const std::string text = R"({"schema_version":"xmentor/1","instance_id":"x",
      "explanations":[
        {"explainer":"A","attributions":[{"feature":"f","weight":1}]}]})";
  EXPECT_THROW(parse_corpus(text), ParseError);
  EXPECT_EQ(parse_corpus_unvalidated(text).size(), 1u);
}

TEST(Aggregation, WriteIsDeterministicAndParses) {
  const AggregatedExplanation result = aggregate(golden_set());
  const std::string with_trace = write_aggregation(result, true);
  EXPECT_EQ(with_trace, write_aggregation(aggregate(golden_set()), true));
  EXPECT_THAT(with_trace, HasSubstr("\"kind\": \"aggregation\""));
  EXPECT_EQ(parse_aggregation(with_trace), result);

  const AggregatedExplanation bare =
      parse_aggregation(write_aggregation(result, false));
  EXPECT_EQ(bare.features, result.features);
  EXPECT_EQ(bare.explainers, result.explainers);
  EXPECT_TRUE(bare.trace.strict_rank_set.empty());
  EXPECT_EQ(bare.trace.k_used, 5u);
}

TEST(Metrics, WritesPairsAndMatrices) {
  InstanceMetrics m;
  m.instance_id = "pairwise";
  m.k = 5;
  m.pairs = pair_reports(pairwise_set(), 5);
  const std::string text = write_metrics(m);
  EXPECT_THAT(text, HasSubstr("\"kind\": \"metrics\""));
  EXPECT_THAT(text, HasSubstr("\"ra\": 0.2"));
  EXPECT_THAT(text, HasSubstr("\"sa\": 0.8"));
}

TEST(ImportTable, ToyTable) {
  const std::string csv =
      "instance_id,explainer,feature,weight\n"
      "i1,A,x,0.1\n"
      "i1,A,y,-0.5\n"
      "i1,B,x,0.2\n";
  const auto sets = import_table(csv);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].instance_id, "i1");
  ASSERT_EQ(sets[0].explanations.size(), 2u);
  EXPECT_EQ(top_k(sets[0].explanations[0], 2),
            (std::vector<std::string>{"y", "x"}));
  EXPECT_EQ(sets[0].explanations[1].attributions.size(), 1u);
}

TEST(ImportTable, PairwiseMatchesDocument) {
  const auto sets = import_table(read_fixture("pairwise.csv"));
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].explanations, pairwise_set().explanations);
}

TEST(ImportTable, LabelAndScoreColumns) {
  TableLayout layout;
  layout.label_column = "label";
  layout.score_column = "score";
  const auto sets = import_table(
      "instance_id,explainer,feature,weight,label,score\r\n"
      "i1,A,x,0.1,Defect,0.9\r\n"
      "i1,B,x,0.3,Defect,0.9\r\n",
      layout);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].prediction.label, "Defect");
  EXPECT_EQ(sets[0].prediction.score, 0.9);
}

TEST(ImportTable, DuplicateRecordRejected) {
  try {
    import_table(
        "instance_id,explainer,feature,weight\n"
        "i1,A,x,0.1\n"
        "i1,A,x,0.2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_THAT(e.what(), HasSubstr("DuplicateRecord"));
  }
}

TEST(ImportTable, MissingColumnRejected) {
  try {
    import_table("instance_id,explainer,weight\ni1,A,0.1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kSchema);
    EXPECT_THAT(e.what(), HasSubstr("missing column"));
  }
}

TEST(ParseConfig, DefaultsAndOverrides) {
  EXPECT_EQ(parse_config("{}"), AggregationConfig{});
  const AggregationConfig config = parse_config(
      R"({"k_small": 2, "neutral_eps": 0.01,
          "tie_break": "mean_rank_then_lexicographic"})");
  EXPECT_EQ(config.k_small, 2u);
  EXPECT_EQ(config.neutral_eps, 0.01);
  EXPECT_THROW(parse_config(R"({"k_smal": 2})"), ParseError);
  EXPECT_THROW(parse_config(R"({"tie_break": "random"})"), ParseError);
  EXPECT_THROW(parse_config(R"({"k_large": 0})"), ParseError);
}

}  // namespace
}  // namespace xmentor
