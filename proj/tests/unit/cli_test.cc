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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.hpp"
#include "xmentor/io.hpp"

namespace xmentor {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using testing::fixture_path;
using testing::read_fixture;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args,
               const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  Outcome outcome;
  outcome.code = cli::run(args, in, out, err);
  outcome.out = out.str();
  outcome.err = err.str();
  return outcome;
}

std::string read_file_for_test(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("xmentor_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, NoSubcommandIsUsageError) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"aggregate", "--bogus"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_THAT(o.out, HasSubstr("aggregate"));
}

TEST(Cli, MissingInputIsUsageError) {
  const Outcome o = invoke({"aggregate"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_THAT(o.err, HasSubstr("--stdin"));
}

TEST(Cli, ValidateFixture) {
  const Outcome o = invoke({"validate", "-i", fixture_path("golden.xm")});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_THAT(o.out, HasSubstr("valid"));
}

TEST(Cli, ValidateReportsFindings) {
  const std::string bad = R"({"schema_version":"xmentor/1","instance_id":"x",
      "explanations":[
        {"explainer":"A","attributions":[{"feature":"f","weight":1},
                                         {"feature":"f","weight":0.5}]},
        {"explainer":"B","attributions":[{"feature":"f","weight":1}]}]})";
  const Outcome o = invoke({"validate", "--stdin", "--format", "machine"}, bad);
  EXPECT_EQ(o.code, cli::kExitFailure);
  EXPECT_THAT(o.out, HasSubstr("DuplicateFeature"));
  EXPECT_THAT(o.out, HasSubstr("\"kind\": \"validation\""));
}

TEST(Cli, EmptyInputIsSyntaxError) {
  const Outcome o = invoke({"aggregate", "--stdin"}, "");
  EXPECT_EQ(o.code, cli::kExitFailure);
  EXPECT_THAT(o.err, HasSubstr("SyntaxError"));
}

TEST(Cli, AggregateHuman) {
  const Outcome o = invoke({"aggregate", "-i", fixture_path("golden.xm")});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_THAT(o.out, HasSubstr("final: F1, F3, F2, F5, F6"));
}

TEST(Cli, AggregateMachineFromStdinMatchesFile) {
  const std::string doc = read_fixture("golden.xm");
  const Outcome from_stdin =
      invoke({"aggregate", "--stdin", "--format", "machine", "--trace"}, doc);
  const Outcome from_file = invoke({"aggregate", "-i", fixture_path("golden.xm"),
                                    "--format", "machine", "--trace"});
  ASSERT_EQ(from_stdin.code, cli::kExitOk) << from_stdin.err;
  EXPECT_EQ(from_stdin.out, from_file.out);
  const AggregatedExplanation parsed = parse_aggregation(from_stdin.out);
  EXPECT_EQ(parsed.feature_names(),
            (std::vector<std::string>{"F1", "F3", "F2", "F5", "F6"}));
}

TEST(Cli, AggregateRejectsK) {
  EXPECT_EQ(invoke({"aggregate", "-i", fixture_path("golden.xm"), "-k", "3"})
                .code,
            cli::kExitUsage);
}

TEST(Cli, AggregateConfigFile) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "config.json") << R"({"k_small": 2, "k_moderate": 2})";
  const Outcome o =
      invoke({"aggregate", "-i", fixture_path("golden.xm"), "--config",
              (dir / "config.json").string(), "--format", "machine"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(parse_aggregation(o.out).features.size(), 2u);
}

TEST(Cli, MetricsPairFromCsvAndJson) {
  for (const char* name : {"pairwise.xm", "pairwise.csv"}) {
    const Outcome o = invoke({"metrics", "-i", fixture_path(name), "-k", "5",
                              "--pair", "LIME:SHAP", "--format", "machine"});
    ASSERT_EQ(o.code, cli::kExitOk) << name << ": " << o.err;
    EXPECT_THAT(o.out, HasSubstr("\"fa\": 1.0")) << name;
    EXPECT_THAT(o.out, HasSubstr("\"ra\": 0.2")) << name;
    EXPECT_THAT(o.out, HasSubstr("\"sa\": 0.8")) << name;
    EXPECT_THAT(o.out, HasSubstr("\"rank_mismatch_count\": 4")) << name;
    EXPECT_THAT(o.out, HasSubstr("\"sign_mismatch_count\": 1")) << name;
  }
}

TEST(Cli, MetricsUnknownPair) {
  const Outcome o = invoke({"metrics", "-i", fixture_path("pairwise.xm"),
                            "--pair", "LIME:Anchor"});
  EXPECT_NE(o.code, cli::kExitOk);
}

TEST(Cli, OutputFile) {
  const fs::path dir = scratch("output");
  const fs::path target = dir / "agg.json";
  const Outcome o = invoke({"aggregate", "-i", fixture_path("golden.xm"),
                            "--format", "machine", "-o", target.string()});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(read_file_for_test(target), invoke({"aggregate", "-i",
                                                fixture_path("golden.xm"),
                                                "--format", "machine"})
                                            .out);
}

TEST(Cli, SynthIsDeterministicAndReadable) {
  const std::vector<std::string> args{"synth", "--seed", "7", "--count", "5",
                                      "--features", "4:8", "--perturbation",
                                      "rank-jitter"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto corpus = parse_corpus(a.out);
  ASSERT_EQ(corpus.size(), 5u);
  EXPECT_EQ(corpus[0].instance_id, "synth-7-000000");

  const Outcome aggregated =
      invoke({"aggregate", "--stdin", "--format", "machine"}, a.out);
  ASSERT_EQ(aggregated.code, cli::kExitOk) << aggregated.err;
  EXPECT_EQ(aggregated.out.front(), '[');
}

TEST(Cli, SynthRejectsBadSpecs) {
  EXPECT_EQ(invoke({"synth", "--features", "6:3"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"synth", "--features", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"synth", "--perturbation", "chaos"}).code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"synth", "--explainers", "1"}).code, cli::kExitUsage);
}

TEST(Cli, ReportWritesTables) {
  const fs::path dir = scratch("report");
  const Outcome synth = invoke({"synth", "--seed", "3", "--count", "12"});
  ASSERT_EQ(synth.code, cli::kExitOk);
  std::ofstream(dir / "corpus.json") << synth.out;
  const fs::path out_dir = dir / "out";
  const Outcome o = invoke({"report", "-i", (dir / "corpus.json").string(),
                            "-o", out_dir.string()});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  for (const char* name :
       {"pair_metrics.csv", "pairwise_means.csv", "histograms.csv",
        "matrix_fa.csv", "matrix_ra.csv", "matrix_sa.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(out_dir / name)) << name;
  }
  EXPECT_TRUE(fs::exists(out_dir / "aggregations" / "synth-3-000011.json"));
  const std::string pairs = read_file_for_test(out_dir / "pair_metrics.csv");
  // Header plus 12 instances times 3 pairs.
  EXPECT_EQ(std::count(pairs.begin(), pairs.end(), '\n'), 37);
}

TEST(Cli, ReportNeedsOutputDirectory) {
  EXPECT_EQ(invoke({"report", "-i", fixture_path("golden.xm")}).code,
            cli::kExitUsage);
}

TEST(Cli, MachineOutputIgnoresPriorHumanRun) {
  const std::vector<std::string> machine{
      "aggregate", "-i", fixture_path("golden.xm"), "--format", "machine",
      "--trace"};
  const std::string first = invoke(machine).out;
  invoke({"aggregate", "-i", fixture_path("golden.xm")});
  EXPECT_EQ(invoke(machine).out, first);
}

}  // namespace
}  // namespace xmentor
