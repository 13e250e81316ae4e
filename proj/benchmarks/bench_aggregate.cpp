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

#include <benchmark/benchmark.h>

#include <string>

#include "xmentor/aggregate.hpp"
#include "xmentor/io.hpp"
#include "xmentor/metrics.hpp"
#include "xmentor/oracle.hpp"
#include "xmentor/synth.hpp"

namespace {

std::vector<xmentor::ExplanationSet> corpus(std::size_t features,
                                            std::size_t explainers) {
  xmentor::GeneratorSpec spec;
  spec.seed = 1;
  spec.min_features = features;
  spec.max_features = features;
  spec.n_explainers = explainers;
  return xmentor::generate(spec, 64);
}

void BM_Aggregate(benchmark::State& state) {
  const auto sets = corpus(state.range(0), state.range(1));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xmentor::aggregate(sets[i++ % sets.size()]));
  }
}
BENCHMARK(BM_Aggregate)->ArgsProduct({{6, 15, 30, 100}, {3, 8}});

void BM_ReferenceAggregate(benchmark::State& state) {
  const auto sets = corpus(state.range(0), 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xmentor::oracle::reference_aggregate(sets[i++ % sets.size()]));
  }
}
BENCHMARK(BM_ReferenceAggregate)->Arg(6)->Arg(30);

void BM_PairReports(benchmark::State& state) {
  const auto sets = corpus(state.range(0), 5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xmentor::pair_reports(sets[i++ % sets.size()], 10));
  }
}
BENCHMARK(BM_PairReports)->Arg(15)->Arg(100);

void BM_ParseCorpus(benchmark::State& state) {
  const std::string text = xmentor::write_corpus(corpus(30, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xmentor::parse_corpus(text));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseCorpus);

}  // namespace

BENCHMARK_MAIN();
