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

// Seeded synthetic explanation sets.
//
// The random source is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Values are mapped without std:: distributions (those are
// implementation-defined): bounded integers by rejection sampling on the raw
// 64-bit output, reals in [0, 1) from the top 53 bits. The same seed
// therefore yields the same corpus on every conforming toolchain, and the
// mapping is simple enough to port to other languages.

#ifndef XMENTOR_SYNTH_HPP_
#define XMENTOR_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "xmentor/model.hpp"

namespace xmentor {

class PortableRandom {
 public:
  explicit PortableRandom(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  // Uniform in [0, 1).
  double uniform_real();
  double uniform_real(double lo, double hi);
  bool bernoulli(double probability);

 private:
  std::mt19937_64 engine_;
};

enum class Perturbation {
  // Every explainer draws its own weights.
  kIndependentRandom,
  // Explainers share one signed base explanation; each permutes ranks by a
  // bounded number of adjacent swaps while keeping every feature's sign.
  kRankJitterSignPreserving,
  // Explainers share the base rank order; each flips a random subset of
  // signs.
  kSignFlipRankPreserving,
};

std::string_view to_string(Perturbation perturbation);
std::optional<Perturbation> parse_perturbation(std::string_view text);

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t min_features = 3;
  std::size_t max_features = 6;
  std::size_t n_explainers = 3;
  Perturbation perturbation = Perturbation::kIndependentRandom;
  double weight_scale = 1.0;
  // Chance that a drawn weight is exactly zero (IndependentRandom only;
  // base weights of the other regimes are never zero).
  double zero_probability = 0.1;
  // Chance that an explainer lists only a prefix of the features
  // (IndependentRandom only).
  double truncate_probability = 0.2;
  // Upper bound on adjacent swaps per explainer (RankJitterSignPreserving).
  std::size_t max_swaps = 3;
  // Per-feature flip chance (SignFlipRankPreserving).
  double flip_probability = 0.3;

  // Throws Error for degenerate ranges.
  void check() const;
};

// Deterministic corpus of `count` sets. Instance ids are
// "synth-<seed>-<index>" with a zero-padded index, explainers "E1".."Em" and
// features "F1".."Fn".
std::vector<ExplanationSet> generate(const GeneratorSpec& spec,
                                     std::size_t count);

}  // namespace xmentor

#endif  // XMENTOR_SYNTH_HPP_
