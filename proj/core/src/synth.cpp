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

#include "xmentor/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

namespace xmentor {

std::uint64_t PortableRandom::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) std::swap(lo, hi);
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return next();
  const std::uint64_t range = span + 1;
  // 2^64 mod range; rejecting raw values below it leaves a multiple of range.
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x = next();
  while (x < threshold) x = next();
  return lo + x % range;
}

double PortableRandom::uniform_real() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double PortableRandom::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform_real();
}

bool PortableRandom::bernoulli(double probability) {
  return uniform_real() < probability;
}

std::string_view to_string(Perturbation perturbation) {
  switch (perturbation) {
    case Perturbation::kIndependentRandom:
      return "independent";
    case Perturbation::kRankJitterSignPreserving:
      return "rank-jitter";
    case Perturbation::kSignFlipRankPreserving:
      return "sign-flip";
  }
  return "independent";
}

std::optional<Perturbation> parse_perturbation(std::string_view text) {
  if (text == "independent" || text == "IndependentRandom") {
    return Perturbation::kIndependentRandom;
  }
  if (text == "rank-jitter" || text == "RankJitterSignPreserving") {
    return Perturbation::kRankJitterSignPreserving;
  }
  if (text == "sign-flip" || text == "SignFlipRankPreserving") {
    return Perturbation::kSignFlipRankPreserving;
  }
  return std::nullopt;
}

void GeneratorSpec::check() const {
  if (min_features == 0) throw Error("generator: min_features must be >= 1");
  if (min_features > max_features) {
    throw Error("generator: min_features must be <= max_features");
  }
  if (n_explainers < 2) throw Error("generator: need at least 2 explainers");
  if (!std::isfinite(weight_scale) || weight_scale <= 0) {
    throw Error("generator: weight_scale must be positive");
  }
  for (const double p : {zero_probability, truncate_probability,
                         flip_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error("generator: probabilities must lie in [0, 1]");
    }
  }
}

namespace {

std::string feature_name(std::size_t index) {
  return "F" + std::to_string(index + 1);
}

std::string explainer_name(std::size_t index) {
  return "E" + std::to_string(index + 1);
}

// Nonzero magnitude in [0.05, 1] * scale.
double magnitude(PortableRandom& rng, double scale) {
  return scale * (0.05 + 0.95 * rng.uniform_real());
}

Explanation independent_explanation(PortableRandom& rng,
                                    const GeneratorSpec& spec, std::size_t n,
                                    std::string explainer) {
  std::vector<FeatureAttribution> attributions;
  attributions.reserve(n);
  for (std::size_t f = 0; f < n; ++f) {
    double weight = 0.0;
    if (!rng.bernoulli(spec.zero_probability)) {
      weight = rng.uniform_real(-spec.weight_scale, spec.weight_scale);
    }
    attributions.push_back(FeatureAttribution{feature_name(f), weight, {}});
  }
  std::stable_sort(attributions.begin(), attributions.end(),
                   [](const FeatureAttribution& a, const FeatureAttribution& b) {
                     return std::fabs(a.weight) > std::fabs(b.weight);
                   });
  if (n > 1 && rng.bernoulli(spec.truncate_probability)) {
    attributions.resize(rng.uniform_int(1, n - 1));
  }
  return Explanation{std::move(explainer), std::move(attributions), {}};
}

struct Base {
  // Feature indices in rank order.
  std::vector<std::size_t> order;
  // Magnitude at each rank position, non-increasing.
  std::vector<double> magnitudes;
  // +1 / -1 per feature index.
  std::vector<int> signs;
};

Base draw_base(PortableRandom& rng, const GeneratorSpec& spec, std::size_t n) {
  Base base;
  base.signs.resize(n);
  std::vector<double> raw(n);
  for (std::size_t f = 0; f < n; ++f) {
    raw[f] = magnitude(rng, spec.weight_scale);
    base.signs[f] = rng.bernoulli(0.5) ? 1 : -1;
  }
  base.order.resize(n);
  std::iota(base.order.begin(), base.order.end(), std::size_t{0});
  std::stable_sort(base.order.begin(), base.order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
  for (const std::size_t f : base.order) base.magnitudes.push_back(raw[f]);
  return base;
}

Explanation jittered_explanation(PortableRandom& rng, const GeneratorSpec& spec,
                                 const Base& base, std::string explainer) {
  const std::size_t n = base.order.size();
  std::vector<std::size_t> order = base.order;
  if (n >= 2) {
    const std::uint64_t swaps = rng.uniform_int(0, spec.max_swaps);
    for (std::uint64_t s = 0; s < swaps; ++s) {
      const auto pos = static_cast<std::size_t>(rng.uniform_int(0, n - 2));
      std::swap(order[pos], order[pos + 1]);
    }
  }
  Explanation explanation{std::move(explainer), {}, {}};
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t f = order[p];
    explanation.attributions.push_back(FeatureAttribution{
        feature_name(f), base.signs[f] * base.magnitudes[p], {}});
  }
  return explanation;
}

Explanation flipped_explanation(PortableRandom& rng, const GeneratorSpec& spec,
                                const Base& base, std::string explainer) {
  Explanation explanation{std::move(explainer), {}, {}};
  for (std::size_t p = 0; p < base.order.size(); ++p) {
    const std::size_t f = base.order[p];
    const int flip = rng.bernoulli(spec.flip_probability) ? -1 : 1;
    explanation.attributions.push_back(FeatureAttribution{
        feature_name(f), flip * base.signs[f] * base.magnitudes[p], {}});
  }
  return explanation;
}

std::string instance_name(std::uint64_t seed, std::size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%06zu", index);
  return "synth-" + std::to_string(seed) + "-" + buffer;
}

}  // namespace

std::vector<ExplanationSet> generate(const GeneratorSpec& spec,
                                     std::size_t count) {
  spec.check();
  PortableRandom rng(spec.seed);
  std::vector<ExplanationSet> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = static_cast<std::size_t>(
        rng.uniform_int(spec.min_features, spec.max_features));
    ExplanationSet set;
    set.instance_id = instance_name(spec.seed, i);
    set.prediction.label = "Defect";
    set.prediction.score = rng.uniform_real();

    switch (spec.perturbation) {
      case Perturbation::kIndependentRandom:
        for (std::size_t e = 0; e < spec.n_explainers; ++e) {
          set.explanations.push_back(
              independent_explanation(rng, spec, n, explainer_name(e)));
        }
        break;
      case Perturbation::kRankJitterSignPreserving: {
        const Base base = draw_base(rng, spec, n);
        for (std::size_t e = 0; e < spec.n_explainers; ++e) {
          set.explanations.push_back(
              jittered_explanation(rng, spec, base, explainer_name(e)));
        }
        break;
      }
      case Perturbation::kSignFlipRankPreserving: {
        const Base base = draw_base(rng, spec, n);
        for (std::size_t e = 0; e < spec.n_explainers; ++e) {
          set.explanations.push_back(
              flipped_explanation(rng, spec, base, explainer_name(e)));
        }
        break;
      }
    }
    corpus.push_back(std::move(set));
  }
  return corpus;
}

}  // namespace xmentor
