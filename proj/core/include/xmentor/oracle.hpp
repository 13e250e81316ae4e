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

// Reference implementations used to cross-check aggregate() and the agreement
// metrics. They are deliberately naive (explicit rank/sign tables, quadratic
// scans) and share no code with the production modules beyond the plain data
// types.

#ifndef XMENTOR_ORACLE_HPP_
#define XMENTOR_ORACLE_HPP_

#include <cstddef>

#include "xmentor/metrics.hpp"
#include "xmentor/model.hpp"

namespace xmentor::oracle {

AggregatedExplanation reference_aggregate(const ExplanationSet& set,
                                          const AggregationConfig& config = {});

PairMetrics reference_metrics(const Explanation& a, const Explanation& b,
                              std::size_t k, double neutral_eps = 0.0);

}  // namespace xmentor::oracle

#endif  // XMENTOR_ORACLE_HPP_
