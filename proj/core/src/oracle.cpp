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

// Naive transliteration of the staged aggregation rules. Everything is an
// explicit table indexed by [explainer][feature]; no helper from
// aggregate.cpp or metrics.cpp is used.

#include "xmentor/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace xmentor::oracle {
namespace {

int naive_sign(double w, double eps) {
  if (w > eps) return 1;
  if (w < -eps) return -1;
  return 0;
}

Sign to_sign(int s) {
  if (s > 0) return Sign::kPositive;
  if (s < 0) return Sign::kNegative;
  return Sign::kNeutral;
}

// a before b under (key, mean rank, name).
bool before(double key_a, double mean_a, const std::string& name_a,
            double key_b, double mean_b, const std::string& name_b) {
  if (key_a < key_b) return true;
  if (key_a > key_b) return false;
  if (mean_a < mean_b) return true;
  if (mean_a > mean_b) return false;
  return name_a < name_b;
}

}  // namespace

AggregatedExplanation reference_aggregate(const ExplanationSet& set,
                                          const AggregationConfig& config) {
  config.check();
  require_valid(set);
  const double eps = config.neutral_eps;
  const std::size_t m = set.explanations.size();

  // Feature universe, sorted by insertion.
  std::vector<std::string> names;
  for (const auto& e : set.explanations) {
    for (const auto& a : e.attributions) {
      bool found = false;
      for (const auto& existing : names) found = found || existing == a.feature;
      if (found) continue;
      std::size_t pos = names.size();
      names.push_back(a.feature);
      while (pos > 0 && names[pos - 1] > names[pos]) {
        std::swap(names[pos - 1], names[pos]);
        --pos;
      }
    }
  }
  const std::size_t n = names.size();

  std::size_t k;
  if (n <= config.small_max) {
    k = config.k_small;
  } else if (n <= config.moderate_max) {
    k = config.k_moderate;
  } else {
    k = config.k_large;
  }
  if (k > n) k = n;

  // rank[e][f], sign[e][f], weight[e][f] under the missing-feature convention.
  std::vector<std::vector<std::size_t>> rank(m, std::vector<std::size_t>(n));
  std::vector<std::vector<int>> sign(m, std::vector<int>(n));
  std::vector<std::vector<double>> weight(m, std::vector<double>(n));
  for (std::size_t e = 0; e < m; ++e) {
    const auto& list = set.explanations[e].attributions;
    for (std::size_t f = 0; f < n; ++f) {
      rank[e][f] = n + 1;
      sign[e][f] = 0;
      weight[e][f] = 0.0;
      for (std::size_t p = 0; p < list.size(); ++p) {
        if (list[p].feature == names[f]) {
          rank[e][f] = p + 1;
          sign[e][f] = naive_sign(list[p].weight, eps);
          weight[e][f] = list[p].weight;
        }
      }
    }
  }
  std::vector<double> mean(n);
  for (std::size_t f = 0; f < n; ++f) {
    std::size_t total = 0;
    for (std::size_t e = 0; e < m; ++e) total += rank[e][f];
    mean[f] = static_cast<double>(total) / static_cast<double>(m);
  }

  // Strict rank agreement.
  AggregationTrace trace;
  trace.feature_count = n;
  trace.k_used = k;
  std::vector<bool> black(n, false);
  std::vector<bool> chosen(n, false);
  std::vector<std::size_t> chosen_rank(n, 0);
  std::vector<std::size_t> first_head(n, 0);  // 0 = never a plurality.
  std::size_t chosen_count = 0;

  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<std::size_t> votes(n, 0);
    std::size_t most = 0;
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t e = 0; e < m; ++e) {
        if (rank[e][f] == r) ++votes[f];
      }
      if (votes[f] > most) most = votes[f];
    }
    if (most == 0) continue;

    std::size_t head = n;
    std::size_t leaders = 0;
    for (std::size_t f = 0; f < n; ++f) {
      if (votes[f] != most) continue;
      ++leaders;
      if (head == n || before(0, mean[f], names[f], 0, mean[head], names[head])) {
        head = f;
      }
    }
    if (leaders > 1) trace.tie_break_ranks.push_back(r);
    if (first_head[head] == 0) first_head[head] = r;

    if (!black[head] && !chosen[head]) {
      chosen[head] = true;
      chosen_rank[head] = r;
      ++chosen_count;
      trace.strict_rank_set.push_back(RankedFeature{names[head], r});
    }
    for (std::size_t f = 0; f < n; ++f) {
      if (f != head && votes[f] > 0 && !chosen[f]) black[f] = true;
    }
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (black[f]) trace.blacklist.push_back(names[f]);
  }

  // Candidate list: indices plus consensus rank.
  std::vector<std::size_t> cand;
  std::vector<std::size_t> cand_rank;
  if (chosen_count >= k) {
    for (const auto& entry : trace.strict_rank_set) {
      for (std::size_t f = 0; f < n; ++f) {
        if (names[f] == entry.feature) cand.push_back(f);
      }
      cand_rank.push_back(entry.consensus_rank);
    }
  } else {
    std::vector<double> key(n);
    std::vector<std::size_t> order;
    for (std::size_t f = 0; f < n; ++f) {
      if (chosen[f]) {
        key[f] = static_cast<double>(chosen_rank[f]);
      } else if (first_head[f] != 0) {
        key[f] = static_cast<double>(first_head[f]);
      } else {
        key[f] = mean[f];
      }
      // Insertion sort.
      std::size_t pos = order.size();
      order.push_back(f);
      while (pos > 0 && before(key[f], mean[f], names[f], key[order[pos - 1]],
                               mean[order[pos - 1]], names[order[pos - 1]])) {
        order[pos] = order[pos - 1];
        order[pos - 1] = f;
        --pos;
      }
    }
    std::size_t last = 0;
    for (const std::size_t f : order) {
      std::size_t r = static_cast<std::size_t>(std::ceil(key[f]));
      if (r <= last) r = last + 1;
      cand.push_back(f);
      cand_rank.push_back(r);
      trace.loose_rank_set.push_back(RankedFeature{names[f], r});
      last = r;
    }
    trace.modes_used.push_back(Mode::kLooseRank);
  }

  // Sign agreement.
  auto count_sign = [&](std::size_t f, int s) {
    std::size_t c = 0;
    for (std::size_t e = 0; e < m; ++e) c += sign[e][f] == s ? 1 : 0;
    return c;
  };
  std::vector<std::size_t> keep;
  std::vector<std::size_t> keep_rank;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    bool all_same = true;
    for (std::size_t e = 1; e < m; ++e) {
      all_same = all_same && sign[e][cand[i]] == sign[0][cand[i]];
    }
    if (all_same) {
      keep.push_back(cand[i]);
      keep_rank.push_back(cand_rank[i]);
      trace.strict_sign_set.push_back(names[cand[i]]);
    }
  }
  if (keep.size() < k) {
    keep.clear();
    keep_rank.clear();
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const std::size_t f = cand[i];
      if (2 * count_sign(f, 1) > m || 2 * count_sign(f, -1) > m ||
          2 * count_sign(f, 0) > m) {
        keep.push_back(f);
        keep_rank.push_back(cand_rank[i]);
        trace.loose_sign_set.push_back(names[f]);
      }
    }
    trace.modes_used.push_back(Mode::kLooseSign);
  }
  if (cand.empty()) {
    trace.note = "strict and loose rank agreement produced no candidates";
  } else if (keep.empty()) {
    trace.note = "no candidate has a majority sign";
  }

  // Final ordering and trim.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    std::size_t pos = idx.size();
    idx.push_back(i);
    while (pos > 0) {
      const std::size_t a = idx[pos];
      const std::size_t b = idx[pos - 1];
      if (!before(static_cast<double>(keep_rank[a]), mean[keep[a]],
                  names[keep[a]], static_cast<double>(keep_rank[b]),
                  mean[keep[b]], names[keep[b]])) {
        break;
      }
      std::swap(idx[pos], idx[pos - 1]);
      --pos;
    }
  }
  if (idx.size() > k) idx.resize(k);

  // Explainers by name.
  std::vector<std::size_t> ex(m);
  for (std::size_t e = 0; e < m; ++e) {
    ex[e] = e;
    for (std::size_t p = e; p > 0; --p) {
      if (set.explanations[ex[p]].explainer <
          set.explanations[ex[p - 1]].explainer) {
        std::swap(ex[p], ex[p - 1]);
      }
    }
  }

  AggregatedExplanation out;
  out.instance_id = set.instance_id;
  out.prediction = set.prediction;
  for (const std::size_t e : ex) out.explainers.push_back(set.explanations[e].explainer);

  for (const std::size_t i : idx) {
    const std::size_t f = keep[i];
    AggregatedFeature entry;
    entry.feature = names[f];
    entry.consensus_rank = keep_rank[i];
    int majority = 0;
    bool has_majority = false;
    for (const int s : {1, -1, 0}) {
      if (2 * count_sign(f, s) > m) {
        majority = s;
        has_majority = true;
      }
    }
    entry.sign = has_majority ? to_sign(majority) : Sign::kNeutral;
    entry.support = count_sign(f, has_majority ? majority : 0);
    for (const std::size_t e : ex) entry.explainer_signs.push_back(to_sign(sign[e][f]));

    std::vector<double> values;
    for (std::size_t e = 0; e < m; ++e) {
      const double w = weight[e][f];
      std::size_t pos = values.size();
      values.push_back(w);
      while (pos > 0 && values[pos - 1] > values[pos]) {
        std::swap(values[pos - 1], values[pos]);
        --pos;
      }
    }
    double sum = 0.0;
    for (const double v : values) sum += v;
    entry.mean_weight = sum / static_cast<double>(m);
    out.features.push_back(std::move(entry));
  }

  if (out.features.empty() && trace.note.empty()) {
    trace.note = "no feature survived aggregation";
  }
  out.trace = std::move(trace);
  return out;
}

PairMetrics reference_metrics(const Explanation& a, const Explanation& b,
                              std::size_t k, double neutral_eps) {
  if (k == 0) throw Error("reference_metrics: k must be >= 1");
  std::size_t shared = 0;
  std::size_t same_rank = 0;
  std::size_t same_sign = 0;
  for (std::size_t i = 0; i < a.attributions.size() && i < k; ++i) {
    for (std::size_t j = 0; j < b.attributions.size() && j < k; ++j) {
      if (a.attributions[i].feature != b.attributions[j].feature) continue;
      ++shared;
      if (i == j) ++same_rank;
      if (naive_sign(a.attributions[i].weight, neutral_eps) ==
          naive_sign(b.attributions[j].weight, neutral_eps)) {
        ++same_sign;
      }
    }
  }
  PairMetrics out;
  out.k = k;
  out.fa = static_cast<double>(shared) / static_cast<double>(k);
  out.ra = static_cast<double>(same_rank) / static_cast<double>(k);
  out.sa = static_cast<double>(same_sign) / static_cast<double>(k);
  out.rank_mismatch_count = shared - same_rank;
  out.sign_mismatch_count = shared - same_sign;
  return out;
}

}  // namespace xmentor::oracle
