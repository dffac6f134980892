/*
 * Copyright 2026 The walkjoin Authors.
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

#include "walkjoin/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "walkjoin/types.hpp"

namespace walkjoin {

double rank_of_positive(const RankedQueryResult& r) {
  double greater = 0.0, ties = 0.0;
  for (double s : r.neg_scores) {
    if (s > r.pos_score) {
      greater += 1.0;
    } else if (s == r.pos_score) {
      ties += 1.0;
    }
  }
  return 1.0 + greater + 0.5 * ties;
}

double mrr(std::span<const RankedQueryResult> results) {
  if (results.empty()) throw InvalidArgument("MRR of an empty result list");
  double sum = 0.0;
  for (const auto& r : results) sum += 1.0 / rank_of_positive(r);
  return sum / static_cast<double>(results.size());
}

double hits_at_k(std::span<const RankedQueryResult> results, std::size_t k) {
  if (results.empty()) throw InvalidArgument("Hits@K of an empty result list");
  if (k < 1) throw InvalidArgument("Hits@K needs K >= 1");
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (rank_of_positive(r) <= static_cast<double>(k)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double roc_auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw InvalidArgument("AUC needs positive and negative scores");
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // sum of mid-ranks (1-based) of the positives
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      if (all[j].second) ++pos_in_group;
      ++j;
    }
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    pos_rank_sum += mid * static_cast<double>(pos_in_group);
    i = j;
  }
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricSpec MetricSpec::parse(const std::string& name) {
  if (name == "mrr") return {MetricKind::kMrr, 0};
  if (name == "auc") return {MetricKind::kAuc, 0};
  if (name.rfind("hits@", 0) == 0) {
    try {
      std::size_t used = 0;
      const long k = std::stol(name.substr(5), &used);
      if (k >= 1 && used == name.size() - 5) return {MetricKind::kHitsAtK, static_cast<std::size_t>(k)};
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown metric '" + name + "' (expected mrr, auc or hits@K)");
}

std::string MetricSpec::name() const {
  switch (kind) {
    case MetricKind::kMrr: return "mrr";
    case MetricKind::kAuc: return "auc";
    case MetricKind::kHitsAtK: return "hits@" + std::to_string(k);
  }
  return "unknown";
}

double compute_metric(const MetricSpec& spec, std::span<const RankedQueryResult> results) {
  switch (spec.kind) {
    case MetricKind::kMrr: return mrr(results);
    case MetricKind::kHitsAtK: return hits_at_k(results, spec.k);
    case MetricKind::kAuc: {
      std::vector<double> pos, neg;
      for (const auto& r : results) {
        pos.push_back(r.pos_score);
        neg.insert(neg.end(), r.neg_scores.begin(), r.neg_scores.end());
      }
      return roc_auc(pos, neg);
    }
  }
  throw InvalidArgument("unknown metric");
}

std::string metrics_report_json(const std::string& metric, double value, std::size_t n_queries,
                                std::size_t k_negatives) {
  nlohmann::ordered_json j;
  j["metric"] = metric;
  j["value"] = value;
  j["n_queries"] = n_queries;
  j["k_negatives"] = k_negatives;
  return j.dump(2);
}

}  // namespace walkjoin
