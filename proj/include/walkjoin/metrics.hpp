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

#pragma once

#include <span>
#include <string>
#include <vector>

namespace walkjoin {

/// One positive score and the negative scores it is ranked against.
struct RankedQueryResult {
  double pos_score = 0.0;
  std::vector<double> neg_scores;
};

/// 1 + #{negatives above} + 0.5 * #{negatives tied}.
double rank_of_positive(const RankedQueryResult& r);

double mrr(std::span<const RankedQueryResult> results);
double hits_at_k(std::span<const RankedQueryResult> results, std::size_t k);

/// Mann-Whitney AUC with ties counted one half; O(n log n).
double roc_auc(std::span<const double> pos_scores, std::span<const double> neg_scores);

enum class MetricKind { kMrr, kHitsAtK, kAuc };

struct MetricSpec {
  MetricKind kind = MetricKind::kMrr;
  std::size_t k = 0;

  /// "mrr", "auc" or "hits@K".
  static MetricSpec parse(const std::string& name);
  std::string name() const;
  bool is_ranking() const { return kind != MetricKind::kAuc; }
};

/// Ranking metrics use `results`; AUC pools every positive and negative score.
double compute_metric(const MetricSpec& spec, std::span<const RankedQueryResult> results);

/// {"metric": name, "value": v, "n_queries": n, "k_negatives": k}
std::string metrics_report_json(const std::string& metric, double value, std::size_t n_queries,
                                std::size_t k_negatives);

}  // namespace walkjoin
