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

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "walkjoin/encoder.hpp"
#include "walkjoin/graph.hpp"
#include "walkjoin/metrics.hpp"
#include "walkjoin/rng.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {

/// node -> indices of the training queries that contain it.
class QueryOverlapIndex {
 public:
  QueryOverlapIndex() = default;
  static QueryOverlapIndex build(std::span<const Query> queries, NodeId num_nodes);

  std::span<const std::uint32_t> queries_of(NodeId u) const {
    return {entries_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  /// Distinct nodes over all queries, ascending.
  const std::vector<NodeId>& nodes() const { return nodes_; }
  NodeId num_nodes() const { return static_cast<NodeId>(offsets_.size()) - 1; }

 private:
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> entries_;
  std::vector<NodeId> nodes_;
};

/// Set of queries compared as unordered node sets.
class QueryKeySet {
 public:
  void insert(std::span<const NodeId> nodes);
  void insert(const Query& q) { insert(q.nodes); }
  bool contains(std::span<const NodeId> nodes) const;
  std::size_t size() const { return keys_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<NodeId>& key) const;
  };
  std::unordered_set<std::vector<NodeId>, Hash> keys_;
};

struct TrainConfig {
  std::size_t batch_capacity = 1500;  // B1, seed-set node limit
  std::size_t batch_size = 32;        // B2, query limit
  std::size_t k_neg = 50;
  std::size_t initial_seeds = 16;
  double lr = 1e-3;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  std::uint32_t hidden = 64;
  double dropout = 0.1;
  MetricSpec metric{MetricKind::kMrr, 0};
  std::uint64_t seed = 0;
  int threads = 1;
};

struct Minibatch {
  std::vector<NodeId> seed_set;
  std::vector<std::size_t> queries;
};

/**
 * BFS over query-sharing neighbors from `seeds`: every reached query joins
 * the batch and contributes its nodes to the seed set. Stops as soon as the
 * batch holds `batch_size` queries or the seed set would exceed
 * `batch_capacity` nodes.
 */
Minibatch expand_minibatch(const QueryOverlapIndex& index, std::span<const Query> queries,
                           std::span<const NodeId> seeds, std::size_t batch_capacity,
                           std::size_t batch_size);

/// expand_minibatch() from min(initial_seeds, B1) uniform nodes of the union of queries.
Minibatch sample_minibatch(const QueryOverlapIndex& index, std::span<const Query> queries,
                           const TrainConfig& cfg, Rng& rng);

/**
 * `count` queries of `arity` distinct nodes drawn uniformly from `seed_set`,
 * rejecting any that matches `positives`. Throws once 1000 * count draws are
 * spent.
 */
std::vector<Query> sample_negatives(std::span<const NodeId> seed_set, std::size_t arity,
                                    std::size_t count, const QueryKeySet& positives, Rng& rng);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_metric = 0.0;
  double seconds = 0.0;
  std::size_t batches = 0;
  std::size_t queries = 0;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::string metric;
};

/**
 * Mini-batch training. Uses split.train_neg as given when present, otherwise
 * samples k_neg in-seed negatives per batch positive. After every epoch the
 * validation metric is computed; training stops after `patience` epochs
 * without improvement and returns the best epoch's parameters.
 */
TrainResult train(const SubgraphStore& store, const QuerySplit& split, const TrainConfig& cfg,
                  std::ostream* log = nullptr);

/// sigmoid(logit) per query, in input order.
std::vector<double> infer(const SubgraphStore& store, const ModelParams& params,
                          std::span<const Query> queries, int threads,
                          const NodeFeatures* features = nullptr);

/// Scores every positive against its own negatives.
std::vector<RankedQueryResult> score_ranked(const SubgraphStore& store, const ModelParams& params,
                                            std::span<const Query> positives,
                                            std::span<const std::vector<Query>> negatives,
                                            int threads, const NodeFeatures* features = nullptr);

std::string history_json(const TrainResult& result);

}  // namespace walkjoin
