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

#include "walkjoin/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <unordered_set>

#include <omp.h>

#include "json.hpp"

namespace walkjoin {

QueryOverlapIndex QueryOverlapIndex::build(std::span<const Query> queries, NodeId num_nodes) {
  QueryOverlapIndex index;
  index.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const Query& q : queries) {
    for (NodeId u : q.nodes) {
      if (u < 0 || u >= num_nodes) throw InvalidArgument("query node outside the graph");
      ++index.offsets_[u + 1];
    }
  }
  for (NodeId u = 0; u < num_nodes; ++u) {
    if (index.offsets_[u + 1] != 0) index.nodes_.push_back(u);
    index.offsets_[u + 1] += index.offsets_[u];
  }
  index.entries_.resize(index.offsets_.back());
  std::vector<std::uint64_t> cursor(index.offsets_.begin(), index.offsets_.end() - 1);
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (NodeId u : queries[qi].nodes) index.entries_[cursor[u]++] = static_cast<std::uint32_t>(qi);
  }
  return index;
}

std::size_t QueryKeySet::Hash::operator()(const std::vector<NodeId>& key) const {
  std::uint64_t h = 0x51ED27ull;
  for (NodeId x : key) h = splitmix64(h ^ static_cast<std::uint32_t>(x));
  return h;
}

void QueryKeySet::insert(std::span<const NodeId> nodes) {
  std::vector<NodeId> key(nodes.begin(), nodes.end());
  std::sort(key.begin(), key.end());
  keys_.insert(std::move(key));
}

bool QueryKeySet::contains(std::span<const NodeId> nodes) const {
  std::vector<NodeId> key(nodes.begin(), nodes.end());
  std::sort(key.begin(), key.end());
  return keys_.contains(key);
}

Minibatch expand_minibatch(const QueryOverlapIndex& index, std::span<const Query> queries,
                           std::span<const NodeId> seeds, std::size_t batch_capacity,
                           std::size_t batch_size) {
  if (batch_capacity < 1 || batch_size < 1) throw InvalidArgument("B1 and B2 must be >= 1");
  Minibatch batch;
  std::unordered_set<NodeId> in_seed;
  std::unordered_set<std::size_t> in_batch;
  std::deque<NodeId> frontier;
  for (NodeId u : seeds) {
    if (batch.seed_set.size() == batch_capacity) break;
    if (in_seed.insert(u).second) {
      batch.seed_set.push_back(u);
      frontier.push_back(u);
    }
  }
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (std::uint32_t qi : index.queries_of(u)) {
      if (!in_batch.insert(qi).second) continue;
      batch.queries.push_back(qi);
      for (NodeId w : queries[qi].nodes) {
        if (in_seed.contains(w)) continue;
        if (batch.seed_set.size() == batch_capacity) return batch;
        in_seed.insert(w);
        batch.seed_set.push_back(w);
        frontier.push_back(w);
      }
      if (batch.queries.size() == batch_size) return batch;
    }
  }
  return batch;
}

Minibatch sample_minibatch(const QueryOverlapIndex& index, std::span<const Query> queries,
                           const TrainConfig& cfg, Rng& rng) {
  const auto& pool = index.nodes();
  if (pool.empty()) throw InvalidArgument("cannot sample a mini-batch from an empty training set");
  const std::size_t want =
      std::min({cfg.initial_seeds, cfg.batch_capacity, pool.size()});
  std::vector<NodeId> seeds;
  std::unordered_set<NodeId> picked;
  while (seeds.size() < std::max<std::size_t>(want, 1)) {
    NodeId u = pool[uniform_index(rng, pool.size())];
    if (picked.insert(u).second) seeds.push_back(u);
  }
  return expand_minibatch(index, queries, seeds, cfg.batch_capacity, cfg.batch_size);
}

std::vector<Query> sample_negatives(std::span<const NodeId> seed_set, std::size_t arity,
                                    std::size_t count, const QueryKeySet& positives, Rng& rng) {
  if (arity < 1) throw InvalidArgument("arity must be >= 1");
  if (seed_set.size() < arity) {
    throw InvalidArgument("seed set of " + std::to_string(seed_set.size()) +
                          " nodes cannot hold a query of arity " + std::to_string(arity));
  }
  std::vector<Query> out;
  out.reserve(count);
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  std::size_t draws = 0;
  while (out.size() < count) {
    if (++draws > budget) {
      throw InvalidArgument("negative sampling exhausted: positives cover the seed set");
    }
    Query q;
    q.label = 0;
    while (q.nodes.size() < arity) {
      NodeId v = seed_set[uniform_index(rng, seed_set.size())];
      if (std::find(q.nodes.begin(), q.nodes.end(), v) == q.nodes.end()) q.nodes.push_back(v);
    }
    if (positives.contains(q.nodes)) continue;
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

constexpr std::size_t kInferChunk = 512;
constexpr std::size_t kGradBlock = 8;

double rpe_scale(const ModelConfig& c) { return 1.0 / static_cast<double>(c.num_walks); }

void check_arity(const ModelParams& params, std::span<const Query> queries) {
  for (const Query& q : queries) {
    if (q.nodes.size() != params.config.arity) {
      throw InvalidArgument("query of arity " + std::to_string(q.nodes.size()) +
                            " but the model was trained on arity " +
                            std::to_string(params.config.arity));
    }
  }
}

const NodeFeatures* features_of(const QuerySplit& split) {
  const auto& f = split.train_graph.node_features();
  return f ? &*f : nullptr;
}

struct StepOutcome {
  double loss_sum = 0.0;
};

/// One optimizer step over `batch` (labels taken from the queries).
StepOutcome train_step(const SubgraphStore& store, ModelParams& params, AdamState& adam,
                       const std::vector<Query>& batch, const NodeFeatures* features,
                       std::uint64_t dropout_seed, int threads) {
  std::vector<JoinedQuery> joined = join_batch(store, batch, threads);
  const std::size_t blocks = (batch.size() + kGradBlock - 1) / kGradBlock;
  std::vector<Gradients> block_grads(blocks, ModelParams::zeros(params.config));
  std::vector<double> block_loss(blocks, 0.0);
  const double scale = rpe_scale(params.config);

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const std::size_t end = std::min(batch.size(), (b + 1) * kGradBlock);
    for (std::size_t i = b * kGradBlock; i < end; ++i) {
      Rng rng(derive_seed(dropout_seed, i));
      DenseTensor x = featurize(store.table(), joined[i], scale, features);
      ForwardResult fr = forward(params, x, true, &rng);
      const int label = batch[i].label.value_or(0);
      block_loss[b] += bce_loss(fr.logit, label);
      block_grads[b] += backward(params, fr.cache, label);
    }
  }
  Gradients total = ModelParams::zeros(params.config);
  StepOutcome out;
  for (std::size_t b = 0; b < blocks; ++b) {
    total += block_grads[b];
    out.loss_sum += block_loss[b];
  }
  total *= 1.0 / static_cast<double>(batch.size());
  adam_step(params, total, adam);
  return out;
}

double validation_metric(const SubgraphStore& store, const ModelParams& params,
                         const QuerySplit& split, const TrainConfig& cfg,
                         const NodeFeatures* features) {
  auto results = score_ranked(store, params, split.valid_pos, split.valid_neg, cfg.threads, features);
  return compute_metric(cfg.metric, results);
}

}  // namespace

std::vector<double> infer(const SubgraphStore& store, const ModelParams& params,
                          std::span<const Query> queries, int threads,
                          const NodeFeatures* features) {
  check_compatible(params.config, store);
  check_arity(params, queries);
  const std::size_t feat_dim = features ? features->dim : 0;
  if (feat_dim != params.config.feature_dim) {
    throw InvalidArgument("model expects " + std::to_string(params.config.feature_dim) +
                          " feature columns, got " + std::to_string(feat_dim));
  }
  std::vector<double> scores(queries.size());
  const double scale = rpe_scale(params.config);
  for (std::size_t start = 0; start < queries.size(); start += kInferChunk) {
    const std::size_t n = std::min(kInferChunk, queries.size() - start);
    auto chunk = queries.subspan(start, n);
    std::vector<JoinedQuery> joined = join_batch(store, chunk, threads);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      DenseTensor x = featurize(store.table(), joined[i], scale, features);
      scores[start + i] = sigmoid(forward(params, x).logit);
    }
  }
  return scores;
}

std::vector<RankedQueryResult> score_ranked(const SubgraphStore& store, const ModelParams& params,
                                            std::span<const Query> positives,
                                            std::span<const std::vector<Query>> negatives,
                                            int threads, const NodeFeatures* features) {
  if (negatives.size() != positives.size()) {
    throw InvalidArgument("every positive needs its own negative list");
  }
  std::vector<Query> flat(positives.begin(), positives.end());
  for (const auto& negs : negatives) flat.insert(flat.end(), negs.begin(), negs.end());
  std::vector<double> scores = infer(store, params, flat, threads, features);
  std::vector<RankedQueryResult> results(positives.size());
  std::size_t cursor = positives.size();
  for (std::size_t i = 0; i < positives.size(); ++i) {
    results[i].pos_score = scores[i];
    results[i].neg_scores.assign(scores.begin() + cursor, scores.begin() + cursor + negatives[i].size());
    cursor += negatives[i].size();
  }
  return results;
}

TrainResult train(const SubgraphStore& store, const QuerySplit& split, const TrainConfig& cfg,
                  std::ostream* log) {
  if (split.train_pos.empty()) throw InvalidArgument("training set has no positive queries");
  if (cfg.batch_capacity < 1 || cfg.batch_size < 1 || cfg.k_neg < 1) {
    throw InvalidArgument("B1, B2 and k_neg must be >= 1");
  }
  if (cfg.threads < 1) throw InvalidArgument("threads must be >= 1");
  if (split.train_graph.num_nodes() != 0 && split.train_graph.num_nodes() != store.num_nodes()) {
    throw InvalidArgument("store was not built over the split's training graph");
  }
  const std::size_t arity = split.train_pos.front().nodes.size();

  std::vector<Query> train_set;
  for (const Query& q : split.train_pos) train_set.push_back({q.nodes, 1});
  for (const Query& q : split.train_neg) train_set.push_back({q.nodes, 0});
  for (const Query& q : train_set) {
    if (q.nodes.size() != arity) throw InvalidArgument("training queries must share one arity");
  }
  const bool supplied_negatives = !split.train_neg.empty();
  QueryKeySet positives;
  for (const Query& q : split.train_pos) positives.insert(q);
  const QueryOverlapIndex index = QueryOverlapIndex::build(train_set, store.num_nodes());
  const NodeFeatures* features = features_of(split);

  ModelConfig mc;
  mc.arity = static_cast<std::uint32_t>(arity);
  mc.num_walks = store.shape().num_walks;
  mc.steps = store.shape().steps;
  mc.hidden = cfg.hidden;
  mc.feature_dim = features ? static_cast<std::uint32_t>(features->dim) : 0;
  mc.dropout = cfg.dropout;

  ModelParams params = ModelParams::glorot(mc, cfg.seed);
  AdamState adam = AdamState::for_params(params, cfg.lr);
  Rng batch_rng(stage_seed(cfg.seed, "minibatch"));
  const std::uint64_t dropout_root = stage_seed(cfg.seed, "dropout");
  const bool has_validation = !split.valid_pos.empty();

  TrainResult result;
  result.metric = has_validation ? cfg.metric.name() : "neg_train_loss";
  double best = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::uint64_t step = 0;

  for (std::size_t epoch = 1; epoch <= std::max<std::size_t>(cfg.max_epochs, 1); ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochRecord rec;
    rec.epoch = epoch;
    double loss_sum = 0.0;
    std::size_t consumed = 0;
    while (consumed < train_set.size()) {
      Minibatch mb = sample_minibatch(index, train_set, cfg, batch_rng);
      std::vector<Query> batch;
      std::size_t n_pos = 0;
      for (std::size_t qi : mb.queries) {
        batch.push_back(train_set[qi]);
        n_pos += train_set[qi].label == 1;
      }
      consumed += mb.queries.size();
      if (!supplied_negatives) {
        auto negs = sample_negatives(mb.seed_set, arity, cfg.k_neg * n_pos, positives, batch_rng);
        batch.insert(batch.end(), negs.begin(), negs.end());
      }
      StepOutcome so = train_step(store, params, adam, batch, features,
                                  derive_seed(dropout_root, step++), cfg.threads);
      loss_sum += so.loss_sum;
      rec.queries += batch.size();
      ++rec.batches;
    }
    rec.train_loss = loss_sum / static_cast<double>(rec.queries);
    rec.valid_metric = has_validation ? validation_metric(store, params, split, cfg, features)
                                      : -rec.train_loss;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);
    if (log) {
      *log << "epoch " << epoch << " loss " << std::fixed << std::setprecision(6) << rec.train_loss
           << ' ' << result.metric << ' ' << rec.valid_metric << " time " << std::setprecision(3)
           << rec.seconds << "s" << std::defaultfloat << '\n';
    }
    if (rec.valid_metric > best) {
      best = rec.valid_metric;
      since_best = 0;
      result.best = Checkpoint{params, adam};
      result.best_epoch = epoch;
    } else {
      ++since_best;
    }
    if (since_best >= cfg.patience) break;
  }
  return result;
}

std::string history_json(const TrainResult& result) {
  nlohmann::ordered_json j;
  j["metric"] = result.metric;
  j["best_epoch"] = result.best_epoch;
  j["epochs"] = nlohmann::json::array();
  for (const EpochRecord& r : result.history) {
    nlohmann::ordered_json e;
    e["epoch"] = r.epoch;
    e["train_loss"] = r.train_loss;
    e["valid_metric"] = r.valid_metric;
    e["seconds"] = r.seconds;
    e["batches"] = r.batches;
    e["queries"] = r.queries;
    j["epochs"].push_back(e);
  }
  return j.dump(2);
}

}  // namespace walkjoin
