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

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "json.hpp"
#include "oracles.hpp"
#include "walkjoin/pipeline.hpp"
#include "walkjoin/sampler.hpp"

namespace walkjoin {
namespace {

std::vector<Query> three_queries() { return {{{0, 1}, 1}, {{1, 2}, 1}, {{3, 4}, 1}}; }

TEST(OverlapIndex, MembershipBothWays) {
  Rng rng(3);
  std::vector<Query> qs(200);
  for (Query& q : qs) {
    while (q.nodes.size() < 3) {
      auto u = static_cast<NodeId>(uniform_index(rng, 50));
      if (std::find(q.nodes.begin(), q.nodes.end(), u) == q.nodes.end()) q.nodes.push_back(u);
    }
  }
  auto index = QueryOverlapIndex::build(qs, 60);
  for (NodeId u = 0; u < 60; ++u) {
    std::set<std::uint32_t> listed(index.queries_of(u).begin(), index.queries_of(u).end());
    for (std::uint32_t q = 0; q < qs.size(); ++q) {
      const bool member = std::find(qs[q].nodes.begin(), qs[q].nodes.end(), u) != qs[q].nodes.end();
      EXPECT_EQ(listed.contains(q), member);
    }
  }
  EXPECT_TRUE(std::is_sorted(index.nodes().begin(), index.nodes().end()));
  EXPECT_THROW(QueryOverlapIndex::build(qs, 40), InvalidArgument);
}

TEST(ExpandMinibatch, ConnectivityForced) {
  auto qs = three_queries();
  auto index = QueryOverlapIndex::build(qs, 5);
  const std::vector<NodeId> seed{0};
  Minibatch b = expand_minibatch(index, qs, seed, 10, 10);
  EXPECT_EQ(b.queries, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(std::set<NodeId>(b.seed_set.begin(), b.seed_set.end()), (std::set<NodeId>{0, 1, 2}));
}

TEST(ExpandMinibatch, QueryLimitBinds) {
  auto qs = three_queries();
  auto index = QueryOverlapIndex::build(qs, 5);
  const std::vector<NodeId> seed{0};
  Minibatch b = expand_minibatch(index, qs, seed, 10, 1);
  EXPECT_EQ(b.queries, (std::vector<std::size_t>{0}));
  for (NodeId u : qs[0].nodes)
    EXPECT_NE(std::find(b.seed_set.begin(), b.seed_set.end(), u), b.seed_set.end());
  EXPECT_THROW(expand_minibatch(index, qs, seed, 0, 1), InvalidArgument);
}

TEST(SampleMinibatch, PropertySweep) {
  Rng gen(11);
  std::vector<Query> qs(1000);
  for (Query& q : qs) {
    const std::size_t arity = 2 + uniform_index(gen, 2);
    while (q.nodes.size() < arity) {
      auto u = static_cast<NodeId>(uniform_index(gen, 400));
      if (std::find(q.nodes.begin(), q.nodes.end(), u) == q.nodes.end()) q.nodes.push_back(u);
    }
    q.label = 1;
  }
  auto index = QueryOverlapIndex::build(qs, 400);
  for (auto [b1, b2] : {std::pair{5ul, 3ul}, {40ul, 32ul}, {1500ul, 32ul}, {16ul, 1000ul}}) {
    TrainConfig cfg;
    cfg.batch_capacity = b1;
    cfg.batch_size = b2;
    Rng rng(b1 * 31 + b2);
    for (int i = 0; i < 100; ++i) {
      Minibatch mb = sample_minibatch(index, qs, cfg, rng);
      std::set<NodeId> seeds(mb.seed_set.begin(), mb.seed_set.end());
      EXPECT_EQ(seeds.size(), mb.seed_set.size());
      EXPECT_LE(mb.seed_set.size(), b1);
      EXPECT_LE(mb.queries.size(), b2);
      EXPECT_FALSE(mb.queries.empty());
      for (std::size_t qi : mb.queries) {
        const auto& n = qs[qi].nodes;
        EXPECT_TRUE(std::any_of(n.begin(), n.end(), [&](NodeId u) { return seeds.contains(u); }));
      }
    }
  }
}

TEST(SampleMinibatch, Deterministic) {
  auto qs = three_queries();
  auto index = QueryOverlapIndex::build(qs, 5);
  TrainConfig cfg;
  Rng a(5), b(5);
  for (int i = 0; i < 20; ++i) {
    Minibatch x = sample_minibatch(index, qs, cfg, a);
    Minibatch y = sample_minibatch(index, qs, cfg, b);
    EXPECT_EQ(x.queries, y.queries);
    EXPECT_EQ(x.seed_set, y.seed_set);
  }
  EXPECT_THROW(sample_minibatch(QueryOverlapIndex::build({}, 5), {}, cfg, a), InvalidArgument);
}

TEST(SampleNegatives, ExhaustiveSpace) {
  QueryKeySet pos;
  pos.insert(std::vector<NodeId>{1, 0});
  const std::vector<NodeId> seed{0, 1, 2};
  Rng rng(1);
  auto negs = sample_negatives(seed, 2, 200, pos, rng);
  ASSERT_EQ(negs.size(), 200u);
  for (const Query& q : negs) {
    std::set<NodeId> s(q.nodes.begin(), q.nodes.end());
    EXPECT_TRUE(s == (std::set<NodeId>{0, 2}) || s == (std::set<NodeId>{1, 2}));
    EXPECT_EQ(q.label, 0);
  }
}

TEST(SampleNegatives, Errors) {
  QueryKeySet pos;
  pos.insert(std::vector<NodeId>{0, 1});
  Rng rng(1);
  const std::vector<NodeId> two{0, 1};
  EXPECT_THROW(sample_negatives(two, 2, 1, pos, rng), InvalidArgument);
  const std::vector<NodeId> one{0};
  EXPECT_THROW(sample_negatives(one, 2, 1, pos, rng), InvalidArgument);
}

TEST(SampleNegatives, NoCollisions) {
  QueryKeySet pos;
  Rng gen(2);
  std::set<std::vector<NodeId>> keys;
  for (int i = 0; i < 2000; ++i) {
    std::vector<NodeId> q{static_cast<NodeId>(uniform_index(gen, 100)), static_cast<NodeId>(uniform_index(gen, 100))};
    if (q[0] == q[1]) continue;
    pos.insert(q);
    std::sort(q.begin(), q.end());
    keys.insert(q);
  }
  std::vector<NodeId> seed(100);
  std::iota(seed.begin(), seed.end(), 0);
  Rng rng(3);
  auto negs = sample_negatives(seed, 2, 500, pos, rng);
  ASSERT_EQ(negs.size(), 500u);
  for (const Query& q : negs) {
    auto k = q.nodes;
    std::sort(k.begin(), k.end());
    EXPECT_FALSE(keys.contains(k));
    EXPECT_NE(k[0], k[1]);
  }
}

struct Task {
  Graph graph;
  SubgraphStore store;
  QuerySplit split;
};

Task common_neighbor_task(std::uint64_t seed, std::size_t per_class = 150) {
  Task t;
  t.graph = generate_sbm(2, 100, 0.08, 0.002, seed);
  t.store = preprocess(t.graph, 10, 2, seed, 1);
  auto qs = make_common_neighbor_queries(t.graph, 2, per_class, seed);
  const std::size_t n_train = qs.size() * 2 / 3;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i < n_train) {
      (qs[i].label == 1 ? t.split.train_pos : t.split.train_neg).push_back(qs[i]);
    } else if (qs[i].label == 1) {
      t.split.valid_pos.push_back(qs[i]);
    }
  }
  t.split.valid_neg.resize(t.split.valid_pos.size());
  for (std::size_t i = n_train; i < qs.size(); ++i)
    if (qs[i].label == 0) t.split.valid_neg.front().push_back(qs[i]);
  return t;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.hidden = 16;
  cfg.max_epochs = 8;
  cfg.patience = 8;
  cfg.lr = 1e-2;
  cfg.metric = MetricSpec::parse("auc");
  cfg.seed = 1;
  cfg.threads = 1;
  return cfg;
}

TEST(Train, LossDecreasesOnCommonNeighborTask) {
  Task t = common_neighbor_task(2);
  TrainConfig cfg = small_config();
  cfg.max_epochs = cfg.patience = 40;
  TrainResult r = train(t.store, t.split, cfg);
  ASSERT_EQ(r.history.size(), 40u);
  ASSERT_GE(r.best_epoch, 1u);
  // an initial plateau, then a clear drop
  double late = r.history.back().train_loss;
  for (std::size_t e = 30; e < 40; ++e) late = std::min(late, r.history[e].train_loss);
  EXPECT_LT(late, r.history.front().train_loss - 0.05);
  EXPECT_GT(r.history[r.best_epoch - 1].valid_metric, 0.7);
  EXPECT_EQ(r.metric, "auc");
}

TEST(Train, PatienceZeroRunsOneEpoch) {
  Task t = common_neighbor_task(3);
  TrainConfig cfg = small_config();
  cfg.patience = 0;
  TrainResult r = train(t.store, t.split, cfg);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.best_epoch, 1u);
}

TEST(Train, SeededRunsAreIdentical) {
  Task t = common_neighbor_task(4);
  TrainConfig cfg = small_config();
  cfg.max_epochs = 3;
  TrainResult a = train(t.store, t.split, cfg);
  TrainResult b = train(t.store, t.split, cfg);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].valid_metric, b.history[i].valid_metric);
  }
  EXPECT_TRUE(a.best.params.same_values(b.best.params));
  // the blocked gradient reduction does not depend on the worker count
  cfg.threads = 4;
  TrainResult c = train(t.store, t.split, cfg);
  EXPECT_TRUE(a.best.params.same_values(c.best.params));
}

TEST(Train, ReturnsBestEpochParameters) {
  Task t = common_neighbor_task(5);
  TrainConfig cfg = small_config();
  cfg.max_epochs = 6;
  cfg.lr = 5e-2;  // large steps so the metric is not monotone
  TrainResult r = train(t.store, t.split, cfg);
  double best = -1;
  for (const auto& e : r.history) best = std::max(best, e.valid_metric);
  EXPECT_EQ(r.history[r.best_epoch - 1].valid_metric, best);
  auto results = score_ranked(t.store, r.best.params, t.split.valid_pos, t.split.valid_neg, 1);
  EXPECT_EQ(compute_metric(cfg.metric, results), best);
  auto h = nlohmann::json::parse(history_json(r));
  EXPECT_EQ(h["epochs"].size(), r.history.size());
  EXPECT_EQ(h["best_epoch"], r.best_epoch);
}

TEST(Train, SampledNegativesPath) {
  Task t = common_neighbor_task(6);
  t.split.train_neg.clear();
  TrainConfig cfg = small_config();
  cfg.max_epochs = 2;
  cfg.k_neg = 3;
  TrainResult r = train(t.store, t.split, cfg);
  EXPECT_EQ(r.history.size(), 2u);
  // each batch carries its positives plus k_neg negatives per positive
  EXPECT_GE(r.history[0].queries, t.split.train_pos.size() * 4);
}

TEST(Train, RejectsBadInput) {
  Task t = common_neighbor_task(7, 30);
  TrainConfig cfg = small_config();
  QuerySplit empty;
  EXPECT_THROW(train(t.store, empty, cfg), InvalidArgument);
  cfg.batch_size = 0;
  EXPECT_THROW(train(t.store, t.split, cfg), InvalidArgument);
  QuerySplit mixed = t.split;
  mixed.train_pos.push_back({{0, 1, 2}, 1});
  EXPECT_THROW(train(t.store, mixed, small_config()), InvalidArgument);
}

TEST(Infer, ZeroModelAndPurity) {
  Task t = common_neighbor_task(8, 40);
  ModelConfig c;
  c.arity = 2;
  c.num_walks = 10;
  c.steps = 2;
  c.hidden = 8;
  ModelParams zero = ModelParams::zeros(c);
  std::vector<Query> qs = t.split.train_pos;
  for (double s : infer(t.store, zero, qs, 2)) EXPECT_EQ(s, 0.5);

  ModelParams p = ModelParams::glorot(c, 3);
  qs.push_back(qs.front());
  auto scores = infer(t.store, p, qs, 3);
  EXPECT_EQ(scores.front(), scores.back());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    DenseTensor x = featurize(t.store.table(), join_query(t.store, qs[i]), 1.0 / c.num_walks);
    EXPECT_EQ(scores[i], sigmoid(forward(p, x).logit));
  }
  EXPECT_EQ(scores, infer(t.store, p, qs, 1));
}

TEST(Infer, ChunkBoundariesDoNotMatter) {
  Graph g = oracle::random_graph(60, 0.1, 1);
  SubgraphStore s = preprocess(g, 3, 2, 1, 1);
  ModelConfig c;
  c.num_walks = 3;
  c.steps = 2;
  c.hidden = 4;
  ModelParams p = ModelParams::glorot(c, 1);
  Rng rng(2);
  std::vector<Query> qs(1100);
  for (Query& q : qs) {
    q.nodes = {static_cast<NodeId>(uniform_index(rng, 30)), static_cast<NodeId>(30 + uniform_index(rng, 30))};
  }
  auto all = infer(s, p, qs, 2);
  auto tail = infer(s, p, std::span<const Query>(qs).subspan(700), 2);
  EXPECT_TRUE(std::equal(tail.begin(), tail.end(), all.begin() + 700));
}

TEST(Infer, Errors) {
  Task t = common_neighbor_task(9, 30);
  ModelConfig c;
  c.num_walks = 10;
  c.steps = 2;
  c.hidden = 4;
  ModelParams p = ModelParams::zeros(c);
  std::vector<Query> triple{{{0, 1, 2}, {}}};
  EXPECT_THROW(infer(t.store, p, triple, 1), InvalidArgument);
  c.num_walks = 11;
  EXPECT_THROW(infer(t.store, ModelParams::zeros(c), t.split.train_pos, 1), InvalidArgument);
}

}  // namespace
}  // namespace walkjoin
