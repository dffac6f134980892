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

#include <queue>

#include "oracles.hpp"
#include "walkjoin/sampler.hpp"

namespace walkjoin {
namespace {

std::vector<NodeId> to_vec(std::span<const NodeId> s) { return {s.begin(), s.end()}; }
std::vector<RpeCount> to_vec(std::span<const RpeCount> s) { return {s.begin(), s.end()}; }

TEST(SampleWalks, PathGraphIsForced) {
  Rng rng(1);
  WalkSet ws = sample_walks(oracle::path_graph(), 0, 2, 2, rng);
  EXPECT_EQ(ws.nodes, (std::vector<NodeId>{0, 1, 0, 0, 1, 0}));
}

TEST(SampleWalks, IsolatedNodeRepeats) {
  Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}});
  Rng rng(1);
  WalkSet ws = sample_walks(g, 5, 3, 2, rng);
  EXPECT_EQ(ws.nodes, std::vector<NodeId>(9, 5));
}

// Recorded from a reference run and frozen: triangle, u=0, M=4, m=3, seed 42.
TEST(SampleWalks, SeededTriangleFixture) {
  Rng rng = node_rng(42, 0);
  WalkSet ws = sample_walks(oracle::triangle(), 0, 4, 3, rng);
  const std::vector<NodeId> frozen{0, 2, 1, 0, 0, 1, 2, 1, 0, 1, 0, 1, 0, 2, 0, 2};
  EXPECT_EQ(ws.nodes, frozen);
}

TEST(SampleWalks, ValidatesArguments) {
  Rng rng(1);
  EXPECT_THROW(sample_walks(oracle::triangle(), 3, 1, 1, rng), InvalidArgument);
  EXPECT_THROW(sample_walks(oracle::triangle(), 0, 0, 1, rng), InvalidArgument);
  EXPECT_THROW(sample_walks(oracle::triangle(), 0, 1, 0, rng), InvalidArgument);
}

TEST(ComputeRpe, PathGraphCounts) {
  Rng rng(1);
  RawRpeMap raw = compute_rpe(sample_walks(oracle::path_graph(), 0, 2, 2, rng));
  EXPECT_EQ(raw.nodes, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(to_vec(*raw.find(0)), (std::vector<RpeCount>{2, 0, 2}));
  EXPECT_EQ(to_vec(*raw.find(1)), (std::vector<RpeCount>{0, 2, 0}));
  EXPECT_FALSE(raw.find(7).has_value());
}

TEST(ComputeRpe, StarCenterAtPositionOne) {
  for (std::uint32_t M : {1u, 5u, 13u}) {
    Rng rng(M);
    RawRpeMap raw = compute_rpe(sample_walks(oracle::star(3), 1, M, 2, rng));
    EXPECT_EQ(to_vec(*raw.find(0)), (std::vector<RpeCount>{0, M, 0}));
  }
}

TEST(ComputeRpe, IndependentOfWalkOrder) {
  Graph g = oracle::random_graph(30, 0.2, 3);
  Rng rng(5);
  WalkSet ws = sample_walks(g, 4, 9, 3, rng);
  RawRpeMap a = compute_rpe(ws);
  WalkSet rev = ws;
  const std::size_t len = ws.shape.walk_len();
  for (std::size_t j = 0; j < ws.shape.num_walks; ++j)
    std::copy_n(ws.nodes.begin() + (ws.shape.num_walks - 1 - j) * len, len, rev.nodes.begin() + j * len);
  RawRpeMap b = compute_rpe(rev);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (NodeId x : a.nodes) EXPECT_EQ(to_vec(*a.find(x)), to_vec(*b.find(x)));
}

TEST(ComputeRpe, MatchesBruteForceRecount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = oracle::random_graph(40, 0.08, seed);
    Rng rng(seed);
    const NodeId u = static_cast<NodeId>(uniform_index(rng, 40));
    WalkSet ws = sample_walks(g, u, 1 + seed % 7, 1 + seed % 4, rng);
    RawRpeMap raw = compute_rpe(ws);
    auto expected = oracle::count_all(ws.nodes, ws.shape.walk_len());
    ASSERT_EQ(raw.nodes.size(), expected.size());
    for (const auto& [x, counts] : expected) {
      auto got = raw.find(x);
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(std::vector<std::uint32_t>(got->begin(), got->end()), counts);
    }
  }
}

class SampleAllProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SampleAllProperties, WalksAreValidAndRpeMassIsM) {
  const std::uint64_t seed = GetParam();
  Graph g = oracle::random_graph(60, 0.04, seed);  // sparse enough to leave isolated nodes
  const WalkShape shape{6, 3};
  SampledWalks sw = sample_all(g, shape, seed, 2);
  ASSERT_EQ(sw.walks.size(), g.num_nodes() * shape.slots());
  const std::size_t len = shape.walk_len();
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    std::span<const NodeId> w(sw.walks.data() + u * shape.slots(), shape.slots());
    for (std::size_t j = 0; j < shape.num_walks; ++j) {
      EXPECT_EQ(w[j * len], u);
      for (std::size_t i = 1; i < len; ++i) {
        const NodeId a = w[j * len + i - 1], b = w[j * len + i];
        if (g.degree(a) == 0) {
          EXPECT_EQ(a, b);
        } else {
          EXPECT_TRUE(g.has_edge(a, b)) << a << "->" << b;
        }
      }
    }
    const RawRpeMap& raw = sw.raw[u];
    for (std::size_t i = 0; i < len; ++i) {
      std::uint64_t mass = 0;
      for (std::size_t k = 0; k < raw.nodes.size(); ++k) mass += raw.row(k)[i];
      EXPECT_EQ(mass, shape.num_walks);
    }
    EXPECT_EQ((*raw.find(u))[0], shape.num_walks);

    // every reached node lies within m hops
    std::vector<int> dist(g.num_nodes(), -1);
    std::queue<NodeId> bfs;
    dist[u] = 0;
    bfs.push(u);
    while (!bfs.empty()) {
      NodeId a = bfs.front();
      bfs.pop();
      for (NodeId b : g.neighbors(a))
        if (dist[b] < 0) {
          dist[b] = dist[a] + 1;
          bfs.push(b);
        }
    }
    for (NodeId x : raw.nodes) {
      ASSERT_GE(dist[x], 0);
      EXPECT_LE(dist[x], static_cast<int>(shape.steps));
    }
  }
}

TEST_P(SampleAllProperties, PerNodeStreamsIgnoreThreadCount) {
  const std::uint64_t seed = GetParam();
  Graph g = oracle::random_graph(80, 0.1, seed + 100);
  const WalkShape shape{5, 4};
  SampledWalks one = sample_all(g, shape, seed, 1);
  for (int t : {2, 3, 8}) {
    SampledWalks many = sample_all(g, shape, seed, t);
    EXPECT_EQ(one.walks, many.walks);
  }
  // node u's walks equal an isolated sample_walks() call with that node's generator
  for (NodeId u : {0, 17, 79}) {
    Rng rng = node_rng(seed, u);
    WalkSet ws = sample_walks(g, u, shape.num_walks, shape.steps, rng);
    EXPECT_EQ(ws.nodes, to_vec(std::span<const NodeId>(one.walks.data() + u * shape.slots(), shape.slots())));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SampleAllProperties, ::testing::Values(1, 2, 3, 4, 5));

TEST(Preprocess, PathGraphStore) {
  SubgraphStore s = preprocess(oracle::path_graph(), 2, 2, 0, 1);
  EXPECT_EQ(s.num_nodes(), 2);
  ASSERT_EQ(s.table().size(), 3u);
  EXPECT_EQ(to_vec(s.table().row(0)), (std::vector<RpeCount>{0, 0, 0}));
  EXPECT_EQ(to_vec(s.table().row(1)), (std::vector<RpeCount>{2, 0, 2}));
  EXPECT_EQ(to_vec(s.table().row(2)), (std::vector<RpeCount>{0, 2, 0}));
}

TEST(Preprocess, ThreadCountsGiveIdenticalStores) {
  Graph g = generate_sbm(2, 100, 0.1, 0.005, 1);
  const std::string one = serialize_store(preprocess(g, 10, 3, 1, 1));
  EXPECT_EQ(one, serialize_store(preprocess(g, 10, 3, 1, 8)));
  EXPECT_EQ(one, serialize_store(reference::preprocess(g, 10, 3, 1)));
}

TEST(Preprocess, WalkSlotCount) {
  for (auto [n, M, m] : {std::tuple{1, 1u, 1u}, {50, 7u, 2u}, {123, 3u, 5u}}) {
    Graph g = oracle::random_graph(n, 0.05, n);
    SubgraphStore s = preprocess(g, M, m, 0, 2);
    EXPECT_EQ(s.all_walks().size(), static_cast<std::size_t>(n) * M * (m + 1));
    EXPECT_EQ(s.stats().walk_slots, static_cast<std::size_t>(n) * M * (m + 1));
  }
}

TEST(Preprocess, RejectsBadArguments) {
  EXPECT_THROW(preprocess(oracle::triangle(), 0, 2, 0, 1), InvalidArgument);
  EXPECT_THROW(preprocess(oracle::triangle(), 2, 0, 0, 1), InvalidArgument);
  EXPECT_THROW(preprocess(oracle::triangle(), 2, 2, 0, 0), InvalidArgument);
}

}  // namespace
}  // namespace walkjoin
