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
#include <optional>
#include <span>
#include <vector>

#include "walkjoin/graph.hpp"
#include "walkjoin/rng.hpp"
#include "walkjoin/types.hpp"

namespace walkjoin {

class SubgraphStore;

/// Walk shape: `num_walks` walks of `steps` steps, i.e. steps + 1 nodes each.
struct WalkShape {
  std::uint32_t num_walks = 0;
  std::uint32_t steps = 0;

  std::size_t walk_len() const { return steps + 1u; }
  bool operator==(const WalkShape&) const = default;
  std::size_t slots() const { return static_cast<std::size_t>(num_walks) * walk_len(); }
};

/// M walks rooted at `anchor`, stored row-major as [M, m+1].
struct WalkSet {
  NodeId anchor = 0;
  WalkShape shape;
  std::vector<NodeId> nodes;

  std::span<const NodeId> walk(std::size_t j) const {
    return {nodes.data() + j * shape.walk_len(), shape.walk_len()};
  }
};

/**
 * Positional counts of every node reached from one anchor.
 *
 * nodes lists the distinct nodes in first-appearance order of a row-major
 * scan over the walks; counts holds nodes.size() rows of width m+1.
 */
struct RawRpeMap {
  std::size_t width = 0;
  std::vector<NodeId> nodes;
  std::vector<RpeCount> counts;

  std::span<const RpeCount> row(std::size_t k) const { return {counts.data() + k * width, width}; }
  /// Counts of x, or nullopt when x was never visited.
  std::optional<std::span<const RpeCount>> find(NodeId x) const;
};

/// Samples M uniform walks from u; degree-0 nodes repeat themselves.
WalkSet sample_walks(const Graph& g, NodeId u, std::uint32_t num_walks, std::uint32_t steps,
                     Rng& rng);

/// Kernel behind sample_walks(): writes shape.slots() node ids into `out`.
void sample_walks_into(const Graph& g, NodeId u, WalkShape shape, Rng& rng, std::span<NodeId> out);

RawRpeMap compute_rpe(const WalkSet& ws);

/// Walks and raw RPE maps for every node, before deduplication.
struct SampledWalks {
  WalkShape shape;
  std::vector<NodeId> walks;  // [n * M, m+1]
  std::vector<RawRpeMap> raw;
};

/// Parallel sampling + on-the-fly RPE over all nodes (OpenMP, `threads` workers).
SampledWalks sample_all(const Graph& g, WalkShape shape, std::uint64_t seed, int threads);

/// Full preprocessing: sample_all(), then deduplication into a SubgraphStore.
/// Output is bit-identical for every thread count.
SubgraphStore preprocess(const Graph& g, std::uint32_t num_walks, std::uint32_t steps,
                         std::uint64_t seed, int threads);

namespace reference {

/// Serial, map-based preprocessing kept as a test oracle for preprocess().
SubgraphStore preprocess(const Graph& g, std::uint32_t num_walks, std::uint32_t steps,
                         std::uint64_t seed);

}  // namespace reference

}  // namespace walkjoin
