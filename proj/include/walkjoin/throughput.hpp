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
#include <span>
#include <string>
#include <vector>

#include "walkjoin/graph.hpp"
#include "walkjoin/sampler.hpp"

namespace walkjoin {

struct ThroughputPoint {
  int threads = 1;
  double sample_seconds = 0.0;
  double walks_per_second = 0.0;
  double join_seconds = 0.0;
  double queries_per_second = 0.0;
  double sample_speedup = 1.0;  // relative to the first entry
  double join_speedup = 1.0;
};

struct ThroughputReport {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  WalkShape shape;
  std::size_t num_queries = 0;
  std::size_t repeats = 1;
  std::vector<ThroughputPoint> points;
};

/// `count` queries of `arity` distinct uniform nodes.
std::vector<Query> random_queries(NodeId num_nodes, std::size_t count, std::size_t arity,
                                  std::uint64_t seed);

/**
 * Times sample_all() and join_batch() at every thread count (best of
 * `repeats`). Speedups are relative to threads[0].
 */
ThroughputReport measure_throughput(const Graph& g, WalkShape shape, std::uint64_t seed,
                                    std::span<const Query> queries, std::span<const int> threads,
                                    std::size_t repeats);

std::string throughput_json(const ThroughputReport& report);

}  // namespace walkjoin
