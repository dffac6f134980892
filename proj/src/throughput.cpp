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

#include "walkjoin/throughput.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "json.hpp"
#include "walkjoin/joiner.hpp"
#include "walkjoin/rng.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {

namespace {

template <class F>
double best_seconds(std::size_t repeats, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

std::vector<Query> random_queries(NodeId num_nodes, std::size_t count, std::size_t arity,
                                  std::uint64_t seed) {
  if (arity < 1 || static_cast<std::size_t>(num_nodes) < arity) {
    throw InvalidArgument("graph too small for queries of arity " + std::to_string(arity));
  }
  Rng rng(stage_seed(seed, "bench-queries"));
  std::vector<Query> out(count);
  for (Query& q : out) {
    while (q.nodes.size() < arity) {
      const auto u = static_cast<NodeId>(uniform_index(rng, static_cast<std::size_t>(num_nodes)));
      if (std::find(q.nodes.begin(), q.nodes.end(), u) == q.nodes.end()) q.nodes.push_back(u);
    }
  }
  return out;
}

ThroughputReport measure_throughput(const Graph& g, WalkShape shape, std::uint64_t seed,
                                    std::span<const Query> queries, std::span<const int> threads,
                                    std::size_t repeats) {
  if (threads.empty()) throw InvalidArgument("no thread counts to measure");
  for (int t : threads) {
    if (t < 1) throw InvalidArgument("thread counts must be >= 1");
  }
  ThroughputReport report;
  report.num_nodes = static_cast<std::size_t>(g.num_nodes());
  report.num_edges = g.num_edges();
  report.shape = shape;
  report.num_queries = queries.size();
  report.repeats = repeats;

  const int widest = *std::max_element(threads.begin(), threads.end());
  const SubgraphStore store = preprocess(g, shape.num_walks, shape.steps, seed, widest);
  const double walks = static_cast<double>(report.num_nodes) * shape.num_walks;

  for (int t : threads) {
    ThroughputPoint p;
    p.threads = t;
    p.sample_seconds = best_seconds(repeats, [&] { (void)sample_all(g, shape, seed, t); });
    p.join_seconds = best_seconds(repeats, [&] { (void)join_batch(store, queries, t); });
    p.walks_per_second = walks / p.sample_seconds;
    p.queries_per_second = static_cast<double>(queries.size()) / p.join_seconds;
    report.points.push_back(p);
  }
  for (ThroughputPoint& p : report.points) {
    p.sample_speedup = p.walks_per_second / report.points.front().walks_per_second;
    p.join_speedup = p.queries_per_second / report.points.front().queries_per_second;
  }
  return report;
}

std::string throughput_json(const ThroughputReport& report) {
  nlohmann::ordered_json j;
  j["num_nodes"] = report.num_nodes;
  j["num_edges"] = report.num_edges;
  j["M"] = report.shape.num_walks;
  j["m"] = report.shape.steps;
  j["num_queries"] = report.num_queries;
  j["repeats"] = report.repeats;
  j["points"] = nlohmann::json::array();
  for (const ThroughputPoint& p : report.points) {
    nlohmann::ordered_json e;
    e["threads"] = p.threads;
    e["sample_seconds"] = p.sample_seconds;
    e["walks_per_second"] = p.walks_per_second;
    e["sample_speedup"] = p.sample_speedup;
    e["join_seconds"] = p.join_seconds;
    e["queries_per_second"] = p.queries_per_second;
    e["join_speedup"] = p.join_speedup;
    j["points"].push_back(e);
  }
  return j.dump(2);
}

}  // namespace walkjoin
