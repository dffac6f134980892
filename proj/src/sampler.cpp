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

#include "walkjoin/sampler.hpp"

#include <algorithm>
#include <map>
#include <new>

#include <omp.h>

#include "walkjoin/node_dictionary.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {

namespace {

void check_shape(WalkShape shape) {
  if (shape.num_walks < 1 || shape.steps < 1) throw InvalidArgument("M and m must both be >= 1");
}

/// Positional counts of a row-major walk block, using `scratch` as the node index.
void compute_rpe_into(ScratchIndex& scratch, std::span<const NodeId> walks, std::size_t width,
                      RawRpeMap& out) {
  scratch.clear();
  out.width = width;
  out.nodes.clear();
  out.counts.clear();
  for (std::size_t r = 0; r < walks.size(); ++r) {
    const NodeId x = walks[r];
    auto [k, inserted] = scratch.insert(x);
    if (inserted) {
      out.nodes.push_back(x);
      out.counts.resize(out.counts.size() + width, 0);
    }
    ++out.counts[static_cast<std::size_t>(k) * width + r % width];
  }
}

template <class T>
std::vector<T> allocate(std::size_t count, const char* what) {
  try {
    return std::vector<T>(count);
  } catch (const std::bad_alloc&) {
    throw ResourceError(std::string("cannot allocate ") + std::to_string(count * sizeof(T)) +
                        " bytes for " + what);
  }
}

}  // namespace

std::optional<std::span<const RpeCount>> RawRpeMap::find(NodeId x) const {
  auto it = std::find(nodes.begin(), nodes.end(), x);
  if (it == nodes.end()) return std::nullopt;
  return row(static_cast<std::size_t>(it - nodes.begin()));
}

void sample_walks_into(const Graph& g, NodeId u, WalkShape shape, Rng& rng,
                       std::span<NodeId> out) {
  const std::size_t len = shape.walk_len();
  for (std::size_t j = 0; j < shape.num_walks; ++j) {
    NodeId* walk = out.data() + j * len;
    NodeId cur = u;
    walk[0] = cur;
    for (std::size_t i = 1; i < len; ++i) {
      const std::size_t deg = g.degree(cur);
      // dead end: stay put so every walk keeps m+1 entries
      if (deg != 0) cur = g.neighbors(cur)[uniform_index(rng, deg)];
      walk[i] = cur;
    }
  }
}

WalkSet sample_walks(const Graph& g, NodeId u, std::uint32_t num_walks, std::uint32_t steps,
                     Rng& rng) {
  WalkShape shape{num_walks, steps};
  check_shape(shape);
  if (!g.valid_node(u)) throw InvalidArgument("anchor " + std::to_string(u) + " is not in the graph");
  WalkSet ws{u, shape, std::vector<NodeId>(shape.slots())};
  sample_walks_into(g, u, shape, rng, ws.nodes);
  return ws;
}

RawRpeMap compute_rpe(const WalkSet& ws) {
  ScratchIndex scratch(ws.nodes.size());
  RawRpeMap out;
  compute_rpe_into(scratch, ws.nodes, ws.shape.walk_len(), out);
  return out;
}

SampledWalks sample_all(const Graph& g, WalkShape shape, std::uint64_t seed, int threads) {
  check_shape(shape);
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  const std::int64_t n = g.num_nodes();
  const std::size_t slots = shape.slots();

  SampledWalks out;
  out.shape = shape;
  out.walks = allocate<NodeId>(static_cast<std::size_t>(n) * slots, "walk matrices");
  out.raw = allocate<RawRpeMap>(static_cast<std::size_t>(n), "raw RPE maps");

#pragma omp parallel num_threads(threads)
  {
    ScratchIndex scratch(slots);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t u = 0; u < n; ++u) {
      Rng rng = node_rng(seed, u);
      std::span<NodeId> block(out.walks.data() + static_cast<std::size_t>(u) * slots, slots);
      sample_walks_into(g, static_cast<NodeId>(u), shape, rng, block);
      compute_rpe_into(scratch, block, shape.walk_len(), out.raw[u]);
    }
  }
  return out;
}

namespace {

SubgraphStore assemble(const Graph& g, WalkShape shape, std::uint64_t seed,
                       std::vector<NodeId> walks, std::vector<RawRpeMap>& raw,
                       DedupResult dedup, int threads) {
  const std::size_t n = raw.size();
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) offsets[u + 1] = offsets[u] + raw[u].nodes.size();
  std::vector<NodeId> keys = allocate<NodeId>(offsets[n], "dictionary keys");
  std::vector<RpeId> ids = allocate<RpeId>(offsets[n], "dictionary ids");
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(n); ++u) {
    std::copy(raw[u].nodes.begin(), raw[u].nodes.end(), keys.begin() + offsets[u]);
    std::copy(dedup.ids[u].begin(), dedup.ids[u].end(), ids.begin() + offsets[u]);
  }
  raw.clear();
  raw.shrink_to_fit();
  dedup.ids.clear();
  auto dicts = DictionaryArena::build(std::move(offsets), std::move(keys), std::move(ids), threads);
  return SubgraphStore(StoreParams{shape, seed}, std::move(walks), std::move(dicts),
                       std::move(dedup.table), g.id_map());
}

}  // namespace

SubgraphStore preprocess(const Graph& g, std::uint32_t num_walks, std::uint32_t steps,
                         std::uint64_t seed, int threads) {
  WalkShape shape{num_walks, steps};
  SampledWalks sampled = sample_all(g, shape, seed, threads);
  DedupResult dedup = dedup_and_reindex(sampled.raw, shape.walk_len());
  return assemble(g, shape, seed, std::move(sampled.walks), sampled.raw, std::move(dedup), threads);
}

namespace reference {

SubgraphStore preprocess(const Graph& g, std::uint32_t num_walks, std::uint32_t steps,
                         std::uint64_t seed) {
  WalkShape shape{num_walks, steps};
  check_shape(shape);
  const std::size_t width = shape.walk_len();
  std::vector<NodeId> walks;
  std::vector<RawRpeMap> raw(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    Rng rng = node_rng(seed, u);
    WalkSet ws = sample_walks(g, u, num_walks, steps, rng);
    std::map<NodeId, std::vector<RpeCount>> counts;
    for (std::size_t j = 0; j < shape.num_walks; ++j) {
      for (std::size_t i = 0; i < width; ++i) {
        const NodeId x = ws.walk(j)[i];
        if (!counts.contains(x)) raw[u].nodes.push_back(x);
        auto& vec = counts[x];
        vec.resize(width, 0);
        ++vec[i];
      }
    }
    raw[u].width = width;
    for (NodeId x : raw[u].nodes) {
      raw[u].counts.insert(raw[u].counts.end(), counts[x].begin(), counts[x].end());
    }
    walks.insert(walks.end(), ws.nodes.begin(), ws.nodes.end());
  }

  std::map<std::vector<RpeCount>, RpeId> seen;
  DedupResult dedup{RpeTable(width), {}};
  seen.emplace(std::vector<RpeCount>(width, 0), kZeroRpeId);
  dedup.ids.resize(raw.size());
  for (std::size_t u = 0; u < raw.size(); ++u) {
    for (std::size_t k = 0; k < raw[u].nodes.size(); ++k) {
      auto row = raw[u].row(k);
      std::vector<RpeCount> key(row.begin(), row.end());
      auto it = seen.find(key);
      if (it == seen.end()) it = seen.emplace(key, dedup.table.push(row)).first;
      dedup.ids[u].push_back(it->second);
    }
  }
  return assemble(g, shape, seed, std::move(walks), raw, std::move(dedup), 1);
}

}  // namespace reference

}  // namespace walkjoin
