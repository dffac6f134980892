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
#include <istream>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "walkjoin/id_map.hpp"
#include "walkjoin/types.hpp"

namespace walkjoin {

using Edge = std::pair<NodeId, NodeId>;

/// Row-major [num_nodes, dim] matrix of node attributes.
struct NodeFeatures {
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> row(NodeId u) const {
    return {values.data() + static_cast<std::size_t>(u) * dim, dim};
  }
};

/// Counts of records dropped while building a graph from raw input.
struct IngestReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/**
 * Immutable CSR adjacency.
 *
 * Neighbor lists are sorted ascending, contain no duplicates and no
 * self-loops. Undirected graphs store every edge in both directions, so
 * indices().size() == 2 * num_edges(). Edits produce new graphs.
 */
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `num_nodes` dense ids. Self-loops and repeated edges are dropped.
  static Graph from_edges(NodeId num_nodes, std::span<const Edge> edges, bool undirected = true);

  NodeId num_nodes() const { return num_nodes_; }
  /// Undirected edge count (or arc count for directed graphs).
  std::size_t num_edges() const { return undirected_ ? indices_.size() / 2 : indices_.size(); }
  bool undirected() const { return undirected_; }

  std::span<const std::uint64_t> idxptr() const { return idxptr_; }
  std::span<const NodeId> indices() const { return indices_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {indices_.data() + idxptr_[u], idxptr_[u + 1] - idxptr_[u]};
  }
  std::size_t degree(NodeId u) const { return idxptr_[u + 1] - idxptr_[u]; }
  bool has_edge(NodeId u, NodeId v) const;
  bool valid_node(std::int64_t u) const { return u >= 0 && u < num_nodes_; }

  /// Edge list with u < v for undirected graphs, in CSR order.
  std::vector<Edge> edges() const;

  /// Dense id -> original id; empty when ids were dense from the start.
  const IdMap& id_map() const { return id_map_; }
  void set_id_map(IdMap id_map);
  /// Original id -> dense id; identity when there is no id map.
  std::optional<NodeId> dense_id(std::int64_t original) const {
    return id_map_.dense(original, num_nodes_);
  }
  std::int64_t original_id(NodeId u) const { return id_map_.original(u); }

  const std::optional<NodeFeatures>& node_features() const { return features_; }
  void set_node_features(NodeFeatures features);

  const IngestReport& ingest_report() const { return report_; }

 private:
  NodeId num_nodes_ = 0;
  bool undirected_ = true;
  std::vector<std::uint64_t> idxptr_{0};
  std::vector<NodeId> indices_;
  IdMap id_map_;
  std::optional<NodeFeatures> features_;
  IngestReport report_;
};

/// An ordered node set with an optional binary label.
struct Query {
  std::vector<NodeId> nodes;
  std::optional<int> label;

  std::size_t arity() const { return nodes.size(); }
  bool operator==(const Query&) const = default;
};

/// Throws InvalidArgument unless every node is valid in `g` and no node repeats.
void validate_query(const Graph& g, const Query& q, std::size_t min_arity = 2);

struct QuerySplit {
  std::vector<Query> train_pos;
  /// Optional labelled training negatives; when empty, training samples them.
  std::vector<Query> train_neg;
  std::vector<Query> valid_pos;
  std::vector<std::vector<Query>> valid_neg;
  std::vector<Query> test_pos;
  std::vector<std::vector<Query>> test_neg;
  Graph train_graph;
};

/// Parses "u v" lines ('#' starts a comment) and densely remaps ids in
/// first-appearance order.
Graph load_edge_list(std::istream& in, bool undirected = true);

/// Parses one hyperedge per line and returns the union of their cliques.
Graph project_hyperedges(std::istream& in);

/// Copy of `g` without the listed edges; throws if any edge is absent.
Graph remove_edges(const Graph& g, std::span<const Edge> edges);

/**
 * Seeded link split.
 *
 * A `train_frac` share of the shuffled edges is the training portion; the rest
 * is halved into validation and test positives. A `query_frac` share of the
 * training portion becomes positive training queries. train_graph keeps only
 * the training edges that are not queries. Every validation and test positive
 * receives `k_neg` uniform node pairs rejected against the full edge set.
 */
QuerySplit split_link_queries(const Graph& g, double train_frac, std::size_t k_neg,
                              std::uint64_t seed, double query_frac = 1.0);

/// Undirected stochastic block model on blocks * nodes_per_block nodes.
Graph generate_sbm(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                   std::uint64_t seed);

/// Random hyperedges of size `size`, each drawn inside one block of `nodes_per_block` nodes.
std::vector<std::vector<NodeId>> generate_block_hyperedges(std::size_t blocks,
                                                           std::size_t nodes_per_block,
                                                           std::size_t count, std::size_t size,
                                                           std::uint64_t seed);

/// Graph from in-memory hyperedges over dense ids [0, num_nodes).
Graph project_hyperedges(NodeId num_nodes, std::span<const std::vector<NodeId>> hyperedges);

/// Nodes adjacent to every member of `nodes`.
std::vector<NodeId> common_neighbors(const Graph& g, std::span<const NodeId> nodes);

/**
 * Balanced common-neighbor task: positives are node sets of size `arity` that
 * share at least one common neighbor, negatives share none. Every query node
 * has degree >= 1. Labels are set; positives and negatives are interleaved.
 */
std::vector<Query> make_common_neighbor_queries(const Graph& g, std::size_t arity,
                                                std::size_t per_class, std::uint64_t seed);

}  // namespace walkjoin
