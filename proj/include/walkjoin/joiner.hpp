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
#include <vector>

#include <Eigen/Dense>

#include "walkjoin/graph.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {

using DenseTensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * Joined subgraph of a query: the walk sets of every query node stacked as
 * [|Q|*M, m+1], plus one RPE-ID per (walk slot, query node) in a
 * [|Q|*M*(m+1), |Q|] buffer whose rows follow walk_nodes in row-major order.
 */
struct JoinedQuery {
  Query query;
  WalkShape shape;
  std::vector<NodeId> walk_nodes;
  std::vector<RpeId> rpe_ids;

  std::size_t arity() const { return query.nodes.size(); }
  std::size_t rows() const { return walk_nodes.size(); }
  RpeId rpe_id(std::size_t row, std::size_t j) const { return rpe_ids[row * arity() + j]; }

  bool operator==(const JoinedQuery&) const = default;
};

JoinedQuery join_query(const SubgraphStore& store, const Query& q);

/// Same as mapping join_query() over `queries`; parallel over (query, slot) pairs.
std::vector<JoinedQuery> join_batch(const SubgraphStore& store, std::span<const Query> queries,
                                    int threads);

/// Dense query-level RPE [rows, |Q|*(m+1)]: row r concatenates table rows of rpe_id(r, j).
DenseTensor gather_rpe(const RpeTable& table, const JoinedQuery& jq);

namespace reference {

/// Serial join through SubgraphStore::get_rpe_id(), kept as a test oracle.
std::vector<JoinedQuery> join_batch(const SubgraphStore& store, std::span<const Query> queries);

}  // namespace reference

}  // namespace walkjoin
