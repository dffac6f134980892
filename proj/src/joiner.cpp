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

#include "walkjoin/joiner.hpp"

#include <algorithm>

#include <omp.h>

namespace walkjoin {

namespace {

void check_query(const SubgraphStore& store, const Query& q) {
  if (q.nodes.empty()) throw InvalidArgument("empty query");
  for (NodeId u : q.nodes) {
    if (!store.valid_node(u)) {
      throw InvalidArgument("query node " + std::to_string(u) + " is not in the store");
    }
  }
}

void allocate(const SubgraphStore& store, const Query& q, JoinedQuery& jq) {
  jq.query = q;
  jq.shape = store.shape();
  const std::size_t rows = q.nodes.size() * store.shape().slots();
  jq.walk_nodes.resize(rows);
  jq.rpe_ids.resize(rows * q.nodes.size());
}

/// Fills the rows owned by query slot j.
void fill_slot(const SubgraphStore& store, JoinedQuery& jq, std::size_t j) {
  const std::size_t slots = store.shape().slots();
  const std::size_t arity = jq.query.nodes.size();
  auto walks = store.walks(jq.query.nodes[j]);
  std::copy(walks.begin(), walks.end(), jq.walk_nodes.begin() + j * slots);
  RpeId* ids = jq.rpe_ids.data() + j * slots * arity;
  for (std::size_t r = 0; r < slots; ++r) {
    const NodeId x = walks[r];
    for (std::size_t c = 0; c < arity; ++c) {
      ids[r * arity + c] = store.rpe_id_unchecked(jq.query.nodes[c], x);
    }
  }
}

}  // namespace

JoinedQuery join_query(const SubgraphStore& store, const Query& q) {
  check_query(store, q);
  JoinedQuery jq;
  allocate(store, q, jq);
  for (std::size_t j = 0; j < q.nodes.size(); ++j) fill_slot(store, jq, j);
  return jq;
}

std::vector<JoinedQuery> join_batch(const SubgraphStore& store, std::span<const Query> queries,
                                    int threads) {
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  if (queries.empty()) return {};
  const std::size_t arity = queries.front().nodes.size();
  for (const Query& q : queries) {
    if (q.nodes.size() != arity) throw InvalidArgument("mixed query arity in one batch");
    check_query(store, q);
  }
  std::vector<JoinedQuery> out(queries.size());
  const auto n = static_cast<std::int64_t>(queries.size());
  const std::int64_t items = n * static_cast<std::int64_t>(arity);
#pragma omp parallel num_threads(threads)
  {
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) allocate(store, queries[i], out[i]);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t item = 0; item < items; ++item) {
      const auto qi = static_cast<std::size_t>(item) / arity;
      fill_slot(store, out[qi], static_cast<std::size_t>(item) % arity);
    }
  }
  return out;
}

DenseTensor gather_rpe(const RpeTable& table, const JoinedQuery& jq) {
  const std::size_t arity = jq.arity();
  const std::size_t width = table.width();
  DenseTensor dense(static_cast<Eigen::Index>(jq.rows()), static_cast<Eigen::Index>(arity * width));
  for (std::size_t r = 0; r < jq.rows(); ++r) {
    double* row = dense.row(static_cast<Eigen::Index>(r)).data();
    for (std::size_t j = 0; j < arity; ++j) {
      const RpeId id = jq.rpe_id(r, j);
      if (id >= table.size()) {
        throw FormatError("RPE-ID " + std::to_string(id) + " outside table of size " +
                          std::to_string(table.size()));
      }
      auto counts = table.row(id);
      for (std::size_t i = 0; i < width; ++i) row[j * width + i] = counts[i];
    }
  }
  return dense;
}

namespace reference {

std::vector<JoinedQuery> join_batch(const SubgraphStore& store, std::span<const Query> queries) {
  std::vector<JoinedQuery> out;
  for (const Query& q : queries) {
    if (!queries.empty() && q.nodes.size() != queries.front().nodes.size()) {
      throw InvalidArgument("mixed query arity in one batch");
    }
    JoinedQuery jq;
    jq.query = q;
    jq.shape = store.shape();
    for (NodeId u : q.nodes) {
      auto walks = store.entry(u).walks;
      jq.walk_nodes.insert(jq.walk_nodes.end(), walks.begin(), walks.end());
    }
    for (NodeId x : jq.walk_nodes) {
      for (NodeId u : q.nodes) jq.rpe_ids.push_back(store.get_rpe_id(u, x));
    }
    out.push_back(std::move(jq));
  }
  return out;
}

}  // namespace reference

}  // namespace walkjoin
