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

#include <istream>
#include <ostream>
#include <vector>

#include "walkjoin/graph.hpp"

namespace walkjoin {

/**
 * Reads a query file: one query per line, "label u v [w ...]" when `labeled`,
 * otherwise "u v [w ...]". Ids are original ids and are mapped through
 * `ids`. '#' starts a comment.
 */
std::vector<Query> read_queries(std::istream& in, const IdMap& ids, NodeId num_nodes, bool labeled);

inline std::vector<Query> read_queries(std::istream& in, const Graph& g, bool labeled) {
  return read_queries(in, g.id_map(), g.num_nodes(), labeled);
}

/// Writes queries in the format read_queries() accepts, using original ids.
void write_queries(std::ostream& out, const IdMap& ids, const std::vector<Query>& queries);

/// A positive query and the negatives it is ranked against.
struct RankedGroup {
  Query positive;
  std::vector<Query> negatives;
};

/**
 * Groups a labelled sequence for ranking: every positive owns the negatives
 * that follow it up to the next positive. Negatives before the first
 * positive are an error.
 */
std::vector<RankedGroup> group_ranked(const std::vector<Query>& labeled);

/// Inverse of group_ranked().
std::vector<Query> flatten_ranked(const std::vector<Query>& positives,
                                  const std::vector<std::vector<Query>>& negatives);

}  // namespace walkjoin
