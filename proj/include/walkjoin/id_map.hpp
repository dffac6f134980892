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
#include <unordered_map>
#include <vector>

#include "walkjoin/types.hpp"

namespace walkjoin {

/// Dense id <-> original id mapping. An empty map means ids are already dense.
class IdMap {
 public:
  IdMap() = default;
  explicit IdMap(std::vector<std::int64_t> originals);

  bool empty() const { return originals_.empty(); }
  std::size_t size() const { return originals_.size(); }
  const std::vector<std::int64_t>& originals() const { return originals_; }

  std::int64_t original(NodeId u) const { return originals_.empty() ? u : originals_[u]; }
  /// Dense id of `original` within [0, num_nodes), or nullopt.
  std::optional<NodeId> dense(std::int64_t original, NodeId num_nodes) const;

  bool operator==(const IdMap& other) const { return originals_ == other.originals_; }

 private:
  std::vector<std::int64_t> originals_;
  std::unordered_map<std::int64_t, NodeId> reverse_;
};

}  // namespace walkjoin
