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
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "walkjoin/id_map.hpp"
#include "walkjoin/node_dictionary.hpp"
#include "walkjoin/sampler.hpp"
#include "walkjoin/types.hpp"

namespace walkjoin {

/// Deduplicated RPE vectors of width m+1. Row 0 is always the zero vector.
class RpeTable {
 public:
  RpeTable() = default;
  explicit RpeTable(std::size_t width) : width_(width), data_(width, 0) {}
  RpeTable(std::size_t width, std::vector<RpeCount> data);

  std::size_t width() const { return width_; }
  std::size_t size() const { return width_ == 0 ? 0 : data_.size() / width_; }
  std::span<const RpeCount> row(RpeId id) const {
    return {data_.data() + static_cast<std::size_t>(id) * width_, width_};
  }
  const std::vector<RpeCount>& data() const { return data_; }

  /// Appends a row and returns its id (no duplicate check).
  RpeId push(std::span<const RpeCount> counts);

  bool operator==(const RpeTable&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<RpeCount> data_;
};

struct DedupResult {
  RpeTable table;
  /// ids[u][k] is the RPE-ID of raw[u].nodes[k].
  std::vector<std::vector<RpeId>> ids;
};

/**
 * Collapses equal RPE vectors across all anchors. Ids are assigned in
 * first-occurrence order scanning anchors by ascending id and each anchor's
 * nodes in first-appearance order; id 0 is the zero vector even if unused.
 */
DedupResult dedup_and_reindex(std::span<const RawRpeMap> raw, std::size_t width);

struct StoreParams {
  WalkShape shape;
  std::uint64_t seed = 0;
  bool operator==(const StoreParams& o) const {
    return shape.num_walks == o.shape.num_walks && shape.steps == o.shape.steps && seed == o.seed;
  }
};

/// Read-only view of one anchor's entry: its walk matrix and dictionary.
struct NodeEntry {
  std::span<const NodeId> walks;  // [M, m+1]
  std::span<const NodeId> keys;
  std::span<const RpeId> ids;
};

struct StoreStats {
  std::size_t num_nodes = 0;
  std::uint32_t num_walks = 0;
  std::uint32_t steps = 0;
  std::size_t table_size = 0;
  std::size_t walk_slots = 0;
  std::size_t dict_entries = 0;
  /// Entries (u, x) where x occurs exactly once across u's walks.
  std::size_t singleton_entries = 0;
  std::size_t dict_slots = 0;
  std::size_t walk_bytes = 0;
  std::size_t table_bytes = 0;
  std::size_t dict_bytes = 0;
  /// What a table without deduplication would hold: one row per dictionary entry.
  std::size_t undeduplicated_table_bytes = 0;
};

/**
 * Walk-based subgraph storage: per-anchor walk matrices, per-anchor
 * dictionaries node -> RPE-ID, and the shared deduplicated RPE table.
 * Written once during preprocessing, immutable afterwards.
 */
class SubgraphStore {
 public:
  SubgraphStore() = default;
  SubgraphStore(StoreParams params, std::vector<NodeId> walks, DictionaryArena dicts,
                RpeTable table, IdMap id_map);

  const StoreParams& params() const { return params_; }
  const WalkShape& shape() const { return params_.shape; }
  NodeId num_nodes() const { return static_cast<NodeId>(dicts_.num_nodes()); }
  bool valid_node(std::int64_t u) const { return u >= 0 && u < num_nodes(); }

  std::span<const NodeId> walks(NodeId u) const {
    const std::size_t slots = params_.shape.slots();
    return {walks_.data() + static_cast<std::size_t>(u) * slots, slots};
  }
  std::span<const NodeId> all_walks() const { return walks_; }
  NodeEntry entry(NodeId u) const;

  const DictionaryArena& dictionaries() const { return dicts_; }
  const RpeTable& table() const { return table_; }
  const IdMap& id_map() const { return id_map_; }

  /// RPE-ID of x relative to anchor u; kZeroRpeId when x is not reached. Throws on invalid u.
  RpeId get_rpe_id(NodeId u, NodeId x) const;
  /// Lookup without the anchor range check, for inner loops.
  RpeId rpe_id_unchecked(NodeId u, NodeId x) const { return dicts_.find(u, x); }

  StoreStats stats() const;

 private:
  StoreParams params_;
  std::vector<NodeId> walks_;
  DictionaryArena dicts_;
  RpeTable table_;
  IdMap id_map_;
};

inline constexpr char kStoreMagic[4] = {'S', 'U', 'R', 'L'};
inline constexpr std::uint32_t kStoreVersion = 1;

void write_store(const SubgraphStore& store, std::ostream& out);
SubgraphStore read_store(std::istream& in);
std::string serialize_store(const SubgraphStore& store);
void save_store(const SubgraphStore& store, const std::filesystem::path& path);
SubgraphStore load_store(const std::filesystem::path& path);

}  // namespace walkjoin
