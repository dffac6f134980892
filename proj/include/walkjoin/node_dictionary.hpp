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

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "walkjoin/types.hpp"

namespace walkjoin {

inline std::uint32_t hash_node(NodeId x) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) *
                                     0x9E3779B97F4A7C15ull) >>
                                    32);
}

/// Open-addressing capacity (power of two) for `size` keys at load <= 3/4.
inline std::size_t dictionary_capacity(std::size_t size) {
  return std::bit_ceil(size + size / 3 + 1);
}

/**
 * Reusable open-addressing map NodeId -> dense local index, cleared in O(1)
 * by bumping a generation stamp. One per worker thread.
 */
class ScratchIndex {
 public:
  explicit ScratchIndex(std::size_t max_keys)
      : mask_(dictionary_capacity(max_keys) - 1),
        keys_(mask_ + 1),
        values_(mask_ + 1),
        stamps_(mask_ + 1, 0) {}

  void clear() {
    if (++generation_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      generation_ = 1;
    }
    size_ = 0;
  }

  /// Returns (local index, inserted). New keys get the next index.
  std::pair<std::uint32_t, bool> insert(NodeId x) {
    std::size_t slot = hash_node(x) & mask_;
    while (stamps_[slot] == generation_) {
      if (keys_[slot] == x) return {values_[slot], false};
      slot = (slot + 1) & mask_;
    }
    stamps_[slot] = generation_;
    keys_[slot] = x;
    values_[slot] = size_;
    return {size_++, true};
  }

  std::uint32_t size() const { return size_; }

 private:
  std::size_t mask_;
  std::vector<NodeId> keys_;
  std::vector<std::uint32_t> values_;
  std::vector<std::uint32_t> stamps_;
  std::uint32_t generation_ = 1;
  std::uint32_t size_ = 0;
};

/**
 * Per-node dictionaries x -> RPE-ID packed into shared arrays.
 *
 * Node u owns entries [offsets[u], offsets[u+1]) of keys/ids (in insertion
 * order) and a private linear-probing slot table of power-of-two size. Slots
 * hold the local entry index, or kEmpty.
 */
class DictionaryArena {
 public:
  static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

  DictionaryArena() = default;

  /// Takes ownership of the packed entries and builds every slot table.
  static DictionaryArena build(std::vector<std::uint64_t> offsets, std::vector<NodeId> keys,
                               std::vector<RpeId> ids, int threads);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t size(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::size_t total_entries() const { return keys_.size(); }
  std::size_t total_slots() const { return slots_.size(); }

  std::span<const NodeId> keys(NodeId u) const {
    return {keys_.data() + offsets_[u], size(u)};
  }
  std::span<const RpeId> ids(NodeId u) const { return {ids_.data() + offsets_[u], size(u)}; }

  /// RPE-ID of x in u's dictionary, or kZeroRpeId when absent.
  RpeId find(NodeId u, NodeId x) const {
    const std::uint64_t base = slot_offsets_[u];
    const std::uint64_t mask = slot_offsets_[u + 1] - base - 1;
    const NodeId* keys = keys_.data() + offsets_[u];
    std::uint64_t slot = hash_node(x) & mask;
    for (;;) {
      const std::uint32_t local = slots_[base + slot];
      if (local == kEmpty) return kZeroRpeId;
      if (keys[local] == x) return ids_[offsets_[u] + local];
      slot = (slot + 1) & mask;
    }
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> keys_;
  std::vector<RpeId> ids_;
  std::vector<std::uint64_t> slot_offsets_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace walkjoin
