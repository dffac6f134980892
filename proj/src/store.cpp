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

#include "walkjoin/store.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "walkjoin/binary_io.hpp"
#include "walkjoin/rng.hpp"

namespace walkjoin {

RpeTable::RpeTable(std::size_t width, std::vector<RpeCount> data)
    : width_(width), data_(std::move(data)) {
  if (width_ == 0 || data_.size() % width_ != 0) throw InvalidArgument("RPE table shape mismatch");
}

RpeId RpeTable::push(std::span<const RpeCount> counts) {
  const auto id = static_cast<RpeId>(size());
  data_.insert(data_.end(), counts.begin(), counts.end());
  return id;
}

namespace {

std::uint64_t hash_counts(std::span<const RpeCount> counts) {
  std::uint64_t h = 0x243F6A8885A308D3ull;
  for (RpeCount c : counts) h = splitmix64(h ^ c);
  return h;
}

/// Open-addressing set of table rows; slots hold RPE-ID + 1 (0 = empty).
class RpeInterner {
 public:
  explicit RpeInterner(std::size_t width) : table_(width), slots_(1024, 0) {
    insert_new(table_.row(kZeroRpeId), kZeroRpeId);
  }

  RpeId intern(std::span<const RpeCount> counts) {
    std::size_t mask = slots_.size() - 1;
    std::size_t slot = hash_counts(counts) & mask;
    while (slots_[slot] != 0) {
      const RpeId id = slots_[slot] - 1;
      auto row = table_.row(id);
      if (std::equal(row.begin(), row.end(), counts.begin())) return id;
      slot = (slot + 1) & mask;
    }
    const RpeId id = table_.push(counts);
    slots_[slot] = id + 1;
    if (2 * table_.size() > slots_.size()) grow();
    return id;
  }

  RpeTable take() { return std::move(table_); }

 private:
  void insert_new(std::span<const RpeCount> counts, RpeId id) {
    std::size_t mask = slots_.size() - 1;
    std::size_t slot = hash_counts(counts) & mask;
    while (slots_[slot] != 0) slot = (slot + 1) & mask;
    slots_[slot] = id + 1;
  }

  void grow() {
    slots_.assign(slots_.size() * 2, 0);
    for (RpeId id = 0; id < table_.size(); ++id) insert_new(table_.row(id), id);
  }

  RpeTable table_;
  std::vector<std::uint32_t> slots_;
};

}  // namespace

DedupResult dedup_and_reindex(std::span<const RawRpeMap> raw, std::size_t width) {
  if (width == 0) throw InvalidArgument("RPE width must be >= 1");
  RpeInterner interner(width);
  DedupResult out;
  out.ids.resize(raw.size());
  for (std::size_t u = 0; u < raw.size(); ++u) {
    const RawRpeMap& map = raw[u];
    if (map.width != width && !map.nodes.empty()) throw InvalidArgument("raw RPE width mismatch");
    out.ids[u].resize(map.nodes.size());
    for (std::size_t k = 0; k < map.nodes.size(); ++k) out.ids[u][k] = interner.intern(map.row(k));
  }
  out.table = interner.take();
  return out;
}

DictionaryArena DictionaryArena::build(std::vector<std::uint64_t> offsets,
                                       std::vector<NodeId> keys, std::vector<RpeId> ids,
                                       int threads) {
  if (offsets.empty() || offsets.back() != keys.size() || keys.size() != ids.size()) {
    throw InvalidArgument("dictionary arena shape mismatch");
  }
  DictionaryArena arena;
  const std::size_t n = offsets.size() - 1;
  arena.slot_offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) {
    arena.slot_offsets_[u + 1] =
        arena.slot_offsets_[u] + dictionary_capacity(offsets[u + 1] - offsets[u]);
  }
  try {
    arena.slots_.assign(arena.slot_offsets_[n], kEmpty);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate " + std::to_string(arena.slot_offsets_[n] * 4) +
                        " bytes for dictionary slots");
  }
  arena.offsets_ = std::move(offsets);
  arena.keys_ = std::move(keys);
  arena.ids_ = std::move(ids);

#pragma omp parallel for num_threads(std::max(1, threads)) schedule(dynamic, 512)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(n); ++u) {
    const std::uint64_t base = arena.slot_offsets_[u];
    const std::uint64_t mask = arena.slot_offsets_[u + 1] - base - 1;
    const std::uint64_t first = arena.offsets_[u];
    const std::uint64_t count = arena.offsets_[u + 1] - first;
    for (std::uint32_t k = 0; k < count; ++k) {
      std::uint64_t slot = hash_node(arena.keys_[first + k]) & mask;
      while (arena.slots_[base + slot] != kEmpty) slot = (slot + 1) & mask;
      arena.slots_[base + slot] = k;
    }
  }
  return arena;
}

SubgraphStore::SubgraphStore(StoreParams params, std::vector<NodeId> walks, DictionaryArena dicts,
                             RpeTable table, IdMap id_map)
    : params_(params),
      walks_(std::move(walks)),
      dicts_(std::move(dicts)),
      table_(std::move(table)),
      id_map_(std::move(id_map)) {
  if (walks_.size() != dicts_.num_nodes() * params_.shape.slots()) {
    throw InvalidArgument("walk buffer does not match node count and walk shape");
  }
  if (table_.width() != params_.shape.walk_len()) throw InvalidArgument("RPE table width mismatch");
  if (!id_map_.empty() && id_map_.size() != dicts_.num_nodes()) {
    throw InvalidArgument("id map does not match node count");
  }
}

NodeEntry SubgraphStore::entry(NodeId u) const {
  if (!valid_node(u)) throw InvalidArgument("anchor " + std::to_string(u) + " is not in the store");
  return {walks(u), dicts_.keys(u), dicts_.ids(u)};
}

RpeId SubgraphStore::get_rpe_id(NodeId u, NodeId x) const {
  if (!valid_node(u)) throw InvalidArgument("anchor " + std::to_string(u) + " is not in the store");
  return dicts_.find(u, x);
}

StoreStats SubgraphStore::stats() const {
  StoreStats s;
  s.num_nodes = dicts_.num_nodes();
  s.num_walks = params_.shape.num_walks;
  s.steps = params_.shape.steps;
  s.table_size = table_.size();
  s.walk_slots = walks_.size();
  s.dict_entries = dicts_.total_entries();
  s.dict_slots = dicts_.total_slots();
  s.walk_bytes = walks_.size() * sizeof(NodeId);
  s.table_bytes = table_.data().size() * sizeof(RpeCount);
  s.dict_bytes = s.dict_entries * (sizeof(NodeId) + sizeof(RpeId)) + s.dict_slots * 4 +
                 (s.num_nodes + 1) * 2 * sizeof(std::uint64_t);
  s.undeduplicated_table_bytes = s.dict_entries * table_.width() * sizeof(RpeCount);
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (RpeId id : entry(u).ids) {
      const auto row = table_.row(id);
      if (std::accumulate(row.begin(), row.end(), std::uint64_t{0}) == 1) ++s.singleton_entries;
    }
  }
  return s;
}

void write_store(const SubgraphStore& store, std::ostream& out) {
  BinaryWriter w(out);
  w.bytes(kStoreMagic, 4);
  w.put<std::uint32_t>(kStoreVersion);
  w.put<std::uint32_t>(store.shape().num_walks);
  w.put<std::uint32_t>(store.shape().steps);
  w.put<std::uint64_t>(store.params().seed);
  w.put<std::uint64_t>(static_cast<std::uint64_t>(store.num_nodes()));
  const auto& originals = store.id_map().originals();
  w.put<std::uint64_t>(originals.size());
  w.put_array<std::int64_t>(originals);
  w.put<std::uint64_t>(store.table().size());
  w.put_array<RpeCount>(store.table().data());
  for (NodeId u = 0; u < store.num_nodes(); ++u) {
    NodeEntry e = store.entry(u);
    w.put_array<NodeId>(e.walks);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(e.keys.size()));
    w.put_array<NodeId>(e.keys);
    w.put_array<RpeId>(e.ids);
  }
  w.check();
}

SubgraphStore read_store(std::istream& in) {
  BinaryReader r(in);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (!std::equal(magic, magic + 4, kStoreMagic)) throw FormatError("not a store file (bad magic)");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kStoreVersion) {
    throw FormatError("unsupported store version " + std::to_string(version) + " (expected " +
                      std::to_string(kStoreVersion) + ")");
  }
  StoreParams params;
  params.shape.num_walks = r.get<std::uint32_t>("M");
  params.shape.steps = r.get<std::uint32_t>("m");
  params.seed = r.get<std::uint64_t>("seed");
  if (params.shape.num_walks == 0 || params.shape.steps == 0) throw FormatError("corrupt walk shape");
  const auto n = r.get<std::uint64_t>("node count");
  if (n > static_cast<std::uint64_t>(std::numeric_limits<NodeId>::max())) {
    throw FormatError("corrupt node count");
  }
  const auto id_count = r.get<std::uint64_t>("id map length");
  if (id_count != 0 && id_count != n) throw FormatError("id map length does not match node count");
  auto originals = r.get_array<std::int64_t>(id_count, "id map");

  const std::size_t width = params.shape.walk_len();
  const auto table_rows = r.get<std::uint64_t>("table size");
  if (table_rows == 0) throw FormatError("RPE table lacks the zero row");
  RpeTable table(width, r.get_array<RpeCount>(table_rows * width, "RPE table"));
  for (RpeCount c : table.row(kZeroRpeId)) {
    if (c != 0) throw FormatError("RPE table row 0 is not the zero vector");
  }

  const std::size_t slots = params.shape.slots();
  std::vector<NodeId> walks;
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> keys;
  std::vector<RpeId> ids;
  walks.reserve(std::min<std::uint64_t>(n * slots, std::size_t{1} << 26));
  for (std::uint64_t u = 0; u < n; ++u) {
    auto block = r.get_array<NodeId>(slots, "walks");
    for (NodeId x : block) {
      if (x < 0 || static_cast<std::uint64_t>(x) >= n) throw FormatError("walk node out of range");
    }
    walks.insert(walks.end(), block.begin(), block.end());
    const auto size = r.get<std::uint32_t>("dictionary size");
    if (size > slots) throw FormatError("dictionary larger than its walk set");
    auto k = r.get_array<NodeId>(size, "dictionary keys");
    auto v = r.get_array<RpeId>(size, "dictionary ids");
    for (RpeId id : v) {
      if (id >= table.size()) throw FormatError("RPE-ID beyond table size");
    }
    keys.insert(keys.end(), k.begin(), k.end());
    ids.insert(ids.end(), v.begin(), v.end());
    offsets.push_back(keys.size());
  }
  if (!r.at_eof()) throw FormatError("trailing bytes after store body");
  auto dicts = DictionaryArena::build(std::move(offsets), std::move(keys), std::move(ids),
                                      omp_get_max_threads());
  return SubgraphStore(params, std::move(walks), std::move(dicts), std::move(table),
                       IdMap(std::move(originals)));
}

std::string serialize_store(const SubgraphStore& store) {
  std::ostringstream out(std::ios::binary);
  write_store(store, out);
  return std::move(out).str();
}

void save_store(const SubgraphStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_store(store, out);
}

SubgraphStore load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_store(in);
}

}  // namespace walkjoin
