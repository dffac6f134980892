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

#include "walkjoin/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>

#include "walkjoin/rng.hpp"

namespace walkjoin {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

/// Splits on whitespace and parses each token as a non-negative integer.
std::vector<std::int64_t> parse_ids(std::string_view line, std::size_t line_no) {
  std::vector<std::int64_t> ids;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    std::string_view tok = line.substr(i, j - i);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
      throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(tok) + "'");
    }
    ids.push_back(value);
    i = j;
  }
  return ids;
}

/// First-appearance dense remapping of external ids.
class IdRemapper {
 public:
  NodeId map(std::int64_t original) {
    auto [it, inserted] = index_.try_emplace(original, static_cast<NodeId>(originals_.size()));
    if (inserted) originals_.push_back(original);
    return it->second;
  }
  NodeId size() const { return static_cast<NodeId>(originals_.size()); }
  std::vector<std::int64_t> take() { return std::move(originals_); }

 private:
  std::unordered_map<std::int64_t, NodeId> index_;
  std::vector<std::int64_t> originals_;
};

}  // namespace

Graph Graph::from_edges(NodeId num_nodes, std::span<const Edge> edges, bool undirected) {
  if (num_nodes < 0) throw InvalidArgument("negative node count");
  Graph g;
  g.num_nodes_ = num_nodes;
  g.undirected_ = undirected;

  std::vector<Edge> arcs;
  arcs.reserve(undirected ? edges.size() * 2 : edges.size());
  std::size_t raw_edges = 0;
  for (auto [u, v] : edges) {
    if (!g.valid_node(u) || !g.valid_node(v)) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") outside [0, " + std::to_string(num_nodes) + ")");
    }
    if (u == v) {
      ++g.report_.self_loops;
      continue;
    }
    ++raw_edges;
    arcs.emplace_back(u, v);
    if (undirected) arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  const std::size_t kept = undirected ? arcs.size() / 2 : arcs.size();
  g.report_.duplicates = raw_edges - kept;

  g.idxptr_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  g.indices_.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    ++g.idxptr_[arcs[i].first + 1];
    g.indices_[i] = arcs[i].second;
  }
  for (NodeId u = 0; u < num_nodes; ++u) g.idxptr_[u + 1] += g.idxptr_[u];
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!valid_node(u) || !valid_node(v)) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes_; ++u) {
    for (NodeId v : neighbors(u)) {
      if (!undirected_ || u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

IdMap::IdMap(std::vector<std::int64_t> originals) : originals_(std::move(originals)) {
  reverse_.reserve(originals_.size());
  for (std::size_t i = 0; i < originals_.size(); ++i) {
    if (!reverse_.emplace(originals_[i], static_cast<NodeId>(i)).second) {
      throw InvalidArgument("id map contains duplicate original id " +
                            std::to_string(originals_[i]));
    }
  }
}

std::optional<NodeId> IdMap::dense(std::int64_t original, NodeId num_nodes) const {
  if (originals_.empty()) {
    if (original >= 0 && original < num_nodes) return static_cast<NodeId>(original);
    return std::nullopt;
  }
  auto it = reverse_.find(original);
  if (it == reverse_.end()) return std::nullopt;
  return it->second;
}

void Graph::set_id_map(IdMap id_map) {
  if (!id_map.empty() && id_map.size() != static_cast<std::size_t>(num_nodes_)) {
    throw InvalidArgument("id map length does not match node count");
  }
  id_map_ = std::move(id_map);
}

void Graph::set_node_features(NodeFeatures features) {
  if (features.values.size() != features.dim * static_cast<std::size_t>(num_nodes_)) {
    throw InvalidArgument("feature matrix shape does not match node count");
  }
  features_ = std::move(features);
}

void validate_query(const Graph& g, const Query& q, std::size_t min_arity) {
  if (q.nodes.size() < min_arity) {
    throw InvalidArgument("query has " + std::to_string(q.nodes.size()) + " nodes, need at least " +
                          std::to_string(min_arity));
  }
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    if (!g.valid_node(q.nodes[i])) {
      throw InvalidArgument("query node " + std::to_string(q.nodes[i]) + " is not in the graph");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (q.nodes[i] == q.nodes[j]) {
        throw InvalidArgument("query repeats node " + std::to_string(q.nodes[i]));
      }
    }
  }
  if (q.label && *q.label != 0 && *q.label != 1) throw InvalidArgument("label must be 0 or 1");
}

Graph load_edge_list(std::istream& in, bool undirected) {
  IdRemapper remap;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto ids = parse_ids(strip_comment(line), line_no);
    if (ids.empty()) continue;
    if (ids.size() != 2) {
      throw ParseError(line_no, "expected 'u v', got " + std::to_string(ids.size()) + " fields");
    }
    NodeId u = remap.map(ids[0]);
    NodeId v = remap.map(ids[1]);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError(line_no, "edge list is empty");
  Graph g = Graph::from_edges(remap.size(), edges, undirected);
  g.set_id_map(IdMap(remap.take()));
  return g;
}

Graph project_hyperedges(NodeId num_nodes, std::span<const std::vector<NodeId>> hyperedges) {
  std::vector<Edge> edges;
  for (const auto& h : hyperedges) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = i + 1; j < h.size(); ++j) edges.emplace_back(h[i], h[j]);
    }
  }
  return Graph::from_edges(num_nodes, edges, true);
}

Graph project_hyperedges(std::istream& in) {
  IdRemapper remap;
  std::vector<std::vector<NodeId>> hyperedges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto ids = parse_ids(strip_comment(line), line_no);
    if (ids.empty()) continue;
    std::vector<std::int64_t> distinct;
    for (std::int64_t id : ids) {
      if (std::find(distinct.begin(), distinct.end(), id) == distinct.end()) distinct.push_back(id);
    }
    if (distinct.size() < 2) throw ParseError(line_no, "hyperedge needs at least 2 distinct nodes");
    std::vector<NodeId> h;
    for (std::int64_t id : distinct) h.push_back(remap.map(id));
    hyperedges.push_back(std::move(h));
  }
  if (hyperedges.empty()) throw ParseError(line_no, "hyperedge file is empty");
  Graph g = project_hyperedges(remap.size(), hyperedges);
  g.set_id_map(IdMap(remap.take()));
  return g;
}

namespace {

Graph rebuild_like(const Graph& g, std::span<const Edge> edges) {
  Graph out = Graph::from_edges(g.num_nodes(), edges, g.undirected());
  out.set_id_map(g.id_map());
  if (g.node_features()) out.set_node_features(*g.node_features());
  return out;
}

}  // namespace

Graph remove_edges(const Graph& g, std::span<const Edge> edges) {
  std::unordered_set<std::uint64_t> removed;
  removed.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (!g.has_edge(u, v)) {
      throw InvalidArgument("cannot remove edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            "): not in graph");
    }
    removed.insert(pair_key(u, v));
    if (g.undirected()) removed.insert(pair_key(v, u));
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (!removed.contains(pair_key(e.first, e.second))) kept.push_back(e);
  }
  return rebuild_like(g, kept);
}

QuerySplit split_link_queries(const Graph& g, double train_frac, std::size_t k_neg,
                              std::uint64_t seed, double query_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw InvalidArgument("train_frac must be in (0, 1)");
  if (!(query_frac > 0.0 && query_frac <= 1.0)) throw InvalidArgument("query_frac must be in (0, 1]");
  if (k_neg < 1) throw InvalidArgument("k_neg must be >= 1");

  std::vector<Edge> edges = g.edges();
  Rng rng(stage_seed(seed, "split"));
  std::shuffle(edges.begin(), edges.end(), rng);

  const std::size_t n_edges = edges.size();
  const auto n_train = std::min<std::size_t>(
      n_edges, static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(n_edges))));
  const std::size_t n_valid = (n_edges - n_train) / 2;
  const auto n_query = std::min<std::size_t>(
      n_train, static_cast<std::size_t>(std::llround(query_frac * static_cast<double>(n_train))));

  const double n = g.num_nodes();
  const double all_pairs = n * (n - 1) / 2.0;
  const std::size_t n_heldout = n_edges - n_train;
  if (n_heldout > 0 && all_pairs - static_cast<double>(n_edges) < 1.0) {
    throw InvalidArgument("graph has no non-edges to draw negatives from");
  }

  QuerySplit split;
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < n_train; ++i) {
    if (i < n_query) {
      split.train_pos.push_back({{edges[i].first, edges[i].second}, 1});
    } else {
      kept.push_back(edges[i]);
    }
  }

  const std::size_t budget = 1000 * std::max<std::size_t>(1, n_heldout * k_neg);
  std::size_t attempts = 0;
  auto draw_negatives = [&](std::vector<Query>& negs) {
    while (negs.size() < k_neg) {
      if (++attempts > budget) {
        throw InvalidArgument("graph too small to supply " + std::to_string(k_neg) +
                              " negatives per positive");
      }
      auto u = static_cast<NodeId>(uniform_index(rng, g.num_nodes()));
      auto v = static_cast<NodeId>(uniform_index(rng, g.num_nodes()));
      if (u == v || g.has_edge(u, v)) continue;
      negs.push_back({{u, v}, 0});
    }
  };
  for (std::size_t i = n_train; i < n_edges; ++i) {
    Query pos{{edges[i].first, edges[i].second}, 1};
    std::vector<Query> negs;
    draw_negatives(negs);
    if (i < n_train + n_valid) {
      split.valid_pos.push_back(std::move(pos));
      split.valid_neg.push_back(std::move(negs));
    } else {
      split.test_pos.push_back(std::move(pos));
      split.test_neg.push_back(std::move(negs));
    }
  }
  split.train_graph = rebuild_like(g, kept);
  return split;
}

Graph generate_sbm(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                   std::uint64_t seed) {
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw InvalidArgument("SBM probabilities must lie in [0, 1]");
  }
  const std::size_t n = blocks * nodes_per_block;
  if (n > static_cast<std::size_t>(std::numeric_limits<NodeId>::max())) {
    throw InvalidArgument("SBM too large for 32-bit node ids");
  }
  Rng rng(stage_seed(seed, "sbm"));
  std::vector<Edge> edges;
  const auto s = static_cast<std::int64_t>(nodes_per_block);

  // Geometric skipping over the pair space of one block pair.
  auto skip = [&](double p) {
    double r = uniform_real(rng);
    return 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / std::log1p(-p)));
  };
  for (std::size_t a = 0; a < blocks; ++a) {
    const auto base_a = static_cast<NodeId>(a * nodes_per_block);
    // within block: lower triangle (v, w) with w < v
    if (p_in >= 1.0) {
      for (std::int64_t v = 1; v < s; ++v)
        for (std::int64_t w = 0; w < v; ++w) edges.emplace_back(base_a + w, base_a + v);
    } else if (p_in > 0.0) {
      std::int64_t v = 1, w = -1;
      while (v < s) {
        w += skip(p_in);
        while (w >= v && v < s) {
          w -= v;
          ++v;
        }
        if (v < s) edges.emplace_back(base_a + w, base_a + v);
      }
    }
    for (std::size_t b = a + 1; b < blocks; ++b) {
      const auto base_b = static_cast<NodeId>(b * nodes_per_block);
      const std::int64_t total = s * s;
      if (p_out >= 1.0) {
        for (std::int64_t k = 0; k < total; ++k)
          edges.emplace_back(base_a + k / s, base_b + k % s);
      } else if (p_out > 0.0) {
        for (std::int64_t k = skip(p_out) - 1; k < total; k += skip(p_out)) {
          edges.emplace_back(base_a + k / s, base_b + k % s);
        }
      }
    }
  }
  return Graph::from_edges(static_cast<NodeId>(n), edges, true);
}

std::vector<std::vector<NodeId>> generate_block_hyperedges(std::size_t blocks,
                                                           std::size_t nodes_per_block,
                                                           std::size_t count, std::size_t size,
                                                           std::uint64_t seed) {
  if (size < 2 || size > nodes_per_block) throw InvalidArgument("hyperedge size out of range");
  Rng rng(stage_seed(seed, "hyperedges"));
  std::vector<std::vector<NodeId>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto base = static_cast<NodeId>(uniform_index(rng, blocks) * nodes_per_block);
    std::vector<NodeId> h;
    while (h.size() < size) {
      auto v = base + static_cast<NodeId>(uniform_index(rng, nodes_per_block));
      if (std::find(h.begin(), h.end(), v) == h.end()) h.push_back(v);
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<NodeId> common_neighbors(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) return {};
  auto first = g.neighbors(nodes[0]);
  std::vector<NodeId> acc(first.begin(), first.end());
  for (std::size_t i = 1; i < nodes.size() && !acc.empty(); ++i) {
    auto nb = g.neighbors(nodes[i]);
    std::vector<NodeId> next;
    std::set_intersection(acc.begin(), acc.end(), nb.begin(), nb.end(), std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

std::vector<Query> make_common_neighbor_queries(const Graph& g, std::size_t arity,
                                                std::size_t per_class, std::uint64_t seed) {
  if (arity < 2) throw InvalidArgument("arity must be >= 2");
  std::vector<NodeId> active, centers;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (g.degree(u) >= 1) active.push_back(u);
    if (g.degree(u) >= arity) centers.push_back(u);
  }
  if (active.size() < arity || centers.empty()) {
    throw InvalidArgument("graph too sparse for a common-neighbor task of this arity");
  }
  Rng rng(stage_seed(seed, "common-neighbor-task"));
  std::set<std::vector<NodeId>> seen;
  auto fresh = [&](const std::vector<NodeId>& nodes) {
    std::vector<NodeId> key = nodes;
    std::sort(key.begin(), key.end());
    return seen.insert(std::move(key)).second;
  };

  const std::size_t budget = 1000 * per_class + 1000;
  std::vector<Query> pos, neg;
  std::size_t attempts = 0;
  while (pos.size() < per_class) {
    if (++attempts > budget) throw InvalidArgument("cannot draw enough positive queries");
    NodeId center = centers[uniform_index(rng, centers.size())];
    auto nb = g.neighbors(center);
    std::vector<NodeId> nodes;
    while (nodes.size() < arity) {
      NodeId v = nb[uniform_index(rng, nb.size())];
      if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
    }
    if (fresh(nodes)) pos.push_back({std::move(nodes), 1});
  }
  attempts = 0;
  while (neg.size() < per_class) {
    if (++attempts > budget) throw InvalidArgument("cannot draw enough negative queries");
    std::vector<NodeId> nodes;
    while (nodes.size() < arity) {
      NodeId v = active[uniform_index(rng, active.size())];
      if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
    }
    if (!common_neighbors(g, nodes).empty()) continue;
    if (fresh(nodes)) neg.push_back({std::move(nodes), 0});
  }
  std::vector<Query> out;
  out.reserve(2 * per_class);
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back(std::move(pos[i]));
    out.push_back(std::move(neg[i]));
  }
  return out;
}

}  // namespace walkjoin
