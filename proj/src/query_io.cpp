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

#include "walkjoin/query_io.hpp"

#include <charconv>
#include <sstream>
#include <string>

namespace walkjoin {

std::vector<Query> read_queries(std::istream& in, const IdMap& ids, NodeId num_nodes, bool labeled) {
  std::vector<Query> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    Query q;
    std::size_t first = 0;
    if (labeled) {
      if (tokens[0] != "0" && tokens[0] != "1") {
        throw ParseError(line_no, "label must be 0 or 1, got '" + tokens[0] + "'");
      }
      q.label = tokens[0] == "1" ? 1 : 0;
      first = 1;
    }
    for (std::size_t i = first; i < tokens.size(); ++i) {
      std::int64_t id = 0;
      const std::string& tok = tokens[i];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || id < 0) {
        throw ParseError(line_no, "bad node id '" + tok + "'");
      }
      auto dense = ids.dense(id, num_nodes);
      if (!dense) throw ParseError(line_no, "node " + tok + " is not in the graph");
      q.nodes.push_back(*dense);
    }
    if (q.nodes.size() < 2) throw ParseError(line_no, "query needs at least 2 nodes");
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (q.nodes[i] == q.nodes[j]) throw ParseError(line_no, "query repeats node " + tokens[first + i]);
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

void write_queries(std::ostream& out, const IdMap& ids, const std::vector<Query>& queries) {
  for (const Query& q : queries) {
    if (q.label) out << *q.label << ' ';
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      if (i) out << ' ';
      out << ids.original(q.nodes[i]);
    }
    out << '\n';
  }
}

std::vector<RankedGroup> group_ranked(const std::vector<Query>& labeled) {
  std::vector<RankedGroup> groups;
  for (const Query& q : labeled) {
    if (!q.label) throw InvalidArgument("ranking input must be labelled");
    if (*q.label == 1) {
      groups.push_back({q, {}});
    } else {
      if (groups.empty()) throw InvalidArgument("negative query before the first positive");
      groups.back().negatives.push_back(q);
    }
  }
  return groups;
}

std::vector<Query> flatten_ranked(const std::vector<Query>& positives,
                                  const std::vector<std::vector<Query>>& negatives) {
  std::vector<Query> out;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    out.push_back(positives[i]);
    out.back().label = 1;
    if (i < negatives.size()) {
      for (Query n : negatives[i]) {
        n.label = 0;
        out.push_back(std::move(n));
      }
    }
  }
  return out;
}

}  // namespace walkjoin
