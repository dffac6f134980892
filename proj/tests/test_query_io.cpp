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

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "walkjoin/query_io.hpp"

namespace walkjoin {
namespace {

Graph remapped() {
  std::istringstream in("10 20\n20 30\n30 40\n");
  return load_edge_list(in);
}

std::vector<Query> read(const std::string& text, const Graph& g, bool labeled) {
  std::istringstream in(text);
  return read_queries(in, g, labeled);
}

TEST(ReadQueries, LabeledAndRemapped) {
  Graph g = remapped();
  auto qs = read("1 10 20\n0 40 10 30\n# comment\n\n", g, true);
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0], (Query{{0, 1}, 1}));
  EXPECT_EQ(qs[1], (Query{{3, 0, 2}, 0}));
}

TEST(ReadQueries, Unlabeled) {
  Graph g = remapped();
  auto qs = read("20 30\n", g, false);
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_FALSE(qs[0].label.has_value());
}

TEST(ReadQueries, Errors) {
  Graph g = remapped();
  EXPECT_THROW(read("2 10 20\n", g, true), ParseError);
  EXPECT_THROW(read("1 10 99\n", g, true), ParseError);
  EXPECT_THROW(read("1 10\n", g, true), ParseError);
  EXPECT_THROW(read("1 10 10\n", g, true), ParseError);
  EXPECT_THROW(read("10 x\n", g, false), ParseError);
  try {
    read("1 10 20\n1 20 77\n", g, true);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(WriteQueries, RoundTrip) {
  Graph g = remapped();
  std::vector<Query> qs{{{0, 3}, 1}, {{2, 1}, 0}};
  std::ostringstream out;
  write_queries(out, g.id_map(), qs);
  EXPECT_EQ(out.str(), "1 10 40\n0 30 20\n");
  EXPECT_EQ(read(out.str(), g, true), qs);
}

TEST(Ranked, GroupAndFlatten) {
  std::vector<Query> flat{{{0, 1}, 1}, {{0, 2}, 0}, {{0, 3}, 0}, {{1, 2}, 1}, {{1, 3}, 0}};
  auto groups = group_ranked(flat);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].negatives.size(), 2u);
  EXPECT_EQ(groups[1].positive.nodes, (std::vector<NodeId>{1, 2}));
  std::vector<Query> pos;
  std::vector<std::vector<Query>> neg;
  for (auto& g : groups) {
    pos.push_back(g.positive);
    neg.push_back(g.negatives);
  }
  EXPECT_EQ(flatten_ranked(pos, neg), flat);
  EXPECT_THROW(group_ranked({{{0, 2}, 0}}), InvalidArgument);
  EXPECT_THROW(group_ranked({{{0, 2}, {}}}), InvalidArgument);
}

}  // namespace
}  // namespace walkjoin
