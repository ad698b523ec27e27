// Copyright 2026 The kparam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kparam/graph.hpp"

#include <gtest/gtest.h>

namespace kparam {
namespace {

TEST(GraphTest, FromEdgesNormalizesAndSorts) {
  const Graph g = Graph::from_edges(false, {}, {{3, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.edges().front(), (Edge{1, 2}));
  EXPECT_EQ(g.edges().back(), (Edge{2, 3}));
  EXPECT_TRUE(g.has_edge(3, 2));
}

TEST(GraphTest, RejectsSelfLoopsAndParallelEdges) {
  EXPECT_THROW(Graph::from_edges(false, {}, {{1, 1}}), GraphError);
  EXPECT_THROW(Graph::from_edges(false, {}, {{1, 2}, {2, 1}}), GraphError);
  EXPECT_THROW(Graph::from_edges(true, {}, {{1, 2}, {1, 2}}), GraphError);
  EXPECT_THROW(Graph::from_edges(false, {}, {{0, kMaxNodeId + 1}}), GraphError);
}

TEST(GraphTest, AntiparallelArcsShareALink) {
  const Graph g = Graph::from_edges(true, {}, {{1, 2}, {2, 1}, {2, 3}});
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.degree(g.index(2)), 2u);
  EXPECT_EQ(g.out_neighbors(g.index(2)).size(), 2u);
  EXPECT_EQ(g.in_neighbors(g.index(3)).size(), 1u);
}

TEST(GraphTest, IsolatedNodesAreKept) {
  const Graph g = GraphBuilder().add_node(7).add_edge(1, 2).build();
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_FALSE(is_connected(g));
  EXPECT_THROW(diameter(g), GraphError);
}

TEST(GraphTest, StandardFamilies) {
  EXPECT_EQ(make_path(5).num_edges(), 4u);
  EXPECT_EQ(diameter(make_path(5)), 4u);
  EXPECT_EQ(diameter(make_cycle(22)), 11u);
  EXPECT_EQ(make_star(5).num_nodes(), 6u);
  EXPECT_EQ(make_star(5).max_degree(), 5u);
  EXPECT_EQ(make_clique(4).num_edges(), 6u);
  EXPECT_EQ(make_petersen().num_edges(), 15u);
  EXPECT_EQ(diameter(make_petersen()), 2u);
  EXPECT_THROW(make_cycle(2), GraphError);
}

TEST(GraphTest, RandomConnectedIsConnectedAndSeeded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = make_random_connected(12, 0.2, seed);
    EXPECT_EQ(g.num_nodes(), 12u);
    EXPECT_TRUE(is_connected(g));
    EXPECT_EQ(g, make_random_connected(12, 0.2, seed));
  }
  EXPECT_NE(make_random_connected(12, 0.2, 1), make_random_connected(12, 0.2, 2));
}

TEST(GraphTest, RelabelAndInducedSubgraph) {
  const Graph p = make_path(3);
  const Graph q = relabel(p, {{0, 3}, {1, 1}, {2, 2}});
  EXPECT_TRUE(q.has_edge(3, 1));
  EXPECT_TRUE(q.has_edge(1, 2));
  const Graph h = induced_subgraph(make_clique(5), [](NodeId v) { return v % 2 == 0; });
  EXPECT_EQ(h.num_nodes(), 3u);
  EXPECT_EQ(h.num_edges(), 3u);
}

// Index order equals identifier order, and adjacency lists are sorted.
TEST(GraphTest, AdjacencyIsSortedByIdentifier) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = make_random_connected(15, 0.3, seed);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const auto nb = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      if (v > 0) EXPECT_LT(g.id(v - 1), g.id(v));
    }
  }
}

}  // namespace
}  // namespace kparam
