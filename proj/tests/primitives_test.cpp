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

#include "kparam/primitives.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "corpus.hpp"

namespace kparam {
namespace {

RunConfig congest() { return RunConfig{Model::congest(8), 1'000'000, 0}; }

// Sequential BFS from the minimum identifier.
std::vector<std::size_t> bfs_from_min(const Graph& g) { return bfs_distances(g, 0); }

TEST(PrimitivesTest, DiscoverLearnsNeighborIds) {
  const Graph g = make_random_connected(9, 0.3, 5);
  Session s(g, congest());
  const auto ids = discover(s);
  EXPECT_EQ(s.stats().rounds_used, 1u);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto nb = g.neighbors(v);
    ASSERT_EQ(ids[v].size(), nb.size());
    for (std::size_t p = 0; p < nb.size(); ++p) EXPECT_EQ(ids[v][p], g.id(nb[p]));
  }
}

TEST(PrimitivesTest, ProbeExamples) {
  {
    Session s(make_path(5), congest());
    for (auto v : diameter_probe(s, 4)) EXPECT_EQ(v, DiameterVerdict::kSmall);
    EXPECT_EQ(s.stats().rounds_used, 13u);
  }
  {
    Session s(make_cycle(22), congest());
    for (auto v : diameter_probe(s, 4)) EXPECT_EQ(v, DiameterVerdict::kLarge);
  }
  {
    Session s(make_path(7), congest());
    const auto v = diameter_probe(s, 4);
    EXPECT_TRUE(std::all_of(v.begin(), v.end(), [&](auto x) { return x == v[0]; }));
  }
}

// Exactly 3k+1 rounds; SMALL when D <= k, LARGE when D >= 2k+1, unanimous
// in between.
TEST(PrimitivesTest, ProbeContractOnCorpus) {
  for (const Graph& g : corpus::connected_corpus(8, 6)) {
    const std::size_t d = diameter(g);
    for (std::size_t k = 0; k <= g.num_nodes(); ++k) {
      Session s(g, congest());
      const auto v = diameter_probe(s, k);
      ASSERT_EQ(s.stats().rounds_used, 3 * k + 1);
      ASSERT_TRUE(std::all_of(v.begin(), v.end(), [&](auto x) { return x == v[0]; }));
      if (d <= k) { ASSERT_EQ(v[0], DiameterVerdict::kSmall); }
      if (d >= 2 * k + 1) { ASSERT_EQ(v[0], DiameterVerdict::kLarge); }
    }
  }
}

TEST(PrimitivesTest, BfsExamples) {
  {
    Session s(make_star(5), congest());
    const auto t = leader_and_bfs(s, 2);
    for (const auto& x : t) {
      EXPECT_EQ(x.root, 0u);
      EXPECT_LE(x.depth, 1u);
    }
    EXPECT_EQ(t[0].children.size(), 5u);
  }
  {
    const Graph g = GraphBuilder().add_edge(3, 1).add_edge(1, 2).build();
    Session s(g, congest());
    const auto t = leader_and_bfs(s, 2);
    EXPECT_EQ(t[g.index(1)].depth, 0u);
    EXPECT_EQ(t[g.index(3)].depth, 1u);
    EXPECT_EQ(t[g.index(2)].depth, 1u);
    EXPECT_TRUE(t[g.index(1)].is_root());
    EXPECT_LE(s.stats().rounds_used, 2 * 2 + 2u);
  }
}

TEST(PrimitivesTest, BfsMatchesSequentialOracle) {
  for (const Graph& g : corpus::connected_corpus(10, 8)) {
    const std::size_t d = diameter(g);
    Session s(g, congest());
    const auto t = leader_and_bfs(s, d);
    const auto dist = bfs_from_min(g);
    std::size_t roots = 0;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      ASSERT_EQ(t[v].root, g.id(0));
      ASSERT_EQ(t[v].depth, dist[v]);
      if (t[v].is_root()) {
        ++roots;
        continue;
      }
      // Parent is the smallest-id neighbor one layer up.
      const std::size_t parent = g.neighbors(v)[t[v].parent];
      ASSERT_EQ(dist[parent] + 1, dist[v]);
      for (std::size_t w : g.neighbors(v)) {
        if (dist[w] + 1 == dist[v]) {
          ASSERT_GE(w, parent);
        }
      }
      // The parent lists v as a child.
      const auto& pc = t[parent].children;
      const auto back = g.neighbors(parent);
      const std::size_t port = static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), v) - back.begin());
      ASSERT_NE(std::find(pc.begin(), pc.end(), port), pc.end());
    }
    ASSERT_EQ(roots, 1u);
    ASSERT_LE(s.stats().rounds_used, 2 * d + 2);
  }
}

PerNode<TreeInfo> tree_of(Session& s) { return leader_and_bfs(s, diameter(s.graph())); }

TEST(PrimitivesTest, UpcastStarLeaves) {
  Session s(make_star(4), congest());
  const auto t = tree_of(s);
  const std::size_t before = s.stats().rounds_used;
  PerNode<std::vector<std::uint64_t>> items(5);
  for (std::size_t v = 1; v <= 4; ++v) items[v] = {v};
  const auto got = pipelined_upcast(s, "up", t, items, 1, 4);
  auto root = got[0];
  std::sort(root.begin(), root.end());
  EXPECT_EQ(root, (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_LE(s.stats().rounds_used - before, 3u);
}

TEST(PrimitivesTest, UpcastEmpty) {
  Session s(make_path(6), congest());
  const auto t = tree_of(s);
  const auto got = pipelined_upcast(s, "up", t, PerNode<std::vector<std::uint64_t>>(6), 2, 3);
  EXPECT_TRUE(got[0].empty());
}

// Every record arrives exactly once within depth + ceil(records/capacity) + 1.
TEST(PrimitivesTest, UpcastPipelinesWithinBound) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = make_random_connected(30, 0.08, seed);
    Session s(g, congest());
    const auto t = tree_of(s);
    std::size_t depth = 0;
    for (const auto& x : t) depth = std::max(depth, x.depth);
    PerNode<std::vector<std::uint64_t>> items(g.num_nodes());
    std::vector<std::uint64_t> expected;
    std::mt19937_64 rng(seed);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const std::size_t c = rng() % 6;
      for (std::size_t i = 0; i < c; ++i) {
        items[v].push_back(v);
        items[v].push_back(i);
        expected.push_back(v * 100 + i);
      }
    }
    const std::size_t before = s.stats().rounds_used;
    const unsigned width = s.network().id_bits;
    const auto got = pipelined_upcast(s, "up", t, items, 2, width);
    std::vector<std::uint64_t> seen;
    for (const auto& r : split_records(got[0], 2)) seen.push_back(r[0] * 100 + r[1]);
    std::sort(seen.begin(), seen.end());
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(seen, expected);
    const std::size_t cap = items_per_message(s.network().context(0, s.config()).bandwidth, width, 2) / 2;
    const std::size_t records = expected.size();
    ASSERT_LE(s.stats().rounds_used - before, depth + (records + cap - 1) / cap + 1);
  }
}

TEST(PrimitivesTest, BroadcastExamples) {
  {
    Session s(make_star(4), congest());
    const auto t = tree_of(s);
    PerNode<std::vector<std::uint64_t>> payload(5);
    payload[0] = {7};
    const std::size_t before = s.stats().rounds_used;
    const auto got = broadcast(s, "down", t, payload, 1, 3);
    EXPECT_EQ(s.stats().rounds_used - before, 1u);
    for (const auto& x : got) EXPECT_EQ(x, std::vector<std::uint64_t>{7});
  }
  {
    Session s(make_path(5), congest());
    const auto t = tree_of(s);
    const std::size_t before = s.stats().rounds_used;
    const auto got = broadcast(s, "down", t, PerNode<std::vector<std::uint64_t>>(5), 1, 3);
    EXPECT_EQ(s.stats().rounds_used - before, 4u);  // depth only, no data rounds
    for (const auto& x : got) EXPECT_TRUE(x.empty());
  }
  {
    // 40 records with capacity 1 over depth 4: at most depth + 40 rounds.
    // The tree comes from a beta = 8 run; the broadcast runs with a 9-bit
    // budget, which fits one 2-bit item per message.
    Session setup(make_path(5), congest());
    const auto t = tree_of(setup);
    Session s(make_path(5), RunConfig{Model::congest(3), 100000, 0});
    PerNode<std::vector<std::uint64_t>> payload(5);
    for (std::uint64_t i = 0; i < 40; ++i) payload[0].push_back(i % 4);
    const std::size_t before = s.stats().rounds_used;
    const auto got = broadcast(s, "down", t, payload, 1, 2);
    EXPECT_LE(s.stats().rounds_used - before, 4u + 40u);
    for (const auto& x : got) EXPECT_EQ(x, payload[0]);
  }
}

TEST(PrimitivesTest, ThresholdCountExamples) {
  const Graph g = make_random_connected(10, 0.2, 1);
  auto verdict = [&](std::size_t marked, std::uint64_t thr) {
    Session s(g, congest());
    const auto t = tree_of(s);
    PerNode<std::uint64_t> c(10, 0);
    for (std::size_t v = 0; v < marked; ++v) c[v] = 1;
    const auto e = threshold_count(s, "count", t, c, thr);
    for (char x : e) EXPECT_EQ(x, e[0]);
    return e[0] != 0;
  };
  EXPECT_FALSE(verdict(3, 3));
  EXPECT_TRUE(verdict(4, 3));
  EXPECT_FALSE(verdict(0, 0));
  EXPECT_TRUE(verdict(1, 0));
}

TEST(PrimitivesTest, ThresholdCountSeveralCountersAndCappedTotals) {
  const Graph g = make_path(8);
  Session s(g, congest());
  const auto t = tree_of(s);
  PerNode<std::vector<std::uint64_t>> c(8, {1, 2});
  const auto r = threshold_count(s, "count", t, c, {7, 20});
  EXPECT_EQ(r.capped_totals, (std::vector<std::uint64_t>{8, 16}));
  for (const auto& e : r.exceeds) EXPECT_EQ(e, (std::vector<char>{1, 0}));
}

TEST(PrimitivesTest, CollectGraph) {
  {
    Session s(make_clique(3), congest());
    const auto t = tree_of(s);
    const auto ids = discover(s);
    EXPECT_EQ(collect_graph(s, t, ids, [](std::size_t, std::size_t) { return true; }).size(), 3u);
    EXPECT_TRUE(collect_graph(s, t, ids, [](std::size_t, std::size_t) { return false; }).empty());
  }
  const Graph g = make_random_connected(12, 0.3, 9);
  Session s(g, congest());
  const auto t = tree_of(s);
  const auto ids = discover(s);
  const auto m = greedy_matching(s, 12);
  // Keep edges between matched nodes: each node's own flag and its port flag.
  const auto got = collect_graph(s, t, ids, [&](std::size_t v, std::size_t p) {
    return m.mate[v] != kNoPort && m.nbr_matched[v][p];
  });
  std::vector<Edge> expected;
  for (const Edge& e : g.edges()) {
    if (m.mate[g.index(e.u)] != kNoPort && m.mate[g.index(e.v)] != kNoPort) expected.push_back(e);
  }
  EXPECT_EQ(got, expected);
}

// Local-minimum matching: valid, grows by at least one edge per iteration
// until maximal, and takes two rounds per iteration.
TEST(PrimitivesTest, GreedyMatchingProgress) {
  for (const Graph& g : corpus::connected_corpus(9, 5)) {
    std::size_t prev = 0;
    for (std::size_t it = 0; it <= g.num_nodes(); ++it) {
      Session s(g, congest());
      const auto m = greedy_matching(s, it);
      ASSERT_EQ(s.stats().rounds_used, 2 * it);
      std::set<Edge> edges;
      for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        if (m.mate[v] == kNoPort) continue;
        const std::size_t w = g.neighbors(v)[m.mate[v]];
        ASSERT_EQ(g.neighbors(w)[m.mate[w]], v);
        edges.insert(normalized({g.id(v), g.id(w)}));
      }
      bool maximal = true;
      for (const Edge& e : g.edges()) {
        if (m.mate[g.index(e.u)] == kNoPort && m.mate[g.index(e.v)] == kNoPort) maximal = false;
      }
      if (it > 0 && !maximal) { ASSERT_GE(edges.size(), prev + 1); }
      if (it >= g.num_nodes() / 2 + 1) { ASSERT_TRUE(maximal); }
      prev = edges.size();
    }
  }
}

TEST(PrimitivesTest, GreedyIndependentSet) {
  for (const Graph& g : corpus::connected_corpus(8, 4)) {
    Session s(g, congest());
    const auto ids = discover(s);
    const auto in = greedy_independent_set(s, g.num_nodes(), ids);
    for (const Edge& e : g.edges()) ASSERT_FALSE(in[g.index(e.u)] && in[g.index(e.v)]);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      bool dominated = in[v];
      for (std::size_t w : g.neighbors(v)) dominated = dominated || in[w];
      ASSERT_TRUE(dominated);
    }
  }
}

// Identifier-width records never exceed the budget at beta = 8.
TEST(PrimitivesTest, NoBandwidthErrorsAtBetaEight) {
  const Graph g = make_random_connected(200, 0.02, 4);
  Session s(g, congest());
  const auto t = leader_and_bfs(s, diameter(g));
  const auto ids = discover(s);
  EXPECT_NO_THROW(collect_graph(s, t, ids, [](std::size_t, std::size_t) { return true; }));
  EXPECT_LE(s.stats().peak_message_bits, *Model::congest(8).bandwidth(200));
}

}  // namespace
}  // namespace kparam
