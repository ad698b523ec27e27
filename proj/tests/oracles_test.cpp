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

#include "kparam/oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "brute.hpp"
#include "corpus.hpp"
#include "kparam/constructions.hpp"

namespace kparam {
namespace {

const Problem kUndirectedProblems[] = {kMVC, kMaxIS, kMDS, kMFVS, kMaxM, kMEDS};

TEST(OraclesTest, ProblemNamesRoundTrip) {
  for (Problem p : {kMVC, kMaxIS, kMDS, kMFVS, kMaxM, kMEDS, kMFES}) {
    EXPECT_EQ(Problem::parse(p.name()), p);
  }
  EXPECT_FALSE(Problem::parse("MaxCut").has_value());
}

TEST(OraclesTest, PetersenOptima) {
  const Graph g = make_petersen();
  EXPECT_EQ(opt_value(g, kMVC), 6u);
  EXPECT_EQ(opt_value(g, kMaxIS), 4u);
  EXPECT_EQ(opt_value(g, kMDS), 3u);
  EXPECT_EQ(opt_value(g, kMaxM), 5u);
  EXPECT_EQ(opt_value(g, kMFVS), 3u);
  EXPECT_EQ(opt_value(g, kMEDS), brute::opt(g, kMEDS));
}

TEST(OraclesTest, SmallFamilies) {
  EXPECT_EQ(opt_value(make_cycle(5), kMVC), 3u);
  EXPECT_EQ(opt_value(make_cycle(6), kMVC), 3u);
  EXPECT_EQ(opt_value(make_star(5), kMVC), 1u);
  EXPECT_EQ(opt_value(make_clique(3), kMaxM), 1u);
  EXPECT_EQ(opt_value(make_path(60), kMDS), 20u);
  EXPECT_EQ(opt_value(make_cycle(7), kMFVS), 1u);
  EXPECT_EQ(opt_value(make_path(7), kMFVS), 0u);
  EXPECT_EQ(opt_value(GraphBuilder().add_node(0).build(), kMVC), 0u);
}

TEST(OraclesTest, DirectednessIsChecked) {
  const Graph d = Graph::from_edges(true, {}, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(opt_value(d, kMFES), 1u);
  EXPECT_EQ(opt_value(d, kMFVS), 1u);
  EXPECT_THROW(opt_value(d, kMVC), OracleError);
  EXPECT_THROW(opt_value(make_cycle(3), kMFES), OracleError);
}

TEST(OraclesTest, FeasibilityRejectsForeignElements) {
  const Graph g = make_path(3);
  EXPECT_FALSE(is_feasible(g, Solution::of_vertices(kMVC, {1, 9})));
  EXPECT_FALSE(is_feasible(g, Solution::of_edges(kMaxM, {{0, 2}})));
  EXPECT_TRUE(is_feasible(g, Solution::of_vertices(kMVC, {1})));
  EXPECT_FALSE(is_feasible(g, Solution::of_vertices(kMVC, {0})));
}

// Oracle optimum equals subset enumeration on every graph with n <= 6 and
// on seeded random graphs up to n = 10.
TEST(OraclesTest, OptimaMatchBruteForceOnAllSmallGraphs) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const Graph& g : corpus::all_graphs(n)) {
      for (Problem p : kUndirectedProblems) {
        if (brute::universe(g, p) > 15) continue;
        const Solution s = opt_solution(g, p);
        ASSERT_EQ(s.size(), brute::opt(g, p)) << p.name() << " n=" << n;
        ASSERT_TRUE(brute::feasible(g, p, brute::solution_mask(g, s))) << p.name();
      }
    }
  }
}

TEST(OraclesTest, OptimaMatchBruteForceOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 5 + seed % 6;
    const Graph g = make_random(n, 0.35, seed);
    for (Problem p : kUndirectedProblems) {
      if (brute::universe(g, p) > 18) continue;
      ASSERT_EQ(opt_value(g, p), brute::opt(g, p)) << p.name() << " seed=" << seed;
    }
  }
}

TEST(OraclesTest, DirectedOptimaMatchBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 6);
    std::vector<Edge> arcs;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = 0; b < n; ++b) {
        if (a != b && unit_double(rng) < 0.3) arcs.push_back({a, b});
      }
    }
    if (arcs.size() > 18) arcs.resize(18);
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    const Graph g = Graph::from_edges(true, nodes, arcs);
    for (Problem p : {kMFES, kMFVS}) {
      const Solution s = opt_solution(g, p);
      ASSERT_EQ(s.size(), brute::opt(g, p)) << p.name() << " trial=" << trial;
      ASSERT_TRUE(is_feasible(g, s));
    }
  }
}

// is_feasible agrees with the independent predicate on random subsets.
TEST(OraclesTest, FeasibilityAgreesWithBrutePredicate) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = make_random(7, 0.4, seed);
    for (Problem p : kUndirectedProblems) {
      const std::size_t u = brute::universe(g, p);
      for (int t = 0; t < 30; ++t) {
        const brute::Mask m = u == 0 ? 0 : rng() & ((brute::Mask{1} << u) - 1);
        Solution s{p, {}, {}};
        for (std::size_t i = 0; i < u; ++i) {
          if (!((m >> i) & 1U)) continue;
          if (p.shape() == Shape::kVertexSet) {
            s.vertices.push_back(g.id(i));
          } else {
            s.edges.push_back(g.edges()[i]);
          }
        }
        ASSERT_EQ(is_feasible(g, s), brute::feasible(g, p, m)) << p.name();
      }
    }
  }
}

TEST(OraclesTest, VertexCoverWithinBudget) {
  const Graph g = make_cycle(7);
  EXPECT_FALSE(vertex_cover_within(g, 3).has_value());
  const auto c = vertex_cover_within(g, 4);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->size(), 4u);
  EXPECT_TRUE(is_feasible(g, Solution::of_vertices(kMVC, *c)));
}

TEST(OraclesTest, LargeCliqueCoverIsFast) {
  const Graph g = make_clique(64);
  EXPECT_EQ(opt_value(g, kMVC), 63u);
  EXPECT_FALSE(vertex_cover_within(g, 62).has_value());
}

// Reference sets on G_{2,15}: feasible, of the characterized sizes, and
// optimal according to the oracle.
TEST(OraclesTest, PathStarReferenceSets) {
  const PathStar ps = make_path_star(2, 15);
  const ReferenceSets ref = opt_reference_sets(ps.labeling);
  const std::pair<const Solution*, const char*> sets[] = {
      {&ref.mvc, "MVC"}, {&ref.maxm, "MaxM"}, {&ref.maxis, "MaxIS"}, {&ref.mds, "MDS"}, {&ref.meds, "MEDS"}};
  for (auto [s, name] : sets) {
    EXPECT_TRUE(is_feasible(ps.graph, *s)) << name;
    EXPECT_EQ(s->size(), ps.meta.opt_sizes.at(name)) << name;
    EXPECT_EQ(opt_value(ps.graph, s->problem), s->size()) << name;
  }
  EXPECT_EQ(ref.mvc.size(), 16u);
  EXPECT_EQ(ref.mds.size(), 11u);
}

}  // namespace
}  // namespace kparam
