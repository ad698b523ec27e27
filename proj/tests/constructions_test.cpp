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

#include "kparam/constructions.hpp"

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "kparam/oracles.hpp"

namespace kparam {
namespace {

TEST(ConstructionsTest, PathStarMetaMatchesDirectComputation) {
  for (std::size_t r = 2; r <= 5; ++r) {
    for (std::size_t ell : {3, 4, 7, 10, 15}) {
      const PathStar ps = make_path_star(r, ell);
      EXPECT_EQ(ps.graph.num_nodes(), ps.meta.node_count);
      EXPECT_EQ(ps.meta.node_count, r * (ell + 1) + 1);
      EXPECT_EQ(diameter(ps.graph), *ps.meta.diameter);
      EXPECT_EQ(ps.graph.num_edges(), r * (ell + 1));
    }
  }
  EXPECT_EQ(make_path_star(3, 4).graph.num_nodes(), 16u);
  EXPECT_THROW(make_path_star(1, 5), GraphError);
}

TEST(ConstructionsTest, BlockLabeling) {
  const PathStarLabeling lab = default_path_star_labeling(3, 15);
  EXPECT_EQ(lab.at(1, 6), 16u + 6u);
  EXPECT_EQ(lab.center, 48u);
}

TEST(ConstructionsTest, DirectedPathStarPointsAwayFromCenter) {
  const PathStar ps = make_directed_path_star(2, 4);
  EXPECT_TRUE(ps.graph.directed());
  EXPECT_TRUE(ps.graph.has_edge(ps.labeling.center, ps.labeling.at(0, 0)));
  EXPECT_FALSE(ps.graph.has_edge(ps.labeling.at(0, 0), ps.labeling.center));
  EXPECT_EQ(opt_value(ps.graph, kMFES), 0u);
}

TEST(ConstructionsTest, SegmentReversal) {
  const PathStarLabeling lab = default_path_star_labeling(2, 15);
  const PathStarLabeling a = reverse_segment(lab, 1, Segment::kA);
  // A_i has 2x+2 = 14 nodes; v_{i,j} takes the id (2x+4)i + 2x+1-j.
  for (std::size_t j = 0; j < 14; ++j) EXPECT_EQ(a.at(1, j), 16u + 13u - j);
  EXPECT_EQ(a.at(1, 14), lab.at(1, 14));
  EXPECT_EQ(a.paths[0], lab.paths[0]);
  const PathStarLabeling b = reverse_segment(lab, 0, Segment::kB);
  EXPECT_EQ(b.at(0, 0), 14u);
  EXPECT_EQ(b.at(0, 15), 15u);
  EXPECT_EQ(reverse_segment(a, 1, Segment::kA), lab);
  EXPECT_EQ(reverse_segments(lab, 0b11, Segment::kA), reverse_segment(a, 0, Segment::kA));
  // Reversal relabels but preserves the structure.
  EXPECT_EQ(build_path_star(a, false).num_edges(), build_path_star(lab, false).num_edges());
  EXPECT_EQ(diameter(build_path_star(a, false)), 32u);
}

TEST(ConstructionsTest, CycleStarSizesAndFeedbackOptimum) {
  for (std::size_t k : {1, 2, 3}) {
    for (std::size_t t : {1, 2}) {
      for (std::size_t d : {11, 13}) {
        if (k * t * d > 80) continue;
        const CycleStar u = make_cycle_star(k, t, d, false);
        EXPECT_EQ(u.graph.num_nodes(), k * (1 + d * t) + 1);
        EXPECT_EQ(u.graph.num_nodes(), u.meta.node_count);
        EXPECT_EQ(opt_value(u.graph, kMFVS), k);
        EXPECT_EQ(diameter(u.graph), *u.meta.diameter);
        const CycleStar dcs = make_cycle_star(k, t, d, true);
        EXPECT_EQ(opt_value(dcs.graph, kMFES), k);
        EXPECT_EQ(opt_value(make_cycle_star_tree(k, t, d, false), kMFVS), 0u);
        EXPECT_EQ(opt_value(make_cycle_star_tree(k, t, d, true), kMFES), 0u);
      }
    }
  }
  EXPECT_THROW(make_cycle_star(1, 1, 10, false), GraphError);
}

TEST(ConstructionsTest, CliqueWithTail) {
  const Graph g = make_clique_with_tail(4, 4);
  EXPECT_EQ(g.num_nodes(), 9u);
  EXPECT_EQ(g.num_edges(), 10u + 4u);
  EXPECT_EQ(diameter(g), 5u);
  EXPECT_EQ(opt_value(g, kMVC), 4u + 2u);
}

TEST(ConstructionsTest, ReductionsPreserveVertexCoverOnSmallGraphs) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const Graph& g : corpus::all_graphs(n)) {
      const std::size_t mvc = opt_value(g, kMVC);
      const MfvsReduction fv = reduce_mvc_to_mfvs(g);
      const auto fvs = min_feedback_vertex_set(fv.graph);
      EXPECT_EQ(fvs.size(), mvc);
      EXPECT_TRUE(is_feasible(g, Solution::of_vertices(kMVC, fv.back_map(fvs))));
      const MfesReduction fe = reduce_mvc_to_mfes(g);
      const auto fes = min_feedback_arc_set(fe.graph);
      EXPECT_EQ(fes.size(), mvc);
      const auto back = fe.back_map(fes);
      EXPECT_LE(back.size(), fes.size());
      EXPECT_TRUE(is_feasible(g, Solution::of_vertices(kMVC, back)));
    }
  }
}

TEST(ConstructionsTest, AttachmentArithmetic) {
  for (std::size_t n : {2, 5, 9}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph g = make_random_connected(7, 0.3, seed);
      const Attachment s = attach(g, make_star(n), g.id(0), 0);
      EXPECT_EQ(s.graph.num_nodes(), g.num_nodes() + n + 1);
      EXPECT_EQ(opt_value(s.graph, kMVC), opt_value(g, kMVC) + 1);
      const Attachment c = attach(g, make_clique(n), g.id(0), 0);
      EXPECT_EQ(opt_value(c.graph, kMaxIS), opt_value(g, kMaxIS) + 1);
    }
  }
  EXPECT_THROW(attach(make_path(3), make_path(3), 0, 0, false), GraphError);
  EXPECT_THROW(attach(make_path(3), make_path(3), 9, 0), GraphError);
}

}  // namespace
}  // namespace kparam
