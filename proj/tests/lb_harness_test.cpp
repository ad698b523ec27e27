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

#include "kparam/lb_harness.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace kparam {
namespace {

CandidateProgram empty_program() {
  return {"empty", [](Session& s) { return std::vector<NodeOutput>(s.size(), {Verdict::kAccept, false, {}}); }};
}

// Claims every hub neighbor: the node itself for MFVS, its hub arc for MFES.
CandidateProgram spokes_program(std::size_t k) {
  return {"spokes", [k](Session& s) {
            std::vector<NodeOutput> outs(s.size(), {Verdict::kAccept, false, {}});
            for (std::size_t v = 0; v < s.size(); ++v) {
              const NodeId id = s.graph().id(v);
              if (id < 1 || id > k) continue;
              outs[v].in_solution = true;
              outs[v].solution_neighbors = {0};
            }
            return outs;
          }};
}

TEST(LbHarnessTest, ViewRoutesAgree) {
  std::vector<Graph> graphs = {make_random_connected(18, 0.2, 3), make_path_star(3, 7).graph,
                               make_cycle_star(2, 2, 11, true).graph, make_cycle_star_tree(2, 1, 12, false)};
  for (const Graph& g : graphs) {
    for (std::size_t x = 0; x <= 4; ++x) {
      const auto flooded = views_by_flooding(g, x);
      for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        EXPECT_EQ(serialize_view(flooded[v]), serialize_view(view_by_bfs(g, g.id(v), x)));
      }
    }
  }
}

TEST(LbHarnessTest, ViewRadiusZeroAndOne) {
  const Graph g = make_path(3);
  EXPECT_EQ(serialize_view(view_by_bfs(g, 1, 0)), "root=1;nodes=1;edges=");
  EXPECT_EQ(serialize_view(view_by_bfs(g, 1, 1)), "root=1;nodes=0,1,2;edges=0-1,1-2");
  EXPECT_EQ(serialize_view(view_by_bfs(g, 0, 1)), "root=0;nodes=0,1;edges=0-1");
}

TEST(LbHarnessTest, MiddleNodeViewSurvivesReversal) {
  for (std::size_t r : {2, 3}) {
    for (std::size_t x : {6, 12}) {
      EXPECT_TRUE(reversal_views_identical(r, x, Segment::kA));
      EXPECT_TRUE(reversal_views_identical(r, x, Segment::kB));
    }
  }
  // The node holding (2x+4)i+x, checked directly.
  const std::size_t x = 6, i = 1;
  const PathStarLabeling base = default_path_star_labeling(2, 2 * x + 3);
  const NodeId id = (2 * x + 4) * i + x;
  const Graph g0 = build_path_star(base, false);
  const Graph g1 = build_path_star(reverse_segment(base, i, Segment::kA), false);
  EXPECT_EQ(view_string(g0, id, x), view_string(g1, id, x));
  // One more hop reaches the center on one side only.
  EXPECT_NE(view_string(g0, id, x + 1), view_string(g1, id, x + 1));
}

TEST(LbHarnessTest, TruncatedGreedyIsSuboptimalSomewhere) {
  const auto rep = reversal_attack(truncated_greedy_mvc(12), kMVC, 12, 12, AttackMode::kExhaustive);
  ASSERT_FALSE(rep.disqualified);
  EXPECT_EQ(rep.inputs_tried, 4096u);
  EXPECT_TRUE(rep.views_identical);
  EXPECT_GE(rep.suboptimal_paths, 1u);
  EXPECT_GE(rep.max_additive_error, 1);
  for (const auto& in : rep.inputs) {
    EXPECT_TRUE(in.feasible);
    EXPECT_LE(in.rounds, 12u);
    EXPECT_GE(in.additive_error, 0);
  }
}

TEST(LbHarnessTest, PerPathModeRecordsEveryPath) {
  const auto rep = reversal_attack(truncated_greedy_mvc(6), kMVC, 4, 6, AttackMode::kPerPath);
  ASSERT_FALSE(rep.disqualified);
  EXPECT_EQ(rep.paths.size(), 4u);
  EXPECT_EQ(rep.inputs.size(), 5u);
  EXPECT_GE(rep.suboptimal_paths, 1u);
}

TEST(LbHarnessTest, FullCollectionHasNoError) {
  for (Problem p : {kMVC, kMaxM, kMaxIS, kMDS, kMEDS}) {
    SCOPED_TRACE(p.name());
    const auto prog = collect_and_solve(p);
    const PathStarLabeling base = default_path_star_labeling(2, 15);
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
      const auto sc = score_labeling(prog, p, reverse_segments(base, mask, segment_for(p)), 1000);
      ASSERT_FALSE(sc.disqualified);
      EXPECT_TRUE(sc.input.feasible);
      EXPECT_EQ(sc.input.additive_error, 0);
      for (auto e : sc.path_error) EXPECT_EQ(e, 0);
    }
  }
}

TEST(LbHarnessTest, OverBudgetProgramIsDisqualified) {
  const auto rep = reversal_attack(collect_and_solve(kMVC), kMVC, 2, 6, AttackMode::kPerPath);
  ASSERT_TRUE(rep.disqualified);
  EXPECT_EQ(rep.inputs_tried, 1u);
}

TEST(LbHarnessTest, MoreRoundsNeverHurtCollection) {
  const PathStarLabeling lab = reverse_segments(default_path_star_labeling(3, 15), 5, Segment::kA);
  const std::size_t ell = lab.ell;
  std::int64_t previous = std::numeric_limits<std::int64_t>::max();
  bool reached_zero = false;
  for (std::size_t cap : {ell / 2, ell, 2 * ell, 4 * ell, 8 * ell, 16 * ell}) {
    const auto sc = score_labeling(collect_and_solve(kMVC), kMVC, lab, cap);
    const std::int64_t err = sc.disqualified ? std::numeric_limits<std::int64_t>::max() : sc.input.additive_error;
    EXPECT_LE(err, previous);
    previous = err;
    reached_zero = reached_zero || err == 0;
  }
  EXPECT_TRUE(reached_zero);
}

TEST(LbHarnessTest, SamplerIsUniformOnOnePath) {
  auto sampler = random_reversal_distribution(1, 6, kMVC, 42);
  std::size_t ones = 0;
  const std::size_t draws = 10000;
  for (std::size_t i = 0; i < draws; ++i) ones += sampler.next().mask;
  EXPECT_NEAR(static_cast<double>(ones) / draws, 0.5, 0.02);
}

TEST(LbHarnessTest, SamplerIsSeedDeterministic) {
  auto a = random_reversal_distribution(5, 6, kMDS, 7);
  auto b = random_reversal_distribution(5, 6, kMDS, 7);
  for (int i = 0; i < 50; ++i) {
    const auto da = a.next();
    const auto db = b.next();
    EXPECT_EQ(da.mask, db.mask);
    EXPECT_EQ(da.labeling, db.labeling);
  }
}

TEST(LbHarnessTest, SampledLabelingsAreBijections) {
  auto sampler = random_reversal_distribution(4, 6, kMDS, 3);
  for (int i = 0; i < 20; ++i) {
    const auto d = sampler.next();
    std::vector<NodeId> ids{d.labeling.center};
    for (const auto& path : d.labeling.paths) ids.insert(ids.end(), path.begin(), path.end());
    std::sort(ids.begin(), ids.end());
    std::vector<NodeId> want(ids.size());
    std::iota(want.begin(), want.end(), NodeId{0});
    EXPECT_EQ(ids, want);
    // B reversal keeps the last position fixed.
    for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(d.labeling.at(p, 15), sampler.base().at(p, 15));
  }
}

TEST(LbHarnessTest, CycleTreeEmptyProgram) {
  for (Problem p : {kMFVS, kMFES}) {
    const auto rep = cycle_vs_tree_attack(empty_program(), p, 3, 2, 13);
    ASSERT_FALSE(rep.disqualified);
    EXPECT_EQ(rep.inputs[0].additive_error, 3);
    EXPECT_EQ(rep.inputs[1].additive_error, 0);
    EXPECT_FALSE(rep.inputs[0].feasible);
    EXPECT_TRUE(rep.inputs[1].feasible);
  }
}

TEST(LbHarnessTest, CycleTreeSpokesProgram) {
  for (Problem p : {kMFVS, kMFES}) {
    const auto rep = cycle_vs_tree_attack(spokes_program(3), p, 3, 2, 13);
    ASSERT_FALSE(rep.disqualified);
    EXPECT_EQ(rep.inputs[0].additive_error, 0);
    EXPECT_EQ(rep.inputs[1].additive_error, 3);
    EXPECT_TRUE(rep.inputs[0].feasible);
    EXPECT_EQ(rep.inputs[0].solution_size, 3u);
    EXPECT_EQ(rep.max_additive_error, 3);
  }
}

TEST(LbHarnessTest, CycleTreeViewsMatchWithinCap) {
  EXPECT_TRUE(cycle_vs_tree_attack(empty_program(), kMFVS, 2, 2, 13).views_identical);
  EXPECT_TRUE(cycle_vs_tree_attack(empty_program(), kMFES, 2, 2, 13).views_identical);
  // Past the cap the cut becomes visible.
  EXPECT_FALSE(cycle_vs_tree_attack(empty_program(), kMFVS, 2, 2, 13, 8).views_identical);
}

TEST(LbHarnessTest, CycleTreeCapViolation) {
  const auto rep = cycle_vs_tree_attack(truncated_greedy_mvc(40), kMFVS, 2, 1, 13);
  EXPECT_TRUE(rep.disqualified);
}

TEST(LbHarnessTest, RejectsBadParameters) {
  EXPECT_THROW(reversal_attack(empty_program(), kMVC, 13, 6, AttackMode::kExhaustive), std::invalid_argument);
  EXPECT_THROW(reversal_attack(empty_program(), kMVC, 2, 5, AttackMode::kPerPath), std::invalid_argument);
  EXPECT_THROW(cycle_vs_tree_attack(empty_program(), kMVC, 2, 2, 13), std::invalid_argument);
}

}  // namespace
}  // namespace kparam
