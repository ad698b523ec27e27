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

#include "kparam/search.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "brute.hpp"
#include "corpus.hpp"

namespace kparam {
namespace {

SearchConfig config(Problem p, SearchMode m, Rational eps = Rational::of(1, 2)) {
  SearchConfig c;
  c.problem = p;
  c.mode = m;
  c.eps = eps;
  return c;
}

double ratio(Problem p, std::size_t size, std::size_t opt) {
  if (p.kind() == Kind::kMin) return opt == 0 ? (size == 0 ? 1.0 : 1e9) : static_cast<double>(size) / opt;
  return size == 0 ? (opt == 0 ? 1.0 : 1e9) : static_cast<double>(opt) / size;
}

void expect_valid(const Graph& g, Problem p, const SearchResult& r) {
  EXPECT_TRUE(brute::feasible(g, p, brute::solution_mask(g, r.solution)));
  EXPECT_LE(r.total_rounds, r.budget_sum);
}

TEST(SearchTest, ExactSevenCycle) {
  const auto r = solve(make_cycle(7), config(kMVC, SearchMode::kExact));
  EXPECT_EQ(r.solution.size(), 4u);
  EXPECT_EQ(r.visited_k(), (std::vector<std::size_t>{1, 2, 4, 3}));
  EXPECT_EQ(r.k_bar, 4u);
}

TEST(SearchTest, ExactSingleEdge) {
  for (Problem p : {kMVC, kMaxM}) {
    const auto r = solve(make_path(2), config(p, SearchMode::kExact));
    EXPECT_EQ(r.solution.size(), 1u);
  }
  const auto mvc = solve(make_path(2), config(kMVC, SearchMode::kExact));
  EXPECT_EQ(mvc.visited_k(), std::vector<std::size_t>{1});
}

TEST(SearchTest, OnePlusEpsPerfectMatching) {
  const Graph g = make_path(16);
  const auto r = solve(g, config(kMaxM, SearchMode::kOnePlusEps, Rational::of(9, 10)));
  EXPECT_GE(r.solution.size(), 5u);  // ceil(8 / 1.9)
  expect_valid(g, kMaxM, r);
}

TEST(SearchTest, TwoMinusEpsDisjointEdges) {
  const Graph g = make_path(8);
  const auto r = solve(g, config(kMVC, SearchMode::kTwoMinusEps));
  EXPECT_LE(r.solution.size(), 6u);
  expect_valid(g, kMVC, r);
}

TEST(SearchTest, IterationCounts) {
  // one_plus_eps with eps = 1/8 runs at most ceil(log2 8) + 1 binary steps.
  const Graph g = make_random_connected(14, 0.3, 4);
  const auto r = solve(g, config(kMVC, SearchMode::kOnePlusEps, Rational::of(1, 8)));
  std::size_t binary = 0;
  for (const auto& s : r.trace) binary += s.stage == "binary";
  EXPECT_LE(binary, 4u);
}

TEST(SearchTest, ModesOnCorpus) {
  const std::vector<std::pair<SearchMode, Rational>> modes = {
      {SearchMode::kExact, Rational::of(1, 2)},       {SearchMode::kOnePlusEps, Rational::of(1, 2)},
      {SearchMode::kTwoMinusEps, Rational::of(1, 2)}, {SearchMode::kTwoMinusEps, Rational::of(1, 4)},
      {SearchMode::kAdaptiveSqrt, Rational::of(1, 2)}, {SearchMode::kHybrid, Rational::of(1, 2)},
  };
  for (const Graph& g : corpus::connected_corpus(8, 6, 3)) {
    for (Problem p : {kMVC, kMaxM}) {
      const std::size_t opt = opt_value(g, p);
      for (const auto& [mode, eps] : modes) {
        SCOPED_TRACE(mode_name(mode) + " " + std::string(p.name()) + " n=" + std::to_string(g.num_nodes()));
        const auto r = solve(g, config(p, mode, eps));
        expect_valid(g, p, r);
        const double q = ratio(p, r.solution.size(), opt);
        switch (mode) {
          case SearchMode::kExact:
            EXPECT_EQ(r.solution.size(), opt);
            break;
          case SearchMode::kOnePlusEps:
            EXPECT_LE(q, 1.0 + eps.value() + 1e-9);
            break;
          case SearchMode::kTwoMinusEps:
            EXPECT_LE(q, 2.0 - eps.value() + 1e-9);
            break;
          case SearchMode::kAdaptiveSqrt:
            EXPECT_LE(q, 2.0 - 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(opt, 1))) + 1e-9);
            break;
          case SearchMode::kHybrid:
            EXPECT_LE(q, 2.0 + 1e-9);
            break;
        }
      }
    }
  }
}

TEST(SearchTest, DoublingInvariant) {
  for (const Graph& g : corpus::connected_corpus(7, 4, 8)) {
    for (Problem p : {kMVC, kMaxM}) {
      const auto r = solve(g, config(p, SearchMode::kExact));
      std::map<std::size_t, Verdict> seen;
      for (const auto& s : r.trace) {
        if (s.stage != "naive") seen[s.k] = s.verdict;
      }
      if (seen.empty()) continue;
      const Verdict stop = p == kMVC ? Verdict::kAccept : Verdict::kNoKSolution;
      ASSERT_TRUE(seen.count(r.k_bar));
      EXPECT_EQ(seen[r.k_bar], stop);
      if (r.k_bar > 1) {
        EXPECT_NE(seen.at(r.k_bar / 2), stop);
      }
    }
  }
}

TEST(SearchTest, NaiveFallbackWhenCheaper) {
  // A big clique: OPT = n - 1, so the doubling bound reaches n.
  const Graph g = make_clique(24);
  const auto r = solve(g, config(kMVC, SearchMode::kExact));
  EXPECT_EQ(r.trace.back().stage, "naive");
  EXPECT_EQ(r.solution.size(), 23u);
  expect_valid(g, kMVC, r);
}

TEST(SearchTest, HybridUsesFallbackPastThreshold) {
  const Graph g = make_path(30);
  SearchConfig c = config(kMVC, SearchMode::kHybrid);
  c.threshold = 4;
  const auto r = solve(g, c);
  for (std::size_t k : r.visited_k()) EXPECT_LE(k, 2 * *c.threshold);
  EXPECT_EQ(r.trace.back().stage, "fallback");
  EXPECT_LE(r.solution.size(), 2 * opt_value(g, kMVC));
  expect_valid(g, kMVC, r);
}

TEST(SearchTest, HybridBinarySearchBelowThreshold) {
  const Graph g = make_random_connected(10, 0.3, 2);
  SearchConfig c = config(kMVC, SearchMode::kHybrid);
  c.threshold = 64;
  const auto r = solve(g, c);
  EXPECT_NE(r.trace.back().stage, "fallback");
  EXPECT_LE(r.solution.size(), 2 * opt_value(g, kMVC));
}

TEST(SearchTest, RegistryRules) {
  FallbackRegistry reg;
  Fallback fb{[](const Graph& g, const Model& m, std::uint64_t s) { return greedy_matching_fallback(g, kMVC, m, s); },
              [](std::size_t n, std::size_t) { return n; }};
  reg.register_fallback(kMVC, "2", fb);
  EXPECT_THROW(reg.register_fallback(kMVC, "2", fb), SearchError);
  EXPECT_THROW(reg.get(kMVC, "2+eps"), SearchError);
  SearchConfig c = config(kMVC, SearchMode::kHybrid);
  c.alpha = "2+eps";
  c.registry = &reg;
  EXPECT_THROW(solve(make_path(4), c), SearchError);
}

TEST(SearchTest, RejectsBadParameters) {
  EXPECT_THROW(solve(make_path(3), config(kMVC, SearchMode::kTwoMinusEps, Rational::of(3, 4))), SearchError);
  EXPECT_THROW(solve(make_path(3), config(kMVC, SearchMode::kOnePlusEps, Rational::of(1, 1))), SearchError);
  EXPECT_THROW(solve(make_path(3), config(kMDS, SearchMode::kExact)), SearchError);
}

}  // namespace
}  // namespace kparam
