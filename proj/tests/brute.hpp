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

// Subset-enumeration optima used as an independent check on the oracles.
// Nothing here calls into kparam's solvers or feasibility predicates.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kparam/graph.hpp"
#include "kparam/oracles.hpp"

namespace kparam::brute {

using Mask = std::uint64_t;

inline bool has_cycle(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                      bool directed) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    if (!directed) adj[b].push_back(a);
  }
  if (directed) {
    std::vector<int> color(n, 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
      color[v] = 1;
      for (std::size_t w : adj[v]) {
        if (color[w] == 1) return true;
        if (color[w] == 0 && dfs(w)) return true;
      }
      color[v] = 2;
      return false;
    };
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] == 0 && dfs(v)) return true;
    }
    return false;
  }
  // Undirected simple graph: a forest has exactly n - components edges.
  std::vector<char> seen(n, 0);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<std::size_t> st{s};
    seen[s] = 1;
    while (!st.empty()) {
      std::size_t v = st.back();
      st.pop_back();
      for (std::size_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          st.push_back(w);
        }
      }
    }
  }
  return edges.size() > n - comps;
}

// Feasibility of the vertex subset (or edge subset, by index into
// g.edges()) encoded in `mask`.
inline bool feasible(const Graph& g, Problem p, Mask mask) {
  const std::size_t n = g.num_nodes();
  const auto& es = g.edges();
  auto in = [&](std::size_t i) { return ((mask >> i) & 1U) != 0; };
  switch (p.tag) {
    case ProblemTag::kMVC:
      for (const Edge& e : es) {
        if (!in(g.index(e.u)) && !in(g.index(e.v))) return false;
      }
      return true;
    case ProblemTag::kMaxIS:
      for (const Edge& e : es) {
        if (in(g.index(e.u)) && in(g.index(e.v))) return false;
      }
      return true;
    case ProblemTag::kMDS:
      for (std::size_t v = 0; v < n; ++v) {
        bool dom = in(v);
        for (std::size_t w : g.neighbors(v)) dom = dom || in(w);
        if (!dom) return false;
      }
      return true;
    case ProblemTag::kMFVS: {
      std::vector<std::pair<std::size_t, std::size_t>> rest;
      for (const Edge& e : es) {
        const std::size_t a = g.index(e.u), b = g.index(e.v);
        if (!in(a) && !in(b)) rest.push_back({a, b});
      }
      return !has_cycle(n, rest, g.directed());
    }
    case ProblemTag::kMaxM: {
      std::vector<int> used(n, 0);
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (!in(i)) continue;
        if (used[g.index(es[i].u)]++ || used[g.index(es[i].v)]++) return false;
      }
      return true;
    }
    case ProblemTag::kMEDS:
      for (std::size_t j = 0; j < es.size(); ++j) {
        bool dom = false;
        for (std::size_t i = 0; i < es.size() && !dom; ++i) {
          dom = in(i) && (es[i].u == es[j].u || es[i].u == es[j].v || es[i].v == es[j].u ||
                          es[i].v == es[j].v);
        }
        if (!dom) return false;
      }
      return true;
    case ProblemTag::kMFES: {
      std::vector<std::pair<std::size_t, std::size_t>> rest;
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (!in(i)) rest.push_back({g.index(es[i].u), g.index(es[i].v)});
      }
      return !has_cycle(n, rest, true);
    }
  }
  return false;
}

inline std::size_t universe(const Graph& g, Problem p) {
  return p.shape() == Shape::kVertexSet ? g.num_nodes() : g.num_edges();
}

// Optimum by enumerating subsets in order of size. Universe must be <= 24.
inline std::size_t opt(const Graph& g, Problem p) {
  const std::size_t u = universe(g, p);
  if (u > 24) throw std::invalid_argument("brute force universe too large");
  const Mask all = (Mask{1} << u) - 1;
  std::vector<std::vector<Mask>> by_size(u + 1);
  for (Mask m = 0; m <= all; ++m) by_size[static_cast<std::size_t>(std::popcount(m))].push_back(m);
  const bool maximize = p.kind() == Kind::kMax;
  for (std::size_t s = 0; s <= u; ++s) {
    const std::size_t size = maximize ? u - s : s;
    for (Mask m : by_size[size]) {
      if (feasible(g, p, m)) return size;
    }
  }
  throw std::logic_error("no feasible subset");
}

inline Mask vertex_mask(const Graph& g, const std::vector<NodeId>& vs) {
  Mask m = 0;
  for (NodeId v : vs) m |= Mask{1} << g.index(v);
  return m;
}

inline Mask edge_mask(const Graph& g, const std::vector<Edge>& chosen) {
  Mask m = 0;
  const auto& es = g.edges();
  for (const Edge& e : chosen) {
    const auto it = std::lower_bound(es.begin(), es.end(), e);
    if (it == es.end() || *it != e) throw std::invalid_argument("edge not in graph");
    m |= Mask{1} << static_cast<std::size_t>(it - es.begin());
  }
  return m;
}

inline Mask solution_mask(const Graph& g, const Solution& s) {
  return s.problem.shape() == Shape::kVertexSet ? vertex_mask(g, s.vertices) : edge_mask(g, s.edges);
}

}  // namespace kparam::brute
