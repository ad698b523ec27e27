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

// Sequential exact solvers and feasibility predicates. These are ground truth
// for tests and the computation performed by a leader once it holds a graph.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kparam/constructions.hpp"
#include "kparam/graph.hpp"

namespace kparam {

enum class ProblemTag { kMVC, kMaxIS, kMDS, kMFVS, kMaxM, kMEDS, kMFES };
enum class Kind { kMin, kMax };
enum class Shape { kVertexSet, kEdgeSet };

struct Problem {
  ProblemTag tag = ProblemTag::kMVC;

  constexpr Kind kind() const {
    return (tag == ProblemTag::kMaxIS || tag == ProblemTag::kMaxM) ? Kind::kMax : Kind::kMin;
  }
  constexpr Shape shape() const {
    return (tag == ProblemTag::kMaxM || tag == ProblemTag::kMEDS || tag == ProblemTag::kMFES)
               ? Shape::kEdgeSet
               : Shape::kVertexSet;
  }
  constexpr std::string_view name() const {
    switch (tag) {
      case ProblemTag::kMVC: return "MVC";
      case ProblemTag::kMaxIS: return "MaxIS";
      case ProblemTag::kMDS: return "MDS";
      case ProblemTag::kMFVS: return "MFVS";
      case ProblemTag::kMaxM: return "MaxM";
      case ProblemTag::kMEDS: return "MEDS";
      case ProblemTag::kMFES: return "MFES";
    }
    return "?";
  }
  static std::optional<Problem> parse(std::string_view s) {
    for (ProblemTag t : {ProblemTag::kMVC, ProblemTag::kMaxIS, ProblemTag::kMDS, ProblemTag::kMFVS,
                         ProblemTag::kMaxM, ProblemTag::kMEDS, ProblemTag::kMFES}) {
      if (Problem{t}.name() == s) return Problem{t};
    }
    return std::nullopt;
  }
  friend bool operator==(const Problem&, const Problem&) = default;
};

inline constexpr Problem kMVC{ProblemTag::kMVC};
inline constexpr Problem kMaxIS{ProblemTag::kMaxIS};
inline constexpr Problem kMDS{ProblemTag::kMDS};
inline constexpr Problem kMFVS{ProblemTag::kMFVS};
inline constexpr Problem kMaxM{ProblemTag::kMaxM};
inline constexpr Problem kMEDS{ProblemTag::kMEDS};
inline constexpr Problem kMFES{ProblemTag::kMFES};

struct Solution {
  Problem problem;
  std::vector<NodeId> vertices;  // sorted, for vertex-set problems
  std::vector<Edge> edges;       // sorted, for edge-set problems

  static Solution of_vertices(Problem p, std::vector<NodeId> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return {p, std::move(vs), {}};
  }
  // Edges of undirected problems are normalized.
  static Solution of_edges(Problem p, std::vector<Edge> es) {
    if (p.tag != ProblemTag::kMFES) {
      for (Edge& e : es) e = normalized(e);
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    return {p, {}, std::move(es)};
  }
  std::size_t size() const {
    return problem.shape() == Shape::kVertexSet ? vertices.size() : edges.size();
  }
  friend bool operator==(const Solution&, const Solution&) = default;
};

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Feasibility.

namespace detail {

inline bool forest_after_removal(const Graph& g, const std::vector<char>& gone_node,
                                 const std::set<Edge>& gone_edge) {
  std::vector<std::size_t> parent(g.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    const std::size_t a = g.index(e.u), b = g.index(e.v);
    if (gone_node[a] || gone_node[b] || gone_edge.count(e)) continue;
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

inline bool dag_after_removal(const Graph& g, const std::vector<char>& gone_node,
                              const std::set<Edge>& gone_arc) {
  std::vector<std::size_t> indeg(g.num_nodes(), 0);
  std::vector<std::vector<std::size_t>> out(g.num_nodes());
  for (const Edge& e : g.edges()) {
    const std::size_t a = g.index(e.u), b = g.index(e.v);
    if (gone_node[a] || gone_node[b] || gone_arc.count(e)) continue;
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<std::size_t> stack;
  std::size_t live = 0;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (gone_node[v]) continue;
    ++live;
    if (indeg[v] == 0) stack.push_back(v);
  }
  std::size_t seen = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    ++seen;
    for (std::size_t w : out[v]) {
      if (--indeg[w] == 0) stack.push_back(w);
    }
  }
  return seen == live;
}

inline void check_directedness(const Graph& g, Problem p) {
  if (p.tag == ProblemTag::kMFES && !g.directed()) {
    throw OracleError("MFES requires a directed graph");
  }
  if (p.tag != ProblemTag::kMFES && p.tag != ProblemTag::kMFVS && g.directed()) {
    throw OracleError(std::string(p.name()) + " requires an undirected graph");
  }
}

}  // namespace detail

inline bool is_feasible(const Graph& g, const Solution& s) {
  const Problem p = s.problem;
  detail::check_directedness(g, p);
  if (p.shape() == Shape::kVertexSet && !s.edges.empty()) {
    throw OracleError("edge members given for a vertex-set problem");
  }
  if (p.shape() == Shape::kEdgeSet && !s.vertices.empty()) {
    throw OracleError("vertex members given for an edge-set problem");
  }
  std::vector<char> in(g.num_nodes(), 0);
  for (NodeId v : s.vertices) {
    if (!g.has_node(v)) return false;
    in[g.index(v)] = 1;
  }
  for (const Edge& e : s.edges) {
    if (!g.has_edge(e.u, e.v)) return false;
  }
  switch (p.tag) {
    case ProblemTag::kMVC:
      return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return in[g.index(e.u)] || in[g.index(e.v)];
      });
    case ProblemTag::kMaxIS:
      return std::none_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return in[g.index(e.u)] && in[g.index(e.v)];
      });
    case ProblemTag::kMDS:
      for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        if (in[v]) continue;
        const auto nb = g.neighbors(v);
        if (std::none_of(nb.begin(), nb.end(), [&](std::size_t w) { return in[w] != 0; })) {
          return false;
        }
      }
      return true;
    case ProblemTag::kMFVS:
      return g.directed() ? detail::dag_after_removal(g, in, {})
                          : detail::forest_after_removal(g, in, {});
    case ProblemTag::kMaxM: {
      std::vector<char> used(g.num_nodes(), 0);
      for (const Edge& e : s.edges) {
        char& a = used[g.index(e.u)];
        char& b = used[g.index(e.v)];
        if (a || b) return false;
        a = b = 1;
      }
      return true;
    }
    case ProblemTag::kMEDS: {
      std::vector<char> touched(g.num_nodes(), 0);
      for (const Edge& e : s.edges) touched[g.index(e.u)] = touched[g.index(e.v)] = 1;
      return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return touched[g.index(e.u)] || touched[g.index(e.v)];
      });
    }
    case ProblemTag::kMFES: {
      std::set<Edge> gone(s.edges.begin(), s.edges.end());
      return detail::dag_after_removal(g, std::vector<char>(g.num_nodes(), 0), gone);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Minimum vertex cover: branch and bound over an undo trail. Branches on a
// maximum-degree vertex v (take v, or take N(v)); degree-0/1 reductions and
// a matching lower bound prune the tree. Components of maximum degree 2 are
// cycles after reduction and are solved directly.

class VertexCoverSolver {
 public:
  explicit VertexCoverSolver(const Graph& g) : n_(g.num_nodes()), adj_(n_) {
    for (std::size_t v = 0; v < n_; ++v) {
      for (std::size_t w : g.neighbors(v)) adj_[v].push_back(w);
    }
  }

  // Minimum cover as node indices, or nullopt if every cover exceeds budget.
  std::optional<std::vector<std::size_t>> solve(std::size_t budget) {
    removed_.assign(n_, 0);
    deg_.assign(n_, 0);
    edges_left_ = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      deg_[v] = adj_[v].size();
      edges_left_ += deg_[v];
    }
    edges_left_ /= 2;
    trail_.clear();
    chosen_.clear();
    best_size_ = budget + 1;
    best_.reset();
    search();
    return best_;
  }

 private:
  void remove(std::size_t v) {
    removed_[v] = 1;
    for (std::size_t w : adj_[v]) {
      if (!removed_[w]) {
        --deg_[w];
        --edges_left_;
      }
    }
    trail_.push_back(v);
  }

  void take(std::size_t v) {
    chosen_.push_back(v);
    remove(v);
  }

  void undo_to(std::size_t trail_mark, std::size_t chosen_mark) {
    while (trail_.size() > trail_mark) {
      const std::size_t v = trail_.back();
      trail_.pop_back();
      removed_[v] = 0;
      for (std::size_t w : adj_[v]) {
        if (!removed_[w]) {
          ++deg_[w];
          ++edges_left_;
        }
      }
    }
    chosen_.resize(chosen_mark);
  }

  void reduce() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v = 0; v < n_; ++v) {
        if (removed_[v]) continue;
        if (deg_[v] == 0) {
          remove(v);
          changed = true;
        } else if (deg_[v] == 1) {
          for (std::size_t w : adj_[v]) {
            if (!removed_[w]) {
              take(w);
              break;
            }
          }
          changed = true;
        }
      }
    }
  }

  std::size_t matching_bound() const {
    std::vector<char> used(n_, 0);
    std::size_t m = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if (removed_[v] || used[v]) continue;
      for (std::size_t w : adj_[v]) {
        if (!removed_[w] && !used[w]) {
          used[v] = used[w] = 1;
          ++m;
          break;
        }
      }
    }
    return m;
  }

  // All remaining vertices have degree 2: disjoint cycles.
  void take_cycles() {
    for (std::size_t s = 0; s < n_; ++s) {
      if (removed_[s]) continue;
      std::vector<std::size_t> cyc{s};
      std::size_t prev = s, cur = s;
      while (true) {
        std::size_t next = kNoIndex;
        for (std::size_t w : adj_[cur]) {
          if (!removed_[w] && w != prev && (w != s || cyc.size() > 2)) {
            next = w;
            break;
          }
        }
        if (next == s || next == kNoIndex) break;
        cyc.push_back(next);
        prev = cur;
        cur = next;
      }
      for (std::size_t i = 0; i < cyc.size(); i += 2) chosen_.push_back(cyc[i]);
      for (std::size_t v : cyc) remove(v);
    }
  }

  void record() {
    if (chosen_.size() < best_size_) {
      best_size_ = chosen_.size();
      best_ = chosen_;
    }
  }

  void search() {
    const std::size_t trail_mark = trail_.size();
    const std::size_t chosen_mark = chosen_.size();
    reduce();
    if (edges_left_ == 0) {
      record();
      undo_to(trail_mark, chosen_mark);
      return;
    }
    std::size_t v = kNoIndex;
    for (std::size_t u = 0; u < n_; ++u) {
      if (!removed_[u] && (v == kNoIndex || deg_[u] > deg_[v])) v = u;
    }
    const std::size_t lower = chosen_.size() + std::max(matching_bound(),
        (edges_left_ + deg_[v] - 1) / deg_[v]);
    if (lower >= best_size_) {
      undo_to(trail_mark, chosen_mark);
      return;
    }
    if (deg_[v] <= 2) {
      take_cycles();
      record();
      undo_to(trail_mark, chosen_mark);
      return;
    }
    const std::size_t inner_trail = trail_.size();
    const std::size_t inner_chosen = chosen_.size();
    take(v);
    search();
    undo_to(inner_trail, inner_chosen);
    std::vector<std::size_t> nb;
    for (std::size_t w : adj_[v]) {
      if (!removed_[w]) nb.push_back(w);
    }
    if (chosen_.size() + nb.size() < best_size_) {
      for (std::size_t w : nb) take(w);
      search();
    }
    undo_to(trail_mark, chosen_mark);
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<char> removed_;
  std::vector<std::size_t> deg_;
  std::size_t edges_left_ = 0;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> chosen_;
  std::size_t best_size_ = 0;
  std::optional<std::vector<std::size_t>> best_;
};

// Minimum cover of g with at most `budget` vertices, as identifiers.
inline std::optional<std::vector<NodeId>> vertex_cover_within(const Graph& g,
                                                              std::size_t budget) {
  VertexCoverSolver solver(g);
  auto idx = solver.solve(budget);
  if (!idx) return std::nullopt;
  std::vector<NodeId> out;
  for (std::size_t i : *idx) out.push_back(g.id(i));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Bitmask solvers for graphs with at most 64 nodes.

namespace detail {

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

inline std::vector<Mask> closed_neighborhoods(const Graph& g) {
  if (g.num_nodes() > 64) throw OracleError("instance too large for the bitmask solver");
  std::vector<Mask> c(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    c[v] = bit(v);
    for (std::size_t w : g.neighbors(v)) c[v] |= bit(w);
  }
  return c;
}

// Minimum dominating set over closed neighborhoods `cover` of `count` items.
class DominatingSetSolver {
 public:
  explicit DominatingSetSolver(std::vector<Mask> cover) : cover_(std::move(cover)) {
    const std::size_t n = cover_.size();
    all_ = n == 64 ? ~Mask{0} : bit(n) - 1;
  }

  std::vector<std::size_t> solve() {
    best_.clear();
    for (std::size_t v = 0; v < cover_.size(); ++v) best_.push_back(v);
    chosen_.clear();
    search(0);
    return best_;
  }

 private:
  void search(Mask dominated) {
    const Mask open = all_ & ~dominated;
    if (open == 0) {
      if (chosen_.size() < best_.size()) best_ = chosen_;
      return;
    }
    int max_gain = 0;
    for (Mask c : cover_) max_gain = std::max(max_gain, std::popcount(c & open));
    const std::size_t lower =
        chosen_.size() + (std::popcount(open) + max_gain - 1) / max_gain;
    if (lower >= best_.size()) return;
    // The open item with the fewest dominators.
    std::size_t pick = 0;
    int fewest = 65;
    for (Mask rest = open; rest; rest &= rest - 1) {
      const std::size_t u = static_cast<std::size_t>(std::countr_zero(rest));
      const int c = std::popcount(cover_[u]);
      if (c < fewest) {
        fewest = c;
        pick = u;
      }
    }
    std::vector<std::size_t> cands;
    for (Mask rest = cover_[pick]; rest; rest &= rest - 1) {
      cands.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
    }
    // Drop candidates whose new coverage is contained in another's.
    std::vector<std::size_t> kept;
    for (std::size_t a : cands) {
      const Mask ga = cover_[a] & open;
      bool dominated_cand = false;
      for (std::size_t b : cands) {
        if (a == b) continue;
        const Mask gb = cover_[b] & open;
        if ((ga & ~gb) == 0 && (ga != gb || b < a)) {
          dominated_cand = true;
          break;
        }
      }
      if (!dominated_cand) kept.push_back(a);
    }
    std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
      const int ga = std::popcount(cover_[a] & open), gb = std::popcount(cover_[b] & open);
      return ga != gb ? ga > gb : a < b;
    });
    for (std::size_t w : kept) {
      chosen_.push_back(w);
      search(dominated | cover_[w]);
      chosen_.pop_back();
    }
  }

  std::vector<Mask> cover_;
  Mask all_ = 0;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
};

// Maximum matching by memoized recursion on the set of available vertices.
class MatchingDp {
 public:
  explicit MatchingDp(const Graph& g) : g_(g) {
    if (g.num_nodes() > 64) throw OracleError("instance too large for the matching solver");
    nb_.resize(g.num_nodes());
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      for (std::size_t w : g.neighbors(v)) nb_[v] |= bit(w);
    }
  }

  std::vector<Edge> solve() {
    const std::size_t n = g_.num_nodes();
    Mask avail = n == 64 ? ~Mask{0} : bit(n) - 1;
    std::vector<Edge> out;
    while (avail) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(avail));
      const int target = value(avail);
      if (value(avail & ~bit(v)) == target) {
        avail &= ~bit(v);
        continue;
      }
      for (Mask rest = nb_[v] & avail; rest; rest &= rest - 1) {
        const std::size_t w = static_cast<std::size_t>(std::countr_zero(rest));
        if (1 + value(avail & ~bit(v) & ~bit(w)) == target) {
          out.push_back(normalized({g_.id(v), g_.id(w)}));
          avail &= ~bit(v) & ~bit(w);
          break;
        }
      }
    }
    return out;
  }

 private:
  int value(Mask avail) {
    // Vertices with no available neighbor never matter.
    if (avail == 0) return 0;
    auto it = memo_.find(avail);
    if (it != memo_.end()) return it->second;
    const std::size_t v = static_cast<std::size_t>(std::countr_zero(avail));
    const Mask rest = avail & ~bit(v);
    int best = value(rest);
    for (Mask r = nb_[v] & rest; r; r &= r - 1) {
      const std::size_t w = static_cast<std::size_t>(std::countr_zero(r));
      best = std::max(best, 1 + value(rest & ~bit(w)));
    }
    memo_.emplace(avail, best);
    return best;
  }

  const Graph& g_;
  std::vector<Mask> nb_;
  std::unordered_map<Mask, int> memo_;
};

}  // namespace detail

inline std::vector<NodeId> min_dominating_set(const Graph& g) {
  detail::DominatingSetSolver solver(detail::closed_neighborhoods(g));
  std::vector<NodeId> out;
  for (std::size_t i : solver.solve()) out.push_back(g.id(i));
  std::sort(out.begin(), out.end());
  return out;
}

// Minimum edge dominating set: dominating set of the line graph.
inline std::vector<Edge> min_edge_dominating_set(const Graph& g) {
  const auto& es = g.edges();
  if (es.size() > 64) throw OracleError("instance too large for the edge domination solver");
  std::vector<detail::Mask> cover(es.size(), 0);
  for (std::size_t a = 0; a < es.size(); ++a) {
    for (std::size_t b = 0; b < es.size(); ++b) {
      if (es[a].u == es[b].u || es[a].u == es[b].v || es[a].v == es[b].u || es[a].v == es[b].v) {
        cover[a] |= detail::bit(b);
      }
    }
  }
  detail::DominatingSetSolver solver(std::move(cover));
  std::vector<Edge> out;
  for (std::size_t i : solver.solve()) out.push_back(es[i]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Edge> max_matching(const Graph& g) {
  detail::MatchingDp dp(g);
  auto out = dp.solve();
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Feedback sets.

namespace detail {

// Undirected multigraph with loops, used by the feedback vertex set search.
struct MultiGraph {
  std::vector<std::map<std::size_t, int>> adj;  // neighbor -> multiplicity (capped at 2)
  std::vector<char> alive;
  std::vector<char> loop;

  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (const auto& [w, m] : adj[v]) d += static_cast<std::size_t>(m);
    return d;
  }
  void erase(std::size_t v) {
    for (const auto& [w, m] : adj[v]) adj[w].erase(v);
    adj[v].clear();
    alive[v] = 0;
    loop[v] = 0;
  }
  void link(std::size_t a, std::size_t b) {
    if (a == b) {
      loop[a] = 1;
      return;
    }
    int& m = adj[a][b];
    m = std::min(m + 1, 2);
    adj[b][a] = m;
  }
};

// Shortest cycle as a vertex list, or empty if acyclic. Multi-edges give
// cycles of length 2.
inline std::vector<std::size_t> shortest_cycle(const MultiGraph& mg) {
  std::vector<std::size_t> best;
  const std::size_t n = mg.alive.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (!mg.alive[s]) continue;
    for (const auto& [w, m] : mg.adj[s]) {
      if (m >= 2) return {s, w};
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!mg.alive[s]) continue;
    std::vector<std::size_t> dist(n, kNoIndex), par(n, kNoIndex);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (const auto& [w, m] : mg.adj[v]) {
        if (dist[w] == kNoIndex) {
          dist[w] = dist[v] + 1;
          par[w] = v;
          q.push_back(w);
        } else if (par[v] != w && dist[w] >= dist[v]) {
          const std::size_t len = dist[v] + dist[w] + 1;
          if (best.empty() || len < best.size()) {
            // Walk both endpoints up to their common ancestor.
            std::vector<std::size_t> left{v}, right{w};
            std::size_t a = v, b = w;
            while (a != b) {
              if (dist[a] >= dist[b]) {
                a = par[a];
                left.push_back(a);
              } else {
                b = par[b];
                right.push_back(b);
              }
            }
            right.pop_back();
            std::vector<std::size_t> cyc = left;
            cyc.insert(cyc.end(), right.rbegin(), right.rend());
            if (best.empty() || cyc.size() < best.size()) best = cyc;
          }
        }
      }
    }
  }
  return best;
}

class UndirectedFvsSolver {
 public:
  explicit UndirectedFvsSolver(const Graph& g) {
    const std::size_t n = g.num_nodes();
    root_.adj.resize(n);
    root_.alive.assign(n, 1);
    root_.loop.assign(n, 0);
    for (const Edge& e : g.edges()) root_.link(g.index(e.u), g.index(e.v));
  }

  std::vector<std::size_t> solve() {
    best_.clear();
    for (std::size_t v = 0; v < root_.alive.size(); ++v) best_.push_back(v);
    best_valid_ = false;
    search(root_, {});
    return best_;
  }

 private:
  static void reduce(MultiGraph& mg, std::vector<std::size_t>& taken) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v = 0; v < mg.alive.size(); ++v) {
        if (!mg.alive[v]) continue;
        if (mg.loop[v]) {
          taken.push_back(v);
          mg.erase(v);
          changed = true;
          continue;
        }
        const std::size_t d = mg.degree(v);
        if (d <= 1) {
          mg.erase(v);
          changed = true;
        } else if (d == 2) {
          std::vector<std::size_t> ends;
          for (const auto& [w, m] : mg.adj[v]) {
            for (int c = 0; c < m; ++c) ends.push_back(w);
          }
          mg.erase(v);
          mg.link(ends[0], ends[1]);
          changed = true;
        }
      }
    }
  }

  // Greedy vertex-disjoint cycle packing.
  static std::size_t packing_bound(MultiGraph mg) {
    std::size_t count = 0;
    while (true) {
      std::vector<std::size_t> taken;
      reduce(mg, taken);
      count += taken.size();
      auto cyc = shortest_cycle(mg);
      if (cyc.empty()) return count;
      ++count;
      for (std::size_t v : cyc) mg.erase(v);
    }
  }

  void search(MultiGraph mg, std::vector<std::size_t> taken) {
    reduce(mg, taken);
    auto cyc = shortest_cycle(mg);
    if (cyc.empty()) {
      if (!best_valid_ || taken.size() < best_.size()) {
        best_ = taken;
        best_valid_ = true;
      }
      return;
    }
    if (best_valid_ && taken.size() + packing_bound(mg) >= best_.size()) return;
    std::sort(cyc.begin(), cyc.end(), [&](std::size_t a, std::size_t b) {
      const std::size_t da = mg.degree(a), db = mg.degree(b);
      return da != db ? da > db : a < b;
    });
    for (std::size_t v : cyc) {
      MultiGraph next = mg;
      next.erase(v);
      auto t = taken;
      t.push_back(v);
      search(std::move(next), std::move(t));
    }
  }

  MultiGraph root_;
  std::vector<std::size_t> best_;
  bool best_valid_ = false;
};

// Directed graph with removable vertices and arcs.
struct DiGraph {
  std::vector<std::set<std::size_t>> out, in;
  std::vector<char> alive;

  void erase(std::size_t v) {
    for (std::size_t w : out[v]) in[w].erase(v);
    for (std::size_t w : in[v]) out[w].erase(v);
    out[v].clear();
    in[v].clear();
    alive[v] = 0;
  }
};

// Shortest directed cycle as a vertex list (arcs c[i] -> c[i+1], closing back).
inline std::vector<std::size_t> shortest_dicycle(const DiGraph& dg) {
  std::vector<std::size_t> best;
  const std::size_t n = dg.alive.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (!dg.alive[s]) continue;
    std::vector<std::size_t> dist(n, kNoIndex), par(n, kNoIndex);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    bool found = false;
    while (!q.empty() && !found) {
      const std::size_t v = q.front();
      q.pop_front();
      if (!best.empty() && dist[v] + 1 >= best.size()) break;
      for (std::size_t w : dg.out[v]) {
        if (w == s) {
          std::vector<std::size_t> cyc;
          for (std::size_t x = v; x != kNoIndex; x = par[x]) cyc.push_back(x);
          std::reverse(cyc.begin(), cyc.end());
          if (best.empty() || cyc.size() < best.size()) best = cyc;
          found = true;
          break;
        }
        if (dist[w] == kNoIndex) {
          dist[w] = dist[v] + 1;
          par[w] = v;
          q.push_back(w);
        }
      }
    }
  }
  return best;
}

class DirectedFvsSolver {
 public:
  explicit DirectedFvsSolver(const Graph& g) {
    const std::size_t n = g.num_nodes();
    root_.out.resize(n);
    root_.in.resize(n);
    root_.alive.assign(n, 1);
    for (const Edge& e : g.edges()) {
      root_.out[g.index(e.u)].insert(g.index(e.v));
      root_.in[g.index(e.v)].insert(g.index(e.u));
    }
  }

  std::vector<std::size_t> solve() {
    best_valid_ = false;
    best_.clear();
    search(root_, {});
    return best_;
  }

 private:
  static void reduce(DiGraph& dg, std::vector<std::size_t>& taken) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v = 0; v < dg.alive.size(); ++v) {
        if (!dg.alive[v]) continue;
        if (dg.out[v].count(v)) {
          taken.push_back(v);
          dg.erase(v);
          changed = true;
        } else if (dg.out[v].empty() || dg.in[v].empty()) {
          dg.erase(v);
          changed = true;
        } else if (dg.out[v].size() == 1 && dg.in[v].size() == 1) {
          const std::size_t a = *dg.in[v].begin(), b = *dg.out[v].begin();
          dg.erase(v);
          dg.out[a].insert(b);
          dg.in[b].insert(a);
          changed = true;
        }
      }
    }
  }

  static std::size_t packing_bound(DiGraph dg) {
    std::size_t count = 0;
    while (true) {
      std::vector<std::size_t> taken;
      reduce(dg, taken);
      count += taken.size();
      auto cyc = shortest_dicycle(dg);
      if (cyc.empty()) return count;
      ++count;
      for (std::size_t v : cyc) dg.erase(v);
    }
  }

  void search(DiGraph dg, std::vector<std::size_t> taken) {
    reduce(dg, taken);
    auto cyc = shortest_dicycle(dg);
    if (cyc.empty()) {
      if (!best_valid_ || taken.size() < best_.size()) {
        best_ = taken;
        best_valid_ = true;
      }
      return;
    }
    if (best_valid_ && taken.size() + packing_bound(dg) >= best_.size()) return;
    for (std::size_t v : cyc) {
      DiGraph next = dg;
      next.erase(v);
      auto t = taken;
      t.push_back(v);
      search(std::move(next), std::move(t));
    }
  }

  DiGraph root_;
  std::vector<std::size_t> best_;
  bool best_valid_ = false;
};

// Minimum feedback arc set. Arcs outside strongly connected components are
// dropped; the search branches on the arcs of a shortest directed cycle with
// a greedy arc-disjoint cycle packing as lower bound.
class FeedbackArcSolver {
 public:
  explicit FeedbackArcSolver(const Graph& g) : g_(g) {
    const std::size_t n = g.num_nodes();
    root_.out.resize(n);
    root_.in.resize(n);
    root_.alive.assign(n, 1);
    for (const Edge& e : g.edges()) {
      root_.out[g.index(e.u)].insert(g.index(e.v));
      root_.in[g.index(e.v)].insert(g.index(e.u));
    }
  }

  std::vector<Edge> solve() {
    best_valid_ = false;
    search(root_, {});
    std::vector<Edge> out;
    for (auto [a, b] : best_) out.push_back({g_.id(a), g_.id(b)});
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  using Arc = std::pair<std::size_t, std::size_t>;

  static std::vector<std::size_t> scc_ids(const DiGraph& dg) {
    const std::size_t n = dg.alive.size();
    std::vector<std::size_t> index(n, kNoIndex), low(n, 0), comp(n, kNoIndex);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, comps = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = 1;
      for (std::size_t w : dg.out[v]) {
        if (index[w] == kNoIndex) {
          dfs(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
    };
    for (std::size_t v = 0; v < n; ++v) {
      if (dg.alive[v] && index[v] == kNoIndex) dfs(v);
    }
    return comp;
  }

  static void prune(DiGraph& dg) {
    const auto comp = scc_ids(dg);
    for (std::size_t v = 0; v < dg.alive.size(); ++v) {
      std::vector<std::size_t> drop;
      for (std::size_t w : dg.out[v]) {
        if (comp[v] != comp[w]) drop.push_back(w);
      }
      for (std::size_t w : drop) {
        dg.out[v].erase(w);
        dg.in[w].erase(v);
      }
    }
  }

  static void remove_arc(DiGraph& dg, Arc a) {
    dg.out[a.first].erase(a.second);
    dg.in[a.second].erase(a.first);
  }

  static std::vector<Arc> cycle_arcs(const std::vector<std::size_t>& cyc) {
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < cyc.size(); ++i) arcs.push_back({cyc[i], cyc[(i + 1) % cyc.size()]});
    return arcs;
  }

  static std::size_t packing_bound(DiGraph dg) {
    std::size_t count = 0;
    while (true) {
      auto cyc = shortest_dicycle(dg);
      if (cyc.empty()) return count;
      ++count;
      for (Arc a : cycle_arcs(cyc)) remove_arc(dg, a);
    }
  }

  void search(DiGraph dg, std::vector<Arc> taken) {
    prune(dg);
    auto cyc = shortest_dicycle(dg);
    if (cyc.empty()) {
      if (!best_valid_ || taken.size() < best_.size()) {
        best_ = taken;
        best_valid_ = true;
      }
      return;
    }
    if (best_valid_ && taken.size() + packing_bound(dg) >= best_.size()) return;
    auto arcs = cycle_arcs(cyc);
    // Arcs with busy endpoints first: they tend to lie on many cycles.
    std::stable_sort(arcs.begin(), arcs.end(), [&](Arc a, Arc b) {
      return dg.in[a.first].size() + dg.out[a.second].size() >
             dg.in[b.first].size() + dg.out[b.second].size();
    });
    for (Arc a : arcs) {
      DiGraph next = dg;
      remove_arc(next, a);
      auto t = taken;
      t.push_back(a);
      search(std::move(next), std::move(t));
      if (best_valid_ && taken.size() + 1 >= best_.size()) return;
    }
  }

  const Graph& g_;
  DiGraph root_;
  std::vector<Arc> best_;
  bool best_valid_ = false;
};

}  // namespace detail

inline std::vector<NodeId> min_feedback_vertex_set(const Graph& g) {
  std::vector<std::size_t> idx;
  if (g.directed()) {
    idx = detail::DirectedFvsSolver(g).solve();
  } else {
    idx = detail::UndirectedFvsSolver(g).solve();
  }
  std::vector<NodeId> out;
  for (std::size_t i : idx) out.push_back(g.id(i));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Edge> min_feedback_arc_set(const Graph& g) {
  if (!g.directed()) throw OracleError("MFES requires a directed graph");
  return detail::FeedbackArcSolver(g).solve();
}

// ---------------------------------------------------------------------------
// Front door.

inline Solution opt_solution(const Graph& g, Problem p) {
  detail::check_directedness(g, p);
  switch (p.tag) {
    case ProblemTag::kMVC:
      return Solution::of_vertices(p, *vertex_cover_within(g, g.num_nodes()));
    case ProblemTag::kMaxIS: {
      auto cover = *vertex_cover_within(g, g.num_nodes());
      std::vector<NodeId> rest;
      std::set_difference(g.ids().begin(), g.ids().end(), cover.begin(), cover.end(),
                          std::back_inserter(rest));
      return Solution::of_vertices(p, rest);
    }
    case ProblemTag::kMDS:
      return Solution::of_vertices(p, min_dominating_set(g));
    case ProblemTag::kMFVS:
      return Solution::of_vertices(p, min_feedback_vertex_set(g));
    case ProblemTag::kMaxM:
      return Solution::of_edges(p, max_matching(g));
    case ProblemTag::kMEDS:
      return Solution::of_edges(p, min_edge_dominating_set(g));
    case ProblemTag::kMFES:
      return Solution::of_edges(p, min_feedback_arc_set(g));
  }
  throw OracleError("unknown problem");
}

inline std::size_t opt_value(const Graph& g, Problem p) { return opt_solution(g, p).size(); }

// ---------------------------------------------------------------------------
// Optimal sets on G_{r,2x+3} (x divisible by 6) under a given labeling.
// MVC, MaxM and MaxIS are the classical alternating sets. The dominating
// sets take v0 (or one v0 edge) plus every third path position starting
// from offset 2 (offset 1 for edges), which also dominates the path tail.

struct ReferenceSets {
  Solution mvc, maxm, maxis, mds, meds;
};

inline ReferenceSets opt_reference_sets(const PathStarLabeling& lab) {
  if (lab.ell < 3 || lab.ell % 2 == 0 || ((lab.ell - 3) / 2) % 6 != 0) {
    throw OracleError("reference sets need l = 2x+3 with x divisible by 6");
  }
  const std::size_t x = (lab.ell - 3) / 2;
  std::vector<NodeId> mvc, maxis{lab.center}, mds{lab.center};
  std::vector<Edge> maxm, meds{{lab.center, lab.at(0, 0)}};
  for (std::size_t i = 0; i < lab.r; ++i) {
    for (std::size_t j = 0; j < x + 2; ++j) {
      mvc.push_back(lab.at(i, 2 * j));
      maxis.push_back(lab.at(i, 2 * j + 1));
      maxm.push_back({lab.at(i, 2 * j), lab.at(i, 2 * j + 1)});
    }
    for (std::size_t j = 0; j < 2 * x / 3 + 1; ++j) {
      mds.push_back(lab.at(i, 3 * j + 2));
      meds.push_back({lab.at(i, 3 * j + 1), lab.at(i, 3 * j + 2)});
    }
  }
  return {Solution::of_vertices(kMVC, mvc), Solution::of_edges(kMaxM, maxm),
          Solution::of_vertices(kMaxIS, maxis), Solution::of_vertices(kMDS, mds),
          Solution::of_edges(kMEDS, meds)};
}

}  // namespace kparam
