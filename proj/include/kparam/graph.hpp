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

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kparam {

using NodeId = std::uint64_t;
inline constexpr NodeId kMaxNodeId = (NodeId{1} << 63) - 1;
inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// An edge or arc between two identifiers. Undirected edges are stored with
// u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge normalized(Edge e) {
  if (e.u > e.v) std::swap(e.u, e.v);
  return e;
}

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable simple graph, optionally directed. Nodes are addressed either by
// identifier or by dense index; index order equals identifier order.
class Graph {
 public:
  Graph() = default;

  // Every edge endpoint is added to the node set. Throws GraphError on
  // self-loops, parallel edges, or identifiers above kMaxNodeId.
  static Graph from_edges(bool directed, std::vector<NodeId> nodes,
                          std::vector<Edge> edges) {
    Graph g;
    g.directed_ = directed;
    for (const Edge& e : edges) {
      if (e.u == e.v) throw GraphError("self-loop on node " + std::to_string(e.u));
      nodes.push_back(e.u);
      nodes.push_back(e.v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (!nodes.empty() && nodes.back() > kMaxNodeId) {
      throw GraphError("identifier exceeds 2^63-1");
    }
    g.ids_ = std::move(nodes);
    if (!directed) {
      for (Edge& e : edges) e = normalized(e);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw GraphError("parallel edge");
    }
    g.edges_ = std::move(edges);
    const std::size_t n = g.ids_.size();
    g.adj_.assign(n, {});
    if (directed) {
      g.out_.assign(n, {});
      g.in_.assign(n, {});
    }
    for (const Edge& e : g.edges_) {
      const std::size_t a = g.index(e.u);
      const std::size_t b = g.index(e.v);
      g.adj_[a].push_back(b);
      g.adj_[b].push_back(a);
      if (directed) {
        g.out_[a].push_back(b);
        g.in_[b].push_back(a);
      }
    }
    auto tidy = [](std::vector<std::vector<std::size_t>>& lists) {
      for (auto& l : lists) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
      }
    };
    tidy(g.adj_);  // antiparallel arcs share one communication link
    tidy(g.out_);
    tidy(g.in_);
    return g;
  }

  bool directed() const { return directed_; }
  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  NodeId id(std::size_t index) const { return ids_.at(index); }

  bool has_node(NodeId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  std::size_t index(NodeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
      throw GraphError("unknown node " + std::to_string(id));
    }
    return static_cast<std::size_t>(it - ids_.begin());
  }

  // Neighbors in the underlying undirected graph, sorted by identifier.
  std::span<const std::size_t> neighbors(std::size_t v) const { return adj_[v]; }
  std::span<const std::size_t> out_neighbors(std::size_t v) const {
    return directed_ ? std::span<const std::size_t>(out_[v]) : neighbors(v);
  }
  std::span<const std::size_t> in_neighbors(std::size_t v) const {
    return directed_ ? std::span<const std::size_t>(in_[v]) : neighbors(v);
  }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& l : adj_) d = std::max(d, l.size());
    return d;
  }

  const std::vector<Edge>& edges() const { return edges_; }

  // For directed graphs this asks for the arc u -> v.
  bool has_edge(NodeId u, NodeId v) const {
    Edge e{u, v};
    if (!directed_) e = normalized(e);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.directed_ == b.directed_ && a.ids_ == b.ids_ && a.edges_ == b.edges_;
  }

 private:
  bool directed_ = false;
  std::vector<NodeId> ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

// Incremental construction helper.
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed = false) : directed_(directed) {}
  GraphBuilder& add_node(NodeId id) {
    nodes_.push_back(id);
    return *this;
  }
  GraphBuilder& add_edge(NodeId u, NodeId v) {
    edges_.push_back({u, v});
    return *this;
  }
  Graph build() const { return Graph::from_edges(directed_, nodes_, edges_); }

 private:
  bool directed_;
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Structural queries on the underlying undirected graph.

inline std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
  std::vector<std::size_t> dist(g.num_nodes(), kNoIndex);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w : g.neighbors(v)) {
      if (dist[w] == kNoIndex) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return false;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == kNoIndex; });
}

// All-pairs BFS. Requires a connected graph.
inline std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < g.num_nodes(); ++s) {
    for (std::size_t d : bfs_distances(g, s)) {
      if (d == kNoIndex) throw GraphError("diameter of a disconnected graph");
      best = std::max(best, d);
    }
  }
  return best;
}

// Renames identifiers. `mapping` must be injective on the node set.
inline Graph relabel(const Graph& g, const std::map<NodeId, NodeId>& mapping) {
  std::vector<NodeId> nodes;
  nodes.reserve(g.num_nodes());
  for (NodeId id : g.ids()) nodes.push_back(mapping.at(id));
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({mapping.at(e.u), mapping.at(e.v)});
  Graph out = Graph::from_edges(g.directed(), nodes, edges);
  if (out.num_nodes() != g.num_nodes()) throw GraphError("relabeling is not injective");
  return out;
}

// Subgraph induced by the nodes for which keep(id) holds.
template <class Pred>
Graph induced_subgraph(const Graph& g, Pred keep) {
  std::vector<NodeId> nodes;
  for (NodeId id : g.ids()) {
    if (keep(id)) nodes.push_back(id);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (keep(e.u) && keep(e.v)) edges.push_back(e);
  }
  return Graph::from_edges(g.directed(), std::move(nodes), std::move(edges));
}

// ---------------------------------------------------------------------------
// Standard families. Identifiers are 0..n-1 unless stated.

inline void require_positive(std::size_t n, const char* what) {
  if (n < 1) throw GraphError(std::string(what) + ": n must be at least 1");
}

inline Graph make_path(std::size_t n) {
  require_positive(n, "make_path");
  GraphBuilder b;
  b.add_node(0);
  for (std::size_t i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1);
  return b.build();
}

inline Graph make_cycle(std::size_t n) {
  if (n < 3) throw GraphError("make_cycle: n must be at least 3");
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
  return b.build();
}

// S_n: center 0 with n leaves 1..n.
inline Graph make_star(std::size_t n) {
  require_positive(n, "make_star");
  GraphBuilder b;
  for (std::size_t i = 1; i <= n; ++i) b.add_edge(0, i);
  return b.build();
}

inline Graph make_clique(std::size_t n) {
  require_positive(n, "make_clique");
  GraphBuilder b;
  b.add_node(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) b.add_edge(i, j);
  }
  return b.build();
}

// Uniform double in [0,1) from the top 53 bits; avoids the
// implementation-defined distributions of <random>.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Erdos-Renyi G(n, p).
inline Graph make_random(std::size_t n, double p, std::uint64_t seed) {
  require_positive(n, "make_random");
  if (!(p >= 0.0 && p <= 1.0)) throw GraphError("make_random: p outside [0,1]");
  std::mt19937_64 rng(seed);
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_node(i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (unit_double(rng) < p) b.add_edge(i, j);
    }
  }
  return b.build();
}

// Connected random graph: a uniformly random recursive tree plus G(n, p)
// extra edges, with identifiers shuffled.
inline Graph make_random_connected(std::size_t n, double p, std::uint64_t seed) {
  require_positive(n, "make_random_connected");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({rng() % i, i});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (unit_double(rng) < p) edges.push_back({i, j});
    }
  }
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  std::vector<Edge> relabeled;
  for (Edge e : edges) relabeled.push_back(normalized({perm[e.u], perm[e.v]}));
  std::sort(relabeled.begin(), relabeled.end());
  relabeled.erase(std::unique(relabeled.begin(), relabeled.end()), relabeled.end());
  return Graph::from_edges(false, std::vector<NodeId>(perm.begin(), perm.end()),
                           std::move(relabeled));
}

// Petersen graph on identifiers 0..9.
inline Graph make_petersen() {
  GraphBuilder b;
  for (NodeId i = 0; i < 5; ++i) {
    b.add_edge(i, (i + 1) % 5);
    b.add_edge(i, i + 5);
    b.add_edge(i + 5, (i + 2) % 5 + 5);
  }
  return b.build();
}

}  // namespace kparam
