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

// Lower-bound graph families (path stars, cycle stars), the vertex cover
// reductions to feedback problems, and graph attachment.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kparam/graph.hpp"

namespace kparam {

struct ConstructionMeta {
  std::string family;
  std::map<std::string, std::int64_t> params;
  std::size_t node_count = 0;
  std::optional<std::size_t> diameter;
  // Optimum per problem name, where the family has a closed form.
  std::map<std::string, std::size_t> opt_sizes;
};

// ---------------------------------------------------------------------------
// Path star G_{r,l}: center v0 and r paths v_{i,0..l}, v_{i,0} adjacent to v0.

enum class Segment { kA, kB };

struct PathStarLabeling {
  std::size_t r = 0;
  std::size_t ell = 0;
  NodeId center = 0;
  std::vector<std::vector<NodeId>> paths;  // paths[i][j] is the id of v_{i,j}

  NodeId at(std::size_t i, std::size_t j) const { return paths.at(i).at(j); }
  friend bool operator==(const PathStarLabeling&, const PathStarLabeling&) = default;
};

inline void check_path_star_params(std::size_t r, std::size_t ell) {
  if (r < 2 || ell < 3) throw GraphError("path star needs r >= 2 and l >= 3");
}

// Contiguous blocks of width l+1: v_{i,j} gets (l+1)i + j and v0 the largest
// identifier r(l+1), so the ids are exactly 0..n-1.
inline PathStarLabeling default_path_star_labeling(std::size_t r, std::size_t ell) {
  check_path_star_params(r, ell);
  PathStarLabeling lab;
  lab.r = r;
  lab.ell = ell;
  lab.center = static_cast<NodeId>(r * (ell + 1));
  lab.paths.assign(r, std::vector<NodeId>(ell + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j <= ell; ++j) lab.paths[i][j] = (ell + 1) * i + j;
  }
  return lab;
}

// Arcs point away from v0 when directed.
inline Graph build_path_star(const PathStarLabeling& lab, bool directed) {
  GraphBuilder b(directed);
  for (std::size_t i = 0; i < lab.r; ++i) {
    b.add_edge(lab.center, lab.at(i, 0));
    for (std::size_t j = 0; j < lab.ell; ++j) b.add_edge(lab.at(i, j), lab.at(i, j + 1));
  }
  return b.build();
}

struct PathStar {
  Graph graph;
  PathStarLabeling labeling;
  ConstructionMeta meta;
};

inline ConstructionMeta path_star_meta(std::size_t r, std::size_t ell, bool directed) {
  ConstructionMeta m;
  m.family = directed ? "directed_path_star" : "path_star";
  m.params = {{"r", static_cast<std::int64_t>(r)}, {"l", static_cast<std::int64_t>(ell)}};
  m.node_count = r * (ell + 1) + 1;
  m.diameter = 2 * ell + 2;  // v_{i,l} to v_{i',l} through v0
  // Characterized optima for l = 2x+3 with x divisible by 6.
  if (!directed && ell % 2 == 1 && ell >= 3 && ((ell - 3) / 2) % 6 == 0) {
    const std::size_t x = (ell - 3) / 2;
    m.params["x"] = static_cast<std::int64_t>(x);
    m.opt_sizes["MVC"] = r * (x + 2);
    m.opt_sizes["MaxM"] = r * (x + 2);
    m.opt_sizes["MaxIS"] = r * (x + 2) + 1;
    m.opt_sizes["MDS"] = r * (2 * x / 3 + 1) + 1;
    m.opt_sizes["MEDS"] = r * (2 * x / 3 + 1) + 1;
  }
  return m;
}

inline PathStar make_path_star(std::size_t r, std::size_t ell) {
  PathStarLabeling lab = default_path_star_labeling(r, ell);
  return {build_path_star(lab, false), lab, path_star_meta(r, ell, false)};
}

inline PathStar make_directed_path_star(std::size_t r, std::size_t ell) {
  PathStarLabeling lab = default_path_star_labeling(r, ell);
  return {build_path_star(lab, true), lab, path_star_meta(r, ell, true)};
}

// Segment A_i = v_{i,0..l-2}, B_i = v_{i,0..l-1}.
inline std::size_t segment_length(std::size_t ell, Segment seg) {
  return seg == Segment::kA ? ell - 1 : ell;
}

inline PathStarLabeling reverse_segment(const PathStarLabeling& lab, std::size_t path,
                                        Segment seg) {
  if (path >= lab.r) throw GraphError("reverse_segment: path index out of range");
  PathStarLabeling out = lab;
  auto& p = out.paths[path];
  std::reverse(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(segment_length(lab.ell, seg)));
  return out;
}

// Applies the reversal to every path whose bit is set in `mask`.
inline PathStarLabeling reverse_segments(const PathStarLabeling& lab, std::uint64_t mask,
                                         Segment seg) {
  PathStarLabeling out = lab;
  for (std::size_t i = 0; i < lab.r; ++i) {
    if ((mask >> i) & 1U) out = reverse_segment(out, i, seg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cycle star: hub v' adjacent to v_0..v_{k-1}; each v_i carries t cycles
// v_{i,j,0..d-1}. Identifiers: v' = 0, v_i = 1+i, and
// v_{i,j,l} = 1 + k + (i t + j) d + l.

struct CycleStarIds {
  std::size_t k, t, d;
  NodeId hub() const { return 0; }
  NodeId spoke(std::size_t i) const { return 1 + i; }
  NodeId cycle(std::size_t i, std::size_t j, std::size_t l) const {
    return 1 + k + (i * t + j) * d + l;
  }
};

struct CycleStar {
  Graph graph;
  ConstructionMeta meta;
};

inline void check_cycle_star_params(std::size_t k, std::size_t t, std::size_t d) {
  if (k < 1 || t < 1 || d <= 10) throw GraphError("cycle star needs k, t >= 1 and d > 10");
}

inline Graph build_cycle_star(std::size_t k, std::size_t t, std::size_t d, bool directed,
                              bool cut_middle) {
  check_cycle_star_params(k, t, d);
  const CycleStarIds ids{k, t, d};
  GraphBuilder b(directed);
  for (std::size_t i = 0; i < k; ++i) {
    b.add_edge(ids.hub(), ids.spoke(i));
    for (std::size_t j = 0; j < t; ++j) {
      b.add_edge(ids.spoke(i), ids.cycle(i, j, 0));
      if (directed) {
        b.add_edge(ids.cycle(i, j, d - 1), ids.hub());
      } else {
        b.add_edge(ids.spoke(i), ids.cycle(i, j, d - 1));
      }
      for (std::size_t l = 0; l + 1 < d; ++l) {
        if (cut_middle && l == d / 2) continue;
        b.add_edge(ids.cycle(i, j, l), ids.cycle(i, j, l + 1));
      }
    }
  }
  return b.build();
}

inline CycleStar make_cycle_star(std::size_t k, std::size_t t, std::size_t d, bool directed) {
  ConstructionMeta m;
  m.family = directed ? "directed_cycle_star" : "cycle_star";
  m.params = {{"k", static_cast<std::int64_t>(k)},
              {"t", static_cast<std::int64_t>(t)},
              {"d", static_cast<std::int64_t>(d)}};
  m.node_count = k * (1 + d * t) + 1;
  if (directed) {
    m.opt_sizes["MFES"] = k;
  } else {
    m.opt_sizes["MFVS"] = k;
    // Farthest pair: two cycle midpoints, reached through v_i (and v').
    const std::size_t mid = (d + 1) / 2;
    if (k >= 2) {
      m.diameter = 2 * mid + 2;
    } else if (t >= 2) {
      m.diameter = 2 * mid;
    } else {
      m.diameter = mid + 1;
    }
  }
  return {build_cycle_star(k, t, d, directed, false), m};
}

// Tree variant: the middle edge {v_{i,j,floor(d/2)}, v_{i,j,floor(d/2)+1}} of
// every cycle is removed.
inline Graph make_cycle_star_tree(std::size_t k, std::size_t t, std::size_t d, bool directed) {
  return build_cycle_star(k, t, d, directed, true);
}

// Kernel-stress family: clique on 0..k (size k+1) with a path of `tail` extra
// nodes hanging off node k.
inline Graph make_clique_with_tail(std::size_t k, std::size_t tail) {
  GraphBuilder b;
  b.add_node(0);
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t j = i + 1; j <= k; ++j) b.add_edge(i, j);
  }
  NodeId prev = k;
  for (std::size_t s = 1; s <= tail; ++s) {
    b.add_edge(prev, k + s);
    prev = k + s;
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Reductions from vertex cover.

// Each edge e = {u,v} becomes a triangle with a fresh node.
struct MfvsReduction {
  Graph graph;
  std::map<NodeId, Edge> edge_node;  // fresh node -> original edge

  // Feedback vertex set of `graph` to a cover of the original of no larger
  // size: edge nodes are replaced by an endpoint.
  std::vector<NodeId> back_map(const std::vector<NodeId>& fvs) const {
    std::set<NodeId> cover;
    for (NodeId x : fvs) {
      auto it = edge_node.find(x);
      cover.insert(it == edge_node.end() ? x : it->second.u);
    }
    return {cover.begin(), cover.end()};
  }
};

inline MfvsReduction reduce_mvc_to_mfvs(const Graph& g) {
  if (g.directed()) throw GraphError("reduce_mvc_to_mfvs expects an undirected graph");
  MfvsReduction red;
  std::vector<NodeId> nodes = g.ids();
  std::vector<Edge> edges = g.edges();
  NodeId next = g.num_nodes() == 0 ? 0 : g.ids().back() + 1;
  for (const Edge& e : g.edges()) {
    if (next > kMaxNodeId) throw GraphError("identifier space exhausted");
    red.edge_node[next] = e;
    edges.push_back({e.u, next});
    edges.push_back({e.v, next});
    ++next;
  }
  red.graph = Graph::from_edges(false, std::move(nodes), std::move(edges));
  return red;
}

// Each node v splits into the arc v_in -> v_out; edge {u,v} becomes the arcs
// u_out -> v_in and v_out -> u_in. For the node at index i, v_in = 2i and
// v_out = 2i+1.
struct MfesReduction {
  Graph graph;
  std::vector<NodeId> original;  // original[i] is the node split into 2i, 2i+1

  std::vector<NodeId> back_map(const std::vector<Edge>& fes) const {
    std::set<NodeId> cover;
    for (const Edge& a : fes) {
      // (v_in, v_out) names v; (v_out, u_in) names its tail v.
      cover.insert(original.at(a.u / 2));
    }
    return {cover.begin(), cover.end()};
  }
};

inline MfesReduction reduce_mvc_to_mfes(const Graph& g) {
  if (g.directed()) throw GraphError("reduce_mvc_to_mfes expects an undirected graph");
  MfesReduction red;
  red.original = g.ids();
  std::vector<NodeId> nodes;
  std::vector<Edge> arcs;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    nodes.push_back(2 * i);
    nodes.push_back(2 * i + 1);
    arcs.push_back({2 * i, 2 * i + 1});
  }
  for (const Edge& e : g.edges()) {
    const std::size_t a = g.index(e.u);
    const std::size_t b = g.index(e.v);
    arcs.push_back({2 * a + 1, 2 * b});
    arcs.push_back({2 * b + 1, 2 * a});
  }
  red.graph = Graph::from_edges(true, std::move(nodes), std::move(arcs));
  return red;
}

// ---------------------------------------------------------------------------
// Attachment: disjoint union of g and h plus the bridge {v, u}.

struct Attachment {
  Graph graph;
  std::map<NodeId, NodeId> h_map;  // identifier of each h node in the result
};

inline Attachment attach(const Graph& g, const Graph& h, NodeId v, NodeId u,
                         bool relabel_h = true) {
  if (g.directed() || h.directed()) throw GraphError("attach expects undirected graphs");
  if (!g.has_node(v) || !h.has_node(u)) throw GraphError("attach: unknown anchor node");
  Attachment out;
  const NodeId base = g.num_nodes() == 0 ? 0 : g.ids().back() + 1;
  for (std::size_t i = 0; i < h.num_nodes(); ++i) {
    const NodeId target = relabel_h ? base + i : h.id(i);
    if (!relabel_h && g.has_node(target)) {
      throw GraphError("attach: identifier collision " + std::to_string(target));
    }
    out.h_map[h.id(i)] = target;
  }
  std::vector<NodeId> nodes = g.ids();
  std::vector<Edge> edges = g.edges();
  for (NodeId id : h.ids()) nodes.push_back(out.h_map[id]);
  for (const Edge& e : h.edges()) edges.push_back({out.h_map[e.u], out.h_map[e.v]});
  edges.push_back({v, out.h_map[u]});
  out.graph = Graph::from_edges(false, std::move(nodes), std::move(edges));
  return out;
}

}  // namespace kparam
