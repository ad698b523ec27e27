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

// Indistinguishability experiments. A candidate LOCAL program runs under a
// round cap on relabeled path stars or on cycle-star/tree pairs, and the
// harness measures its error against known optima. Reports are empirical:
// they exhibit failures of the programs tried, nothing more.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kparam/constructions.hpp"
#include "kparam/oracles.hpp"
#include "kparam/primitives.hpp"

namespace kparam {

// ---------------------------------------------------------------------------
// Views. The x-hop view of v is the set of identifiers within distance x and
// the edges (arcs, with direction) having an endpoint within distance x-1:
// exactly what v can know after x LOCAL rounds.

struct View {
  NodeId root = 0;
  std::set<NodeId> nodes;
  std::set<std::tuple<NodeId, NodeId, bool>> edges;  // (u, v, is_arc)

  friend bool operator==(const View&, const View&) = default;
};

inline std::string serialize_view(const View& v) {
  std::string s = "root=" + std::to_string(v.root) + ";nodes=";
  bool first = true;
  for (NodeId u : v.nodes) {
    if (!first) s += ',';
    s += std::to_string(u);
    first = false;
  }
  s += ";edges=";
  first = true;
  for (const auto& [a, b, arc] : v.edges) {
    if (!first) s += ',';
    s += std::to_string(a) + (arc ? ">" : "-") + std::to_string(b);
    first = false;
  }
  return s;
}

namespace detail {

inline void add_link(View& view, const Graph& g, NodeId a, NodeId b) {
  if (!g.directed()) {
    view.edges.insert({std::min(a, b), std::max(a, b), false});
    return;
  }
  if (g.has_edge(a, b)) view.edges.insert({a, b, true});
  if (g.has_edge(b, a)) view.edges.insert({b, a, true});
}

// Flooding: every node forwards all it knows each round and stops at step x.
struct ViewFlood {
  std::size_t radius;

  struct State {
    std::set<NodeId> nodes;
    std::set<std::tuple<NodeId, NodeId, bool>> edges;
  };
  State init(const NodeContext& ctx) const { return {{ctx.id}, {}}; }

  static Message encode(const NodeContext& ctx, const State& s) {
    Message m{1, 64, {ctx.id, s.nodes.size()}};
    m.items.insert(m.items.end(), s.nodes.begin(), s.nodes.end());
    for (const auto& [a, b, arc] : s.edges) m.items.insert(m.items.end(), {a, b, arc ? 1U : 0U});
    return m;
  }

  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    for (std::size_t p = 0; p < ctx.degree; ++p) {
      if (!in[p]) continue;
      const auto& it = in[p]->items;
      const NodeId u = it.at(0);
      s.nodes.insert(u);
      switch ((*ctx.dirs)[p]) {
        case PortDir::kUndirected:
          s.edges.insert({std::min(ctx.id, u), std::max(ctx.id, u), false});
          break;
        case PortDir::kOut:
          s.edges.insert({ctx.id, u, true});
          break;
        case PortDir::kIn:
          s.edges.insert({u, ctx.id, true});
          break;
        case PortDir::kBoth:
          s.edges.insert({ctx.id, u, true});
          s.edges.insert({u, ctx.id, true});
          break;
      }
      const std::size_t count = it.at(1);
      s.nodes.insert(it.begin() + 2, it.begin() + 2 + static_cast<std::ptrdiff_t>(count));
      for (std::size_t i = 2 + count; i + 2 < it.size(); i += 3) {
        s.edges.insert({it[i], it[i + 1], it[i + 2] != 0});
      }
    }
    if (round == radius) return true;
    const Message m = encode(ctx, s);
    for (auto& o : out) o = m;
    return false;
  }
};

}  // namespace detail

// Views of all nodes, gathered by running the flooding program.
inline std::vector<View> views_by_flooding(const Graph& g, std::size_t radius) {
  const auto r = run(g, detail::ViewFlood{radius}, RunConfig{Model::local(), radius, 0});
  std::vector<View> out(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    out[v].root = g.id(v);
    out[v].nodes = r.states[v].nodes;
    out[v].edges = r.states[v].edges;
  }
  return out;
}

// The same view read off the graph by breadth-first search.
inline View view_by_bfs(const Graph& g, NodeId root, std::size_t radius) {
  const auto dist = bfs_distances(g, g.index(root));
  View view;
  view.root = root;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (dist[v] <= radius) view.nodes.insert(g.id(v));
  }
  if (radius == 0) return view;
  for (const Edge& e : g.edges()) {
    if (std::min(dist[g.index(e.u)], dist[g.index(e.v)]) <= radius - 1) {
      detail::add_link(view, g, e.u, e.v);
    }
  }
  return view;
}

// Both routes, checked against each other.
inline std::string view_string(const Graph& g, NodeId root, std::size_t radius) {
  const View oracle = view_by_bfs(g, root, radius);
  const View flooded = views_by_flooding(g, radius).at(g.index(root));
  if (!(oracle == flooded)) throw std::logic_error("view routes disagree at node " + std::to_string(root));
  return serialize_view(oracle);
}

// Identifiers whose views survive reversing segment `seg` of path i: for A_i
// the reversal maps position j to 2x+1-j, for B_i to 2x+2-j.
inline std::vector<NodeId> designated_ids(const PathStarLabeling& base, std::size_t i, Segment seg) {
  const std::size_t x = (base.ell - 3) / 2;
  const NodeId b = base.at(i, 0);
  if (seg == Segment::kA) return {b + x, b + x + 1};
  return {b + x, b + x + 1, b + x + 2};
}

inline Segment segment_for(Problem p) {
  return p == kMDS || p == kMEDS ? Segment::kB : Segment::kA;
}

// True when every designated node of every path has a bit-identical x-hop
// view before and after its path's reversal.
inline bool reversal_views_identical(std::size_t r, std::size_t x, Segment seg) {
  const PathStarLabeling base = default_path_star_labeling(r, 2 * x + 3);
  const Graph g0 = build_path_star(base, false);
  const auto before = views_by_flooding(g0, x);
  for (std::size_t i = 0; i < r; ++i) {
    const Graph g1 = build_path_star(reverse_segment(base, i, seg), false);
    const auto after = views_by_flooding(g1, x);
    for (NodeId id : designated_ids(base, i, seg)) {
      const View& a = before[g0.index(id)];
      const View& b = after[g1.index(id)];
      if (!(a == view_by_bfs(g0, id, x)) || !(b == view_by_bfs(g1, id, x))) {
        throw std::logic_error("view routes disagree");
      }
      if (serialize_view(a) != serialize_view(b)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Candidate programs and reports.

struct CandidateProgram {
  std::string name;
  std::function<std::vector<NodeOutput>(Session&)> body;
};

struct PathRecord {
  std::size_t index = 0;
  int orientation = 0;  // 0 base / 1 reversed; for cycle-tree 0 = G1, 1 = T1
  bool optimal = false;
  std::int64_t error = 0;
};

struct InputRecord {
  std::string name;
  std::size_t solution_size = 0;
  std::size_t opt_size = 0;
  bool feasible = false;
  std::int64_t additive_error = 0;
  std::size_t rounds = 0;
};

struct AdversaryReport {
  std::string attack;
  std::string program;
  Problem problem = kMVC;
  std::vector<PathRecord> paths;
  std::vector<InputRecord> inputs;
  std::size_t inputs_tried = 0;
  std::int64_t max_additive_error = 0;
  std::size_t suboptimal_paths = 0;
  bool views_identical = false;
  std::optional<std::string> disqualified;
  std::string label = "empirical";
};

namespace detail {

struct ProgramRun {
  std::optional<Solution> solution;
  std::size_t rounds = 0;
};

inline ProgramRun run_candidate(const CandidateProgram& prog, const Graph& g, Problem p,
                                std::size_t cap, std::uint64_t seed) {
  Session s(g, RunConfig{Model::local(), cap, seed});
  std::vector<NodeOutput> outs;
  try {
    outs = prog.body(s);
  } catch (const RoundBudgetExceeded&) {
    return {std::nullopt, cap + 1};
  }
  if (s.stats().rounds_used > cap) return {std::nullopt, s.stats().rounds_used};
  // Members are whatever nodes claim; edges count when either endpoint claims.
  if (p.shape() == Shape::kVertexSet) {
    std::vector<NodeId> members;
    for (std::size_t v = 0; v < outs.size(); ++v) {
      if (outs[v].in_solution) members.push_back(g.id(v));
    }
    return {Solution::of_vertices(p, std::move(members)), s.stats().rounds_used};
  }
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < outs.size(); ++v) {
    const NodeId a = g.id(v);
    for (NodeId b : outs[v].solution_neighbors) {
      if (!g.directed()) {
        edges.push_back({a, b});
        continue;
      }
      if (g.has_edge(a, b)) edges.push_back({a, b});
      if (g.has_edge(b, a)) edges.push_back({b, a});
    }
  }
  return {Solution::of_edges(p, std::move(edges)), s.stats().rounds_used};
}

inline bool feasible(const Graph& g, const Solution& s) {
  try {
    return is_feasible(g, s);
  } catch (const OracleError&) {
    return false;
  }
}

inline std::int64_t signed_gap(Problem p, std::size_t got, std::size_t opt) {
  const auto a = static_cast<std::int64_t>(got);
  const auto b = static_cast<std::int64_t>(opt);
  return p.kind() == Kind::kMin ? a - b : b - a;
}

inline const Solution& reference_for(const ReferenceSets& ref, Problem p) {
  switch (p.tag) {
    case ProblemTag::kMVC: return ref.mvc;
    case ProblemTag::kMaxM: return ref.maxm;
    case ProblemTag::kMaxIS: return ref.maxis;
    case ProblemTag::kMDS: return ref.mds;
    case ProblemTag::kMEDS: return ref.meds;
    default: throw std::invalid_argument("no reference set for " + std::string(p.name()));
  }
}

// Path owning each member: path nodes and path edges belong to their path,
// an edge {v0, v_{i,0}} to path i (for MEDS to the center, since the optimum
// may put its center edge on any path). Center members return r.
inline std::vector<std::size_t> per_path_counts(const PathStarLabeling& lab, const Solution& s) {
  std::map<NodeId, std::size_t> owner;
  for (std::size_t i = 0; i < lab.r; ++i) {
    for (NodeId v : lab.paths[i]) owner[v] = i;
  }
  owner[lab.center] = lab.r;
  std::vector<std::size_t> counts(lab.r + 1, 0);
  for (NodeId v : s.vertices) ++counts[owner.at(v)];
  for (const Edge& e : s.edges) {
    const std::size_t a = owner.count(e.u) ? owner.at(e.u) : lab.r;
    const std::size_t b = owner.count(e.v) ? owner.at(e.v) : lab.r;
    std::size_t path = std::min(a, b);
    if (s.problem == kMEDS && (a == lab.r || b == lab.r)) path = lab.r;
    ++counts[path];
  }
  return counts;
}

struct Scored {
  InputRecord input;
  std::vector<std::int64_t> path_error;  // per path; meaningless when infeasible
  std::optional<std::string> disqualified;
};

}  // namespace detail

// Runs `prog` on the labeled path star and scores it path by path.
inline detail::Scored score_labeling(const CandidateProgram& prog, Problem p, const PathStarLabeling& lab,
                                     std::size_t cap, std::uint64_t seed = 0, std::string name = "") {
  const Graph g = build_path_star(lab, false);
  const ReferenceSets sets = opt_reference_sets(lab);
  const Solution& ref = detail::reference_for(sets, p);
  detail::Scored sc;
  sc.input.name = std::move(name);
  sc.input.opt_size = ref.size();
  const auto ran = detail::run_candidate(prog, g, p, cap, seed);
  sc.input.rounds = ran.rounds;
  if (!ran.solution) {
    sc.disqualified = prog.name + " exceeded " + std::to_string(cap) + " rounds";
    return sc;
  }
  const Solution& out = *ran.solution;
  sc.input.solution_size = out.size();
  sc.input.feasible = detail::feasible(g, out);
  sc.input.additive_error = detail::signed_gap(p, out.size(), ref.size());
  const auto got = detail::per_path_counts(lab, out);
  const auto want = detail::per_path_counts(lab, ref);
  for (std::size_t i = 0; i < lab.r; ++i) sc.path_error.push_back(detail::signed_gap(p, got[i], want[i]));
  return sc;
}

enum class AttackMode { kExhaustive, kPerPath };

inline AdversaryReport reversal_attack(const CandidateProgram& prog, Problem p, std::size_t r, std::size_t x,
                                       AttackMode mode, std::uint64_t seed = 0) {
  if (x % 6 != 0) throw std::invalid_argument("reversal_attack needs x divisible by 6");
  if (mode == AttackMode::kExhaustive && r > 12) throw std::invalid_argument("exhaustive mode needs r <= 12");
  const Segment seg = segment_for(p);
  const PathStarLabeling base = default_path_star_labeling(r, 2 * x + 3);
  AdversaryReport rep;
  rep.attack = mode == AttackMode::kExhaustive ? "reversal-exhaustive" : "reversal-per-path";
  rep.program = prog.name;
  rep.problem = p;
  rep.views_identical = reversal_views_identical(r, x, seg);

  auto path_ok = [](const detail::Scored& sc, std::size_t i) {
    return sc.input.feasible && sc.path_error[i] == 0;
  };
  const detail::Scored first = score_labeling(prog, p, base, x, seed, "base");
  rep.inputs_tried = 1;
  if (first.disqualified) {
    rep.disqualified = first.disqualified;
    return rep;
  }
  rep.inputs.push_back(first.input);

  if (mode == AttackMode::kPerPath) {
    rep.max_additive_error = first.input.additive_error;
    for (std::size_t i = 0; i < r; ++i) {
      const auto sc = score_labeling(prog, p, reverse_segment(base, i, seg), x, seed,
                                     "reverse-" + std::to_string(i));
      ++rep.inputs_tried;
      if (sc.disqualified) {
        rep.disqualified = sc.disqualified;
        return rep;
      }
      rep.inputs.push_back(sc.input);
      rep.max_additive_error = std::max(rep.max_additive_error, sc.input.additive_error);
      const bool ok0 = path_ok(first, i);
      const bool ok1 = path_ok(sc, i);
      rep.paths.push_back({i, ok0 ? 1 : 0, ok0 && ok1, std::max(first.path_error[i], sc.path_error[i])});
    }
  } else {
    std::uint64_t worst_mask = 0;
    detail::Scored worst = first;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
      auto sc = score_labeling(prog, p, reverse_segments(base, mask, seg), x, seed, "mask-" + std::to_string(mask));
      ++rep.inputs_tried;
      if (sc.disqualified) {
        rep.disqualified = sc.disqualified;
        return rep;
      }
      if (sc.input.additive_error > worst.input.additive_error) {
        worst = std::move(sc);
        worst_mask = mask;
      }
    }
    if (worst_mask != 0) rep.inputs.push_back(worst.input);
    rep.max_additive_error = worst.input.additive_error;
    for (std::size_t i = 0; i < r; ++i) {
      rep.paths.push_back({i, static_cast<int>((worst_mask >> i) & 1U), path_ok(worst, i), worst.path_error[i]});
    }
  }
  for (const auto& pr : rep.paths) rep.suboptimal_paths += !pr.optimal;
  return rep;
}

// Uniform sampler over the 2^r reversal subsets of the path star. A single
// path (r = 1) is allowed here, for calibration.
class ReversalSampler {
 public:
  struct Draw {
    std::uint64_t mask = 0;
    PathStarLabeling labeling;
  };

  ReversalSampler(std::size_t r, std::size_t x, Problem p, std::uint64_t seed)
      : base_(block_labeling(r, 2 * x + 3)), seg_(segment_for(p)), rng_(seed),
        dist_(0, r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1) {}

  Draw next() {
    const std::uint64_t mask = dist_(rng_);
    return {mask, reverse_segments(base_, mask, seg_)};
  }
  const PathStarLabeling& base() const { return base_; }

 private:
  static PathStarLabeling block_labeling(std::size_t r, std::size_t ell) {
    if (r == 0) throw std::invalid_argument("sampler needs r >= 1");
    PathStarLabeling lab = default_path_star_labeling(std::max<std::size_t>(r, 2), ell);
    lab.r = r;
    lab.paths.resize(r);
    lab.center = static_cast<NodeId>(r * (ell + 1));
    return lab;
  }

  PathStarLabeling base_;
  Segment seg_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::uint64_t> dist_;
};

inline ReversalSampler random_reversal_distribution(std::size_t r, std::size_t x, Problem p, std::uint64_t seed) {
  return ReversalSampler(r, x, p, seed);
}

// Runs the capped program on the cycle star G1 and its tree variant T1 and
// records, for each hub neighbor v_i, whether it was covered: v_i itself for
// MFVS, the arc v' -> v_i for MFES. An uncovered v_i is an error on G1 and a
// covered one an error on T1.
inline AdversaryReport cycle_vs_tree_attack(const CandidateProgram& prog, Problem p, std::size_t k, std::size_t t,
                                            std::size_t d, std::optional<std::size_t> round_cap = std::nullopt,
                                            std::uint64_t seed = 0) {
  if (p != kMFVS && p != kMFES) throw std::invalid_argument("cycle_vs_tree_attack handles MFVS and MFES");
  check_cycle_star_params(k, t, d);
  const bool directed = p == kMFES;
  const std::size_t cap = round_cap.value_or(d / 2 - 2);
  const Graph g1 = make_cycle_star(k, t, d, directed).graph;
  const Graph t1 = make_cycle_star_tree(k, t, d, directed);
  const CycleStarIds ids{k, t, d};

  AdversaryReport rep;
  rep.attack = "cycle-tree";
  rep.program = prog.name;
  rep.problem = p;
  rep.views_identical = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (view_string(g1, ids.spoke(i), cap) != view_string(t1, ids.spoke(i), cap)) rep.views_identical = false;
  }

  std::vector<std::vector<char>> covered;
  const std::pair<const Graph*, const char*> inputs[] = {{&g1, "G1"}, {&t1, "T1"}};
  for (const auto& [g, name] : inputs) {
    const auto ran = detail::run_candidate(prog, *g, p, cap, seed);
    ++rep.inputs_tried;
    if (!ran.solution) {
      rep.disqualified = prog.name + " exceeded " + std::to_string(cap) + " rounds";
      return rep;
    }
    const Solution& s = *ran.solution;
    std::vector<char> cov(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      cov[i] = directed ? std::binary_search(s.edges.begin(), s.edges.end(), Edge{ids.hub(), ids.spoke(i)})
                        : std::binary_search(s.vertices.begin(), s.vertices.end(), ids.spoke(i));
    }
    InputRecord in;
    in.name = name;
    in.solution_size = s.size();
    in.opt_size = g == &g1 ? k : 0;
    in.feasible = detail::feasible(*g, s);
    in.rounds = ran.rounds;
    for (std::size_t i = 0; i < k; ++i) in.additive_error += g == &g1 ? !cov[i] : cov[i];
    rep.inputs.push_back(in);
    covered.push_back(std::move(cov));
  }
  for (std::size_t i = 0; i < k; ++i) {
    const bool miss_g = !covered[0][i];
    const bool miss_t = covered[1][i];
    rep.paths.push_back({i, miss_g ? 0 : (miss_t ? 1 : 0), !miss_g && !miss_t,
                         static_cast<std::int64_t>(miss_g) + static_cast<std::int64_t>(miss_t)});
    rep.suboptimal_paths += miss_g || miss_t;
  }
  rep.max_additive_error = std::max(rep.inputs[0].additive_error, rep.inputs[1].additive_error);
  return rep;
}

// ---------------------------------------------------------------------------
// Programs shipped with the harness.

// floor(x/2) greedy matching iterations; matched nodes and free nodes with a
// free neighbor form the cover, which is therefore always feasible.
inline CandidateProgram truncated_greedy_mvc(std::size_t x) {
  return {"truncated-greedy-mvc", [x](Session& s) {
            const auto m = greedy_matching(s, x / 2);
            std::vector<NodeOutput> outs(s.size());
            for (std::size_t v = 0; v < s.size(); ++v) {
              bool join = m.mate[v] != kNoPort;
              for (char matched : m.nbr_matched[v]) join = join || !matched;
              outs[v] = {Verdict::kAccept, join, {}};
            }
            return outs;
          }};
}

// Collects the whole graph at a leader, solves it exactly and broadcasts the
// answer. Undirected problems only.
inline CandidateProgram collect_and_solve(Problem p) {
  return {"collect-and-solve", [p](Session& s) {
            const Graph& g = s.graph();
            const std::size_t n = g.num_nodes();
            const auto ids = discover(s);
            const auto tree = leader_and_bfs(s, n);
            const auto edges = collect_graph(s, tree, ids, [](std::size_t, std::size_t) { return true; });
            const std::size_t root = root_index(tree);
            PerNode<std::vector<std::uint64_t>> payload(n);
            const Solution opt = opt_solution(Graph::from_edges(false, {g.id(root)}, edges), p);
            payload[root].assign(opt.vertices.begin(), opt.vertices.end());
            for (const Edge& e : opt.edges) payload[root].insert(payload[root].end(), {e.u, e.v});
            const auto heard = broadcast(s, "decide", tree, payload, 1, s.network().id_bits);
            std::vector<NodeOutput> outs(n);
            for (std::size_t v = 0; v < n; ++v) {
              const auto& msg = heard[v];
              outs[v].verdict = Verdict::kAccept;
              if (p.shape() == Shape::kVertexSet) {
                outs[v].in_solution = std::find(msg.begin(), msg.end(), g.id(v)) != msg.end();
                continue;
              }
              for (std::size_t i = 0; i + 1 < msg.size(); i += 2) {
                if (msg[i] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i + 1]);
                if (msg[i + 1] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i]);
              }
            }
            return outs;
          }};
}

}  // namespace kparam
