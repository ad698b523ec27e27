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

// Distributed parameterized algorithms.
//
// Every algorithm runs inside one Session and ends with a NodeOutput per
// node; the common verdict is assembled by unanimous_verdict. Quantities
// that only the leader knows (collected records, counts it received) are
// read from the root's entry, everything else from the node's own entry.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "kparam/oracles.hpp"
#include "kparam/primitives.hpp"

namespace kparam {

// Exact rational in (0, 1], for approximation parameters.
struct Rational {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // floor and ceil of k * (a / b) for a rational a/b.
  static std::uint64_t floor_of(std::uint64_t k, std::uint64_t a, std::uint64_t b) { return k * a / b; }
  static std::uint64_t ceil_of(std::uint64_t k, std::uint64_t a, std::uint64_t b) { return (k * a + b - 1) / b; }
  friend bool operator==(const Rational& x, const Rational& y) { return x.num * y.den == y.num * x.den; }
  friend bool operator<(const Rational& x, const Rational& y) { return x.num * y.den < y.num * x.den; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
};

inline std::string to_string(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

enum class FingerprintMode {
  kOff,     // identifiers throughout
  kDetect,  // fingerprints; the leader detects collisions and reruns with ids
  kRaw,     // fingerprints without detection (Monte Carlo)
};

struct ParamConfig {
  std::size_t k = 0;
  std::optional<Rational> eps;
  Model model = Model::congest();
  std::uint64_t seed = 0;
  unsigned fingerprint_c = 3;
  FingerprintMode fingerprints = FingerprintMode::kOff;
  std::optional<unsigned> fingerprint_bits;  // overrides the width derived from k and c
  std::optional<std::size_t> round_budget;  // default: the algorithm's watchdog
};

struct ParamRun {
  Problem problem;
  ParamVerdict result;
  std::vector<NodeOutput> outputs;
  RunStats stats;
  std::vector<PhaseRecord> phases;
  std::size_t round_budget = 0;
  std::size_t fingerprint_reruns = 0;
  bool large_diameter = false;  // the probe answered LARGE

  Verdict verdict() const { return result.verdict; }
  std::size_t solution_size() const { return result.solution ? result.solution->size() : 0; }
  // Total bits over phases whose name starts with `prefix`.
  std::size_t total_bits(const std::string& prefix) const {
    std::size_t sum = 0;
    for (const auto& p : phases) {
      if (p.name.rfind(prefix, 0) == 0) sum += p.stats.total_bits;
    }
    return sum;
  }
  // Peak message size over phases whose name starts with `prefix`.
  std::size_t peak_bits(const std::string& prefix) const {
    std::size_t peak = 0;
    for (const auto& p : phases) {
      if (p.name.rfind(prefix, 0) == 0) peak = std::max(peak, p.stats.peak_message_bits);
    }
    return peak;
  }
};

// Constant c_P with "a k-sized solution forces D <= c_P k".
inline std::size_t dlb_constant(Problem p) {
  switch (p.tag) {
    case ProblemTag::kMVC:
      return 2;
    case ProblemTag::kMDS:
    case ProblemTag::kMEDS:
      return 3;
    default:
      throw std::invalid_argument(std::string("not a DLB minimization problem: ") + std::string(p.name()));
  }
}

inline unsigned fingerprint_bits_mvc(std::size_t k, unsigned c) {
  return std::min(62U, (c + 4) * ceil_log2(std::max<std::size_t>(k, 1)) + 1);
}
inline unsigned fingerprint_bits_maxm(std::size_t k, unsigned c) {
  return std::min(62U, (c + 2) * ceil_log2(std::max<std::size_t>(k, 1)) + 4);
}

// Fingerprints only pay off below the identifier width; otherwise nodes keep
// their identifiers.
inline FingerprintMode effective_mode(FingerprintMode m, unsigned bits, const Network& net) {
  return bits < net.id_bits ? m : FingerprintMode::kOff;
}

// Node-local fingerprint, a function of (global seed, identifier) only.
inline std::uint64_t fingerprint(std::uint64_t seed, NodeId id, unsigned bits) {
  return splitmix64(node_seed(seed, id) ^ 0xD6E8FEB86659FD93ULL) & ((std::uint64_t{1} << bits) - 1);
}

// ---------------------------------------------------------------------------
// Watchdog budgets: closed-form bounds of each phase, doubled.

struct BudgetCalc {
  std::size_t n;
  Model model;

  // Messages needed to stream `records` records.
  std::size_t messages(std::size_t records, unsigned width, unsigned fields) const {
    return ceil_div(records * fields, stream_chunk(model.bandwidth(n), width, fields));
  }
  static std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }
  std::size_t probe(std::size_t k) const { return 3 * k + 1; }
  std::size_t bfs(std::size_t bound) const { return bound + 1; }
  std::size_t count(std::size_t depth) const { return 2 * depth + 1; }
  std::size_t up(std::size_t depth, std::size_t records, unsigned width, unsigned fields) const {
    return depth + messages(records, width, fields) + 1;
  }
  std::size_t down(std::size_t depth, std::size_t records, unsigned width, unsigned fields) const {
    return depth + messages(records, width, fields) + 1;
  }
  static unsigned id_bits() { return 64; }  // identifiers may use the full range
};

inline std::size_t mvc_core_budget(const BudgetCalc& b, std::size_t depth, std::size_t k, bool fingerprints) {
  const unsigned w = b.id_bits();
  std::size_t r = (k + 2) * (1 + b.count(depth)) + b.count(depth);
  const std::size_t ids_pass = b.up(depth, k * k, w, 2) + b.down(depth, k + 1, w, 1);
  r += ids_pass;
  if (fingerprints) r += 1 + b.up(depth, 2 * k * k, w, 1) + ids_pass;
  return r;
}

inline std::size_t augment_budget(const BudgetCalc& b, std::size_t depth, std::size_t k, std::size_t iterations,
                                  bool fingerprints) {
  const unsigned w = b.id_bits();
  const std::size_t vm = 2 * k;
  const std::size_t records = vm + vm * vm + k + 2 * vm;
  const std::size_t iter = 1 + b.up(depth, records, w + 2, 2) + b.down(depth, 2 * vm + 3, w, 1) + 1;
  return (iterations + (fingerprints ? 2 : 0)) * iter + (fingerprints ? 1 : 0);
}

inline std::size_t budget_kmvc_exact(std::size_t n, std::size_t k, const Model& m, bool fp) {
  const BudgetCalc b{n, m};
  const std::size_t d = 4 * k;
  return 2 * (1 + b.probe(2 * k) + b.bfs(d) + mvc_core_budget(b, d, k, fp) + b.count(d)) + 4;
}

inline std::size_t budget_kmaxm_exact(std::size_t n, std::size_t k, const Model& m, bool fp) {
  const BudgetCalc b{n, m};
  const std::size_t d = 6 * k;
  return 2 * (1 + b.probe(3 * k) + b.bfs(d) + 2 * k + b.count(d) + augment_budget(b, d, k, k, fp)) + 4;
}

inline std::size_t budget_kmvc_2eps(std::size_t n, std::size_t k, const Model& m) {
  const BudgetCalc b{n, m};
  const std::size_t d = 4 * k;
  const unsigned w = b.id_bits();
  return 2 * (1 + b.probe(2 * k) + b.bfs(d) + 2 * (k + 1) + b.count(d) + b.up(d, k, w, 2) +
              b.down(d, 2 * k + 1, w, 1) + mvc_core_budget(b, d, k, false) + b.count(d)) +
         4;
}

inline std::size_t budget_kmaxm_2eps(std::size_t n, std::size_t k, const Model& m, std::size_t cap) {
  const BudgetCalc b{n, m};
  const std::size_t d = 6 * k;
  const unsigned w = b.id_bits();
  return 2 * (1 + b.probe(3 * k) + b.bfs(d) + 2 * k + 2 * b.count(d) + b.up(d, k, w, 2) +
              b.down(d, 2 * k + 1, w, 1) + augment_budget(b, d, k, cap, false)) +
         4;
}

inline std::size_t budget_local(std::size_t k, std::size_t c) {
  const std::size_t d = 2 * c * k;
  return 2 * (1 + 3 * c * k + 1 + d + 1 + 2 * (d + 2) + 2 * k) + 4;
}

namespace detail {

inline ParamRun finish(const Graph& g, Problem p, Session& s, std::vector<NodeOutput> outs,
                       std::size_t budget) {
  ParamRun r;
  r.problem = p;
  r.result = unanimous_verdict(g, p, outs);
  r.outputs = std::move(outs);
  r.stats = s.stats();
  r.phases = s.phases();
  r.round_budget = budget;
  return r;
}

inline std::vector<NodeOutput> all_reject(std::size_t n) { return std::vector<NodeOutput>(n); }

inline bool probe_says_large(const PerNode<DiameterVerdict>& v) {
  for (auto x : v) {
    if (x != v[0]) throw std::logic_error("diameter probe was not unanimous");
  }
  return v[0] == DiameterVerdict::kLarge;
}

inline PerNode<std::uint64_t> owned_matched_edges(const Graph& g, const PerPort<NodeId>& ids,
                                                  const PerNode<std::size_t>& mate) {
  PerNode<std::uint64_t> c(g.num_nodes(), 0);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (mate[v] != kNoPort && g.id(v) < ids[v][mate[v]]) c[v] = 1;
  }
  return c;
}

// Outputs of an accepted matching: each matched node names its mate.
inline std::vector<NodeOutput> matching_outputs(const Graph& g, const PerPort<NodeId>& ids,
                                                const PerNode<std::size_t>& mate) {
  std::vector<NodeOutput> outs(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    outs[v].verdict = Verdict::kAccept;
    if (mate[v] != kNoPort) outs[v].solution_neighbors = {ids[v][mate[v]]};
  }
  return outs;
}

// Collects the subgraph induced by the active nodes (each node: its flag and
// the per-port flag of the neighbor), decides at the leader, broadcasts.
// Shared by the exact and the (2-eps) vertex cover algorithms.
struct MvcCore {
  Session& s;
  const PerNode<TreeInfo>& tree;
  const PerPort<NodeId>& ids;
  std::size_t k;
  FingerprintMode fp_mode;
  unsigned fp_bits;
  std::uint64_t seed;
  std::size_t reruns = 0;

  enum : std::uint64_t { kCodeNo = 0, kCodeYes = 1, kCodeRerun = 2 };

  // Returns per node: accept flag and cover membership.
  std::pair<PerNode<char>, PerNode<char>> run(PerNode<char> active, PerPort<char> port_active) {
    const Graph& g = s.graph();
    const std::size_t n = g.num_nodes();
    PerNode<char> forced(n, 0), accept(n, 0), cover(n, 0);

    // Kernel sweeps: degree > k forces membership; repeat until no node joins.
    while (true) {
      PerNode<char> joined(n, 0);
      PerPort<char> send(n);
      for (std::size_t v = 0; v < n; ++v) {
        send[v].assign(g.degree(v), 0);
        if (!active[v]) continue;
        const auto deg = static_cast<std::size_t>(std::count(port_active[v].begin(), port_active[v].end(), 1));
        if (deg > k) {
          joined[v] = 1;
          send[v] = port_active[v];
        }
      }
      const auto heard = notify(s, "kernel-sweep", send);
      for (std::size_t v = 0; v < n; ++v) {
        if (joined[v]) {
          active[v] = 0;
          forced[v] = 1;
        }
        for (std::size_t p = 0; p < heard[v].size(); ++p) {
          if (heard[v][p]) port_active[v][p] = 0;
        }
      }
      PerNode<std::vector<std::uint64_t>> counts(n);
      for (std::size_t v = 0; v < n; ++v) counts[v] = {static_cast<std::uint64_t>(forced[v]), static_cast<std::uint64_t>(joined[v])};
      const auto r = threshold_count(s, "kernel-count", tree, counts, {k, 0});
      if (r.exceeds[0][0]) return {accept, cover};  // more than k forced: reject everywhere
      if (!r.exceeds[0][1]) break;
    }

    // At most k^2 edges may remain.
    PerNode<std::uint64_t> owned(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (!active[v]) continue;
      for (std::size_t p = 0; p < ids[v].size(); ++p) {
        if (port_active[v][p] && g.id(v) < ids[v][p]) ++owned[v];
      }
    }
    PerNode<std::vector<std::uint64_t>> c2(n);
    for (std::size_t v = 0; v < n; ++v) c2[v] = {owned[v], static_cast<std::uint64_t>(forced[v])};
    const auto er = threshold_count(s, "kernel-edges", tree, c2, {static_cast<std::uint64_t>(k) * k, k});
    if (er.exceeds[0][0]) return {accept, cover};
    const std::size_t root = root_index(tree);
    const std::size_t forced_total = er.capped_totals.at(1);  // exact: it did not exceed k

    bool use_fp = fp_mode != FingerprintMode::kOff;
    PerPort<std::uint64_t> nbr_fp(n);
    if (use_fp) {
      PerPort<std::optional<std::uint64_t>> vals(n);
      for (std::size_t v = 0; v < n; ++v) vals[v].assign(g.degree(v), fingerprint(seed, g.id(v), fp_bits));
      const auto got = exchange(s, "fingerprint-exchange", vals, fp_bits);
      for (std::size_t v = 0; v < n; ++v) {
        for (const auto& x : got[v]) nbr_fp[v].push_back(*x);
      }
    }

    while (true) {
      const unsigned vw = use_fp ? fp_bits : s.network().id_bits;
      auto own_val = [&](std::size_t v) { return use_fp ? fingerprint(seed, g.id(v), fp_bits) : g.id(v); };
      auto nbr_val = [&](std::size_t v, std::size_t p) { return use_fp ? nbr_fp[v][p] : ids[v][p]; };
      PerNode<char> in_kernel(n, 0);
      for (std::size_t v = 0; v < n; ++v) {
        in_kernel[v] = active[v] && std::count(port_active[v].begin(), port_active[v].end(), 1) > 0;
      }

      bool collision = false;
      if (use_fp && fp_mode == FingerprintMode::kDetect) {
        PerNode<std::vector<std::uint64_t>> selfs(n);
        for (std::size_t v = 0; v < n; ++v) {
          if (in_kernel[v]) selfs[v] = {own_val(v)};
        }
        const auto got = pipelined_upcast(s, "collect-fp-self", tree, selfs, 1, vw);
        std::vector<std::uint64_t> all = got[root];
        std::sort(all.begin(), all.end());
        collision = std::adjacent_find(all.begin(), all.end()) != all.end();
      }

      PerNode<std::vector<std::uint64_t>> items(n);
      if (!collision) {
        for (std::size_t v = 0; v < n; ++v) {
          if (!active[v]) continue;
          for (std::size_t p = 0; p < ids[v].size(); ++p) {
            if (port_active[v][p] && g.id(v) < ids[v][p]) {
              items[v].push_back(own_val(v));
              items[v].push_back(nbr_val(v, p));
            }
          }
        }
      }
      const auto got = pipelined_upcast(s, use_fp ? "collect-kernel-fp" : "collect-kernel", tree, items, 2, vw);

      // Leader: solve within the remaining budget.
      PerNode<std::vector<std::uint64_t>> payload(n);
      {
        std::vector<std::uint64_t>& out = payload[root];
        if (collision) {
          out = {kCodeRerun};
        } else {
          std::set<NodeId> loops;
          std::vector<Edge> edges;
          for (const auto& r : split_records(got[root], 2)) {
            if (r[0] == r[1]) {
              loops.insert(r[0]);
            } else {
              edges.push_back(normalized({r[0], r[1]}));
            }
          }
          std::sort(edges.begin(), edges.end());
          edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
          std::vector<Edge> rest;
          for (const Edge& e : edges) {
            if (!loops.count(e.u) && !loops.count(e.v)) rest.push_back(e);
          }
          const std::size_t budget = k - std::min(k, forced_total);
          std::optional<std::vector<NodeId>> sol;
          if (loops.size() <= budget) {
            sol = vertex_cover_within(Graph::from_edges(false, {}, rest), budget - loops.size());
          }
          if (sol) {
            out = {kCodeYes};
            out.insert(out.end(), loops.begin(), loops.end());
            out.insert(out.end(), sol->begin(), sol->end());
          } else {
            out = {kCodeNo};
          }
        }
      }
      const auto heard = broadcast(s, use_fp ? "decide-fp" : "decide", tree, payload, 1, std::max(vw, 2U));
      const std::uint64_t code = heard[0].at(0);
      if (code == kCodeRerun) {
        ++reruns;
        use_fp = false;
        continue;
      }
      for (std::size_t v = 0; v < n; ++v) {
        const auto& msg = heard[v];
        accept[v] = msg.at(0) == kCodeYes;
        const bool member = in_kernel[v] && std::find(msg.begin() + 1, msg.end(), own_val(v)) != msg.end();
        cover[v] = accept[v] && (forced[v] || member);
      }
      return {accept, cover};
    }
  }
};

// Augmenting-path search at the leader: compares M with a maximum matching
// of the collected graph H (Berge) and walks the symmetric difference.
inline std::optional<std::vector<std::uint64_t>> find_augmenting_path(
    const std::set<std::uint64_t>& vertices, const std::set<std::pair<std::uint64_t, std::uint64_t>>& edges,
    const std::map<std::uint64_t, std::uint64_t>& mate_of) {
  const std::vector<std::uint64_t> vs(vertices.begin(), vertices.end());
  auto idx = [&](std::uint64_t x) {
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
  };
  using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BGraph h(vs.size());
  std::vector<std::vector<std::size_t>> adj(vs.size());
  for (const auto& [a, b] : edges) {
    boost::add_edge(idx(a), idx(b), h);
    adj[idx(a)].push_back(idx(b));
    adj[idx(b)].push_back(idx(a));
  }
  const std::size_t none = boost::graph_traits<BGraph>::null_vertex();
  std::vector<std::size_t> best(vs.size(), none);
  boost::edmonds_maximum_cardinality_matching(h, &best[0]);
  std::vector<std::size_t> cur(vs.size(), none);
  for (const auto& [a, b] : mate_of) cur[idx(a)] = idx(b);
  std::size_t best_size = 0, cur_size = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    best_size += best[i] != none;
    cur_size += cur[i] != none;
  }
  if (best_size <= cur_size) return std::nullopt;
  for (std::size_t start = 0; start < vs.size(); ++start) {
    if (cur[start] != none || best[start] == none) continue;
    std::vector<std::size_t> path{start};
    std::size_t at = start;
    bool use_best = true;
    while (path.size() <= vs.size()) {  // raw fingerprints may corrupt M
      const std::size_t next = use_best ? best[at] : cur[at];
      if (next == none) break;
      path.push_back(next);
      at = next;
      use_best = !use_best;
    }
    if (!use_best && cur[at] == none && path.size() <= vs.size()) {  // ended after an edge of the larger matching
      std::vector<std::uint64_t> out;
      for (std::size_t i : path) out.push_back(vs[i]);
      return out;
    }
  }
  return std::nullopt;
}

// Augmentation rounds over the active subgraph, starting from a maximal
// matching. The leader accumulates G_M plus the pendant picks, finds an
// augmenting path and broadcasts it until the target size is reached or no
// path exists.
struct Augmenter {
  Session& s;
  const PerNode<TreeInfo>& tree;
  const PerPort<NodeId>& ids;
  FingerprintMode fp_mode;
  unsigned fp_bits;
  std::uint64_t seed;
  std::size_t reruns = 0;

  enum : std::uint64_t { kNoPath = 0, kAugment = 1, kAugmentDone = 2, kAccept = 3, kRerun = 4 };
  enum : std::uint64_t { kRecNonMatching = 0, kRecMatching = 1, kRecPendant = 2, kRecSelf = 3 };

  // `mate` and `nbr_matched` are updated in place. `base` is the number of
  // frozen matching edges outside the active subgraph (leader knowledge).
  bool run(PerNode<std::size_t>& mate, PerPort<char>& nbr_matched, const PerNode<char>& active,
           const PerPort<char>& port_active, std::size_t target, std::size_t base, std::size_t max_iterations) {
    const Graph& g = s.graph();
    const std::size_t n = g.num_nodes();
    const std::size_t root = root_index(tree);
    bool use_fp = fp_mode != FingerprintMode::kOff;

    PerPort<std::uint64_t> nbr_fp(n);
    if (use_fp) {
      PerPort<std::optional<std::uint64_t>> vals(n);
      for (std::size_t v = 0; v < n; ++v) vals[v].assign(g.degree(v), fingerprint(seed, g.id(v), fp_bits));
      const auto got = exchange(s, "fingerprint-exchange", vals, fp_bits);
      for (std::size_t v = 0; v < n; ++v) {
        for (const auto& x : got[v]) nbr_fp[v].push_back(*x);
      }
    }

    // Leader state.
    std::set<std::uint64_t> vm;
    std::set<std::pair<std::uint64_t, std::uint64_t>> hm;
    std::map<std::uint64_t, std::uint64_t> leader_mate;

    PerNode<char> fresh(n, 0);  // became matched since the last report
    bool full = true;
    std::size_t iterations = 0;
    while (true) {
      if (iterations++ > max_iterations + reruns) throw std::logic_error("augmentation exceeded its iteration cap");
      const unsigned vw = use_fp ? fp_bits : s.network().id_bits;
      auto own_val = [&](std::size_t v) { return use_fp ? fingerprint(seed, g.id(v), fp_bits) : g.id(v); };
      auto nbr_val = [&](std::size_t v, std::size_t p) { return use_fp ? nbr_fp[v][p] : ids[v][p]; };
      if (full) {
        for (std::size_t v = 0; v < n; ++v) fresh[v] = active[v] && mate[v] != kNoPort;
      }

      // Each matched node picks up to two free neighbors with distinct values.
      PerPort<char> picks(n);
      for (std::size_t v = 0; v < n; ++v) {
        picks[v].assign(g.degree(v), 0);
        if (!active[v] || mate[v] == kNoPort) continue;
        std::vector<std::uint64_t> chosen;
        for (std::size_t p = 0; p < g.degree(v) && chosen.size() < 2; ++p) {
          if (!port_active[v][p] || nbr_matched[v][p]) continue;
          if (std::find(chosen.begin(), chosen.end(), nbr_val(v, p)) != chosen.end()) continue;
          chosen.push_back(nbr_val(v, p));
          picks[v][p] = 1;
        }
      }
      const auto pickers = notify(s, "augment-pick", picks);

      PerNode<std::vector<std::uint64_t>> items(n);
      for (std::size_t v = 0; v < n; ++v) {
        if (!active[v] || mate[v] == kNoPort) continue;
        auto rec = [&](std::uint64_t type, std::uint64_t a, std::uint64_t b) {
          items[v].insert(items[v].end(), {(type << vw) | a, b});
        };
        if (fresh[v]) {
          if (use_fp && fp_mode == FingerprintMode::kDetect) rec(kRecSelf, own_val(v), own_val(v));
          for (std::size_t p = 0; p < g.degree(v); ++p) {
            if (port_active[v][p] && nbr_matched[v][p]) rec(kRecNonMatching, own_val(v), nbr_val(v, p));
          }
        }
        if (full && g.id(v) < ids[v][mate[v]]) rec(kRecMatching, own_val(v), nbr_val(v, mate[v]));
        for (std::size_t p = 0; p < g.degree(v); ++p) {
          if (picks[v][p]) rec(kRecPendant, own_val(v), nbr_val(v, p));
        }
      }
      // Records are (type, a, b) with the 2-bit type above a's bits.
      const auto got = pipelined_upcast(s, use_fp ? "augment-report-fp" : "augment-report", tree, items, 2, vw + 2);

      // Leader.
      PerNode<std::vector<std::uint64_t>> payload(n);
      {
        std::vector<std::uint64_t>& out = payload[root];
        if (full) {
          vm.clear();
          hm.clear();
          leader_mate.clear();
        }
        bool collision = false;
        std::vector<std::uint64_t> selfs;
        std::set<std::pair<std::uint64_t, std::uint64_t>> pendants;
        for (const auto& r : split_records(got[root], 2)) {
          const auto a = r[0] & ((std::uint64_t{1} << vw) - 1), b = r[1];
          switch (r[0] >> vw) {
            case kRecSelf:
              selfs.push_back(a);
              collision = collision || vm.count(a) > 0;
              break;
            case kRecMatching:
              if (a == b || leader_mate.count(a) || leader_mate.count(b)) collision = true;
              leader_mate[a] = b;
              leader_mate[b] = a;
              vm.insert(a);
              vm.insert(b);
              hm.insert({std::min(a, b), std::max(a, b)});
              break;
            case kRecNonMatching:
              if (a == b) collision = true;
              hm.insert({std::min(a, b), std::max(a, b)});
              break;
            default:
              pendants.insert({a, b});
          }
        }
        std::sort(selfs.begin(), selfs.end());
        if (std::adjacent_find(selfs.begin(), selfs.end()) != selfs.end()) collision = true;
        for (std::uint64_t x : selfs) vm.insert(x);
        std::set<std::uint64_t> hv = vm;
        std::set<std::pair<std::uint64_t, std::uint64_t>> he = hm;
        for (const auto& [a, u] : pendants) {
          if (vm.count(u)) collision = true;
          hv.insert(u);
          he.insert({std::min(a, u), std::max(a, u)});
        }
        const std::size_t size = base + leader_mate.size() / 2;
        if (collision && use_fp && fp_mode == FingerprintMode::kDetect) {
          out = {kRerun};
        } else if (size >= target) {
          out = {kAccept};
        } else if (const auto path = find_augmenting_path(hv, he, leader_mate)) {
          const auto& pth = *path;
          for (std::size_t i = 0; i + 1 < pth.size(); i += 2) {
            leader_mate[pth[i]] = pth[i + 1];
            leader_mate[pth[i + 1]] = pth[i];
          }
          vm.insert(pth.front());
          vm.insert(pth.back());
          out = {size + 1 >= target ? kAugmentDone : kAugment};
          out.insert(out.end(), pth.begin(), pth.end());
        } else {
          out = {kNoPath};
        }
      }
      const auto heard = broadcast(s, use_fp ? "augment-path-fp" : "augment-path", tree, payload, 1,
                                   std::max(vw, 3U));
      const std::uint64_t code = heard[0].at(0);
      if (code == kRerun) {
        ++reruns;
        use_fp = false;
        full = true;
        continue;
      }
      if (code == kAccept) return true;
      if (code == kNoPath) return false;

      // Apply the augmentation: positions (0,1), (2,3), ... become matched.
      PerNode<char> newly(n, 0);
      for (std::size_t v = 0; v < n; ++v) {
        if (!active[v]) continue;
        const std::vector<std::uint64_t> path(heard[v].begin() + 1, heard[v].end());
        const std::size_t len = path.size();
        const std::uint64_t me = own_val(v);
        if (mate[v] != kNoPort) {
          std::size_t i = 1;
          while (i + 1 < len && path[i] != me) ++i;
          if (i + 1 >= len) continue;
          const std::size_t j = i ^ 1U;
          const bool to_pendant = j == 0 || j == len - 1;
          for (std::size_t p = 0; p < g.degree(v); ++p) {
            const bool eligible = to_pendant ? picks[v][p] != 0 : (port_active[v][p] && nbr_matched[v][p]);
            if (eligible && nbr_val(v, p) == path[j]) {
              mate[v] = p;
              break;
            }
          }
        } else {
          for (std::size_t end : {std::size_t{0}, len - 1}) {
            if (path[end] != me) continue;
            const std::uint64_t partner = path[end == 0 ? 1 : len - 2];
            for (std::size_t p = 0; p < g.degree(v); ++p) {
              if (pickers[v][p] && nbr_val(v, p) == partner) {
                mate[v] = p;
                newly[v] = 1;
                break;
              }
            }
            if (newly[v]) break;
          }
        }
      }
      PerPort<char> send(n);
      for (std::size_t v = 0; v < n; ++v) {
        send[v].assign(g.degree(v), 0);
        if (newly[v]) send[v] = port_active[v];
      }
      const auto notices = notify(s, "augment-notice", send);
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t p = 0; p < notices[v].size(); ++p) {
          if (notices[v][p]) nbr_matched[v][p] = 1;
        }
        fresh[v] = newly[v];
      }
      full = false;
      if (code == kAugmentDone) return true;
    }
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// LOCAL model.

// Diameter-gated collect-and-solve for MVC, MDS and MEDS.
inline ParamRun local_dlb_solve(const Graph& g, Problem p, const ParamConfig& cfg) {
  const std::size_t c = dlb_constant(p);
  const std::size_t k = cfg.k;
  const std::size_t budget = cfg.round_budget.value_or(budget_local(k, c));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  const std::size_t n = g.num_nodes();
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, c * k))) {
    ParamRun r = detail::finish(g, p, s, detail::all_reject(n), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 2 * c * k);
  const auto edges = collect_graph(s, tree, ids, [](std::size_t, std::size_t) { return true; });
  const std::size_t root = root_index(tree);
  PerNode<std::vector<std::uint64_t>> payload(n);
  {
    const Graph h = Graph::from_edges(false, {g.id(root)}, edges);
    const Solution opt = opt_solution(h, p);
    auto& out = payload[root];
    out = {opt.size() <= k ? 1U : 0U};
    if (opt.size() <= k) {
      for (NodeId v : opt.vertices) out.push_back(v);
      for (const Edge& e : opt.edges) out.insert(out.end(), {e.u, e.v});
    }
  }
  const auto heard = broadcast(s, "decide", tree, payload, 1, s.network().id_bits + 1);
  std::vector<NodeOutput> outs(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& msg = heard[v];
    if (msg.at(0) != 1) continue;
    outs[v].verdict = Verdict::kAccept;
    if (p.shape() == Shape::kVertexSet) {
      outs[v].in_solution = std::find(msg.begin() + 1, msg.end(), g.id(v)) != msg.end();
    } else {
      for (std::size_t i = 1; i + 1 < msg.size(); i += 2) {
        if (msg[i] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i + 1]);
        if (msg[i + 1] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i]);
      }
    }
  }
  return detail::finish(g, p, s, std::move(outs), budget);
}

// k-MaxM / k-MaxIS: large diameter guarantees that k greedy iterations
// suffice; otherwise collect and solve.
inline ParamRun local_kmax_greedy(const Graph& g, Problem p, const ParamConfig& cfg) {
  if (p != kMaxM && p != kMaxIS) throw std::invalid_argument("local_kmax_greedy handles MaxM and MaxIS");
  const std::size_t k = cfg.k;
  const std::size_t budget = cfg.round_budget.value_or(budget_local(k, 3));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  const std::size_t n = g.num_nodes();
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, 3 * k))) {
    std::vector<NodeOutput> outs;
    if (p == kMaxM) {
      outs = detail::matching_outputs(g, ids, greedy_matching(s, k).mate);
    } else {
      const auto in = greedy_independent_set(s, k, ids);
      outs.resize(n);
      for (std::size_t v = 0; v < n; ++v) outs[v] = {Verdict::kAccept, in[v] != 0, {}};
    }
    ParamRun r = detail::finish(g, p, s, std::move(outs), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 6 * k);
  const auto edges = collect_graph(s, tree, ids, [](std::size_t, std::size_t) { return true; });
  const std::size_t root = root_index(tree);
  PerNode<std::vector<std::uint64_t>> payload(n);
  {
    const Graph h = Graph::from_edges(false, {g.id(root)}, edges);
    const Solution opt = opt_solution(h, p);
    auto& out = payload[root];
    out = {opt.size() >= k ? 1U : 0U};
    if (opt.size() >= k) {
      for (NodeId v : opt.vertices) out.push_back(v);
      for (const Edge& e : opt.edges) out.insert(out.end(), {e.u, e.v});
    }
  }
  const auto heard = broadcast(s, "decide", tree, payload, 1, s.network().id_bits + 1);
  std::vector<NodeOutput> outs(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& msg = heard[v];
    if (msg.at(0) != 1) continue;
    outs[v].verdict = Verdict::kAccept;
    if (p == kMaxIS) {
      outs[v].in_solution = std::find(msg.begin() + 1, msg.end(), g.id(v)) != msg.end();
    } else {
      for (std::size_t i = 1; i + 1 < msg.size(); i += 2) {
        if (msg[i] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i + 1]);
        if (msg[i + 1] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i]);
      }
    }
  }
  return detail::finish(g, p, s, std::move(outs), budget);
}

// ---------------------------------------------------------------------------
// CONGEST, exact.

inline ParamRun congest_kmvc_exact(const Graph& g, const ParamConfig& cfg) {
  const std::size_t k = cfg.k;
  const bool fp = cfg.fingerprints != FingerprintMode::kOff;
  const std::size_t budget = cfg.round_budget.value_or(budget_kmvc_exact(g.num_nodes(), k, cfg.model, fp));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  const std::size_t n = g.num_nodes();
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, 2 * k))) {
    ParamRun r = detail::finish(g, kMVC, s, detail::all_reject(n), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 4 * k);
  const unsigned bits = cfg.fingerprint_bits.value_or(fingerprint_bits_mvc(k, cfg.fingerprint_c));
  detail::MvcCore core{s, tree, ids, k, effective_mode(cfg.fingerprints, bits, s.network()), bits, cfg.seed};
  PerPort<char> port_active(n);
  for (std::size_t v = 0; v < n; ++v) port_active[v].assign(g.degree(v), 1);
  auto [accept, cover] = core.run(PerNode<char>(n, 1), port_active);

  PerNode<std::uint64_t> members(n);
  for (std::size_t v = 0; v < n; ++v) members[v] = static_cast<std::uint64_t>(cover[v]);
  const auto over = threshold_count(s, "validate", tree, members, k);
  std::vector<NodeOutput> outs(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (accept[v] && !over[v]) outs[v] = {Verdict::kAccept, cover[v] != 0, {}};
  }
  ParamRun r = detail::finish(g, kMVC, s, std::move(outs), budget);
  r.fingerprint_reruns = core.reruns;
  return r;
}

inline ParamRun congest_kmaxm_exact(const Graph& g, const ParamConfig& cfg) {
  const std::size_t k = cfg.k;
  const std::size_t n = g.num_nodes();
  const bool fp = cfg.fingerprints != FingerprintMode::kOff;
  const std::size_t budget = cfg.round_budget.value_or(budget_kmaxm_exact(n, k, cfg.model, fp));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  if (k == 0) {
    return detail::finish(g, kMaxM, s, std::vector<NodeOutput>(n, NodeOutput{Verdict::kAccept, false, {}}), budget);
  }
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, 3 * k))) {
    const auto m = greedy_matching(s, k);
    ParamRun r = detail::finish(g, kMaxM, s, detail::matching_outputs(g, ids, m.mate), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 6 * k);
  auto m = greedy_matching(s, k);
  const auto big = threshold_count(s, "matching-size", tree, detail::owned_matched_edges(g, ids, m.mate), k - 1);
  if (big[0]) return detail::finish(g, kMaxM, s, detail::matching_outputs(g, ids, m.mate), budget);

  const unsigned bits = cfg.fingerprint_bits.value_or(fingerprint_bits_maxm(k, cfg.fingerprint_c));
  detail::Augmenter aug{s, tree, ids, effective_mode(cfg.fingerprints, bits, s.network()), bits, cfg.seed};
  PerPort<char> port_active(n);
  for (std::size_t v = 0; v < n; ++v) port_active[v].assign(g.degree(v), 1);
  const bool ok = aug.run(m.mate, m.nbr_matched, PerNode<char>(n, 1), port_active, k, 0, k);
  ParamRun r = detail::finish(g, kMaxM, s, ok ? detail::matching_outputs(g, ids, m.mate) : detail::all_reject(n), budget);
  r.fingerprint_reruns = aug.reruns;
  return r;
}

// ---------------------------------------------------------------------------
// CONGEST, (2 - eps)-approximations.

inline void check_eps(const ParamConfig& cfg) {
  if (!cfg.eps) throw std::invalid_argument("approximation variant needs eps");
  const Rational e = *cfg.eps;
  if (e.num == 0 || e.den < e.num) throw std::invalid_argument("eps must lie in (0, 1]");
  if (cfg.k > 0 && e < Rational::of(1, cfg.k)) throw std::invalid_argument("eps must be at least 1/k");
}

inline ParamRun congest_kmvc_2eps(const Graph& g, const ParamConfig& cfg) {
  check_eps(cfg);
  const std::size_t k = cfg.k;
  const Rational e = *cfg.eps;
  const std::size_t n = g.num_nodes();
  const std::size_t budget = cfg.round_budget.value_or(budget_kmvc_2eps(n, k, cfg.model));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, 2 * k))) {
    ParamRun r = detail::finish(g, kMVC, s, detail::all_reject(n), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 4 * k);
  const auto m = greedy_matching(s, k + 1);
  const auto owned = detail::owned_matched_edges(g, ids, m.mate);
  if (threshold_count(s, "matching-size", tree, owned, k)[0]) {
    return detail::finish(g, kMVC, s, detail::all_reject(n), budget);
  }
  // M is maximal with |M| <= k. Frozen part: floor(k(1-eps)) smallest edges.
  PerNode<std::vector<std::uint64_t>> items(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (owned[v]) items[v] = {g.id(v), ids[v][m.mate[v]]};
  }
  const unsigned w = s.network().id_bits;
  const auto got = pipelined_upcast(s, "collect-matching", tree, items, 2, w);
  const std::size_t root = root_index(tree);
  const std::size_t keep = Rational::floor_of(k, e.den - e.num, e.den);
  PerNode<std::vector<std::uint64_t>> payload(n);
  {
    std::vector<Edge> mm;
    for (const auto& r : split_records(got[root], 2)) mm.push_back({r[0], r[1]});
    std::sort(mm.begin(), mm.end());
    if (mm.size() <= keep) {
      payload[root] = {1};
    } else {
      payload[root] = {2};
      for (std::size_t i = 0; i < keep; ++i) payload[root].insert(payload[root].end(), {mm[i].u, mm[i].v});
    }
  }
  const auto heard = broadcast(s, "freeze", tree, payload, 1, std::max(w, 2U));
  PerNode<char> accept(n, 0), cover(n, 0);
  if (heard[0].at(0) == 1) {
    for (std::size_t v = 0; v < n; ++v) {
      accept[v] = 1;
      cover[v] = m.mate[v] != kNoPort;
    }
  } else {
    PerNode<char> active(n, 1);
    PerPort<char> port_active(n);
    for (std::size_t v = 0; v < n; ++v) {
      const std::set<std::uint64_t> frozen(heard[v].begin() + 1, heard[v].end());
      active[v] = !frozen.count(g.id(v));
      for (std::size_t p = 0; p < ids[v].size(); ++p) port_active[v].push_back(!frozen.count(ids[v][p]));
    }
    detail::MvcCore core{s, tree, ids, k - keep, FingerprintMode::kOff, 0, cfg.seed};
    auto [acc, cov] = core.run(active, port_active);
    for (std::size_t v = 0; v < n; ++v) {
      accept[v] = acc[v];
      cover[v] = acc[v] && (!active[v] || cov[v]);
    }
  }
  PerNode<std::uint64_t> members(n);
  for (std::size_t v = 0; v < n; ++v) members[v] = static_cast<std::uint64_t>(cover[v]);
  const std::size_t bound = Rational::floor_of(k, 2 * e.den - e.num, e.den);
  const auto over = threshold_count(s, "validate", tree, members, bound);
  std::vector<NodeOutput> outs(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (accept[v] && !over[v]) outs[v] = {Verdict::kAccept, cover[v] != 0, {}};
  }
  return detail::finish(g, kMVC, s, std::move(outs), budget);
}

inline std::size_t kmaxm_2eps_target(std::size_t k, const Rational& e) {
  return Rational::ceil_of(k, e.den, 2 * e.den - e.num);  // ceil(k / (2 - eps))
}

inline std::size_t kmaxm_2eps_frozen(std::size_t k, const Rational& e) {
  // max(floor(k/2 - 2k eps), 0) = floor(k (den - 4 num) / (2 den)) when positive.
  if (e.den <= 4 * e.num) return 0;
  return Rational::floor_of(k, e.den - 4 * e.num, 2 * e.den);
}

inline std::size_t kmaxm_2eps_cap(std::size_t k, const Rational& e) {
  return Rational::ceil_of(k, 6 * e.num, e.den) + 2;
}

inline ParamRun congest_kmaxm_2eps(const Graph& g, const ParamConfig& cfg) {
  check_eps(cfg);
  const std::size_t k = cfg.k;
  const Rational e = *cfg.eps;
  const std::size_t n = g.num_nodes();
  const std::size_t cap = kmaxm_2eps_cap(k, e);
  const std::size_t budget = cfg.round_budget.value_or(budget_kmaxm_2eps(n, k, cfg.model, cap));
  Session s(g, RunConfig{cfg.model, budget, cfg.seed});
  if (k == 0) {
    return detail::finish(g, kMaxM, s, std::vector<NodeOutput>(n, NodeOutput{Verdict::kAccept, false, {}}), budget);
  }
  const auto ids = discover(s);
  if (detail::probe_says_large(diameter_probe(s, 3 * k))) {
    const auto m = greedy_matching(s, k);
    ParamRun r = detail::finish(g, kMaxM, s, detail::matching_outputs(g, ids, m.mate), budget);
    r.large_diameter = true;
    return r;
  }
  const auto tree = leader_and_bfs(s, 6 * k);
  auto m = greedy_matching(s, k);
  const std::size_t target = kmaxm_2eps_target(k, e);
  auto owned = detail::owned_matched_edges(g, ids, m.mate);
  if (threshold_count(s, "matching-size", tree, owned, target - 1)[0]) {
    return detail::finish(g, kMaxM, s, detail::matching_outputs(g, ids, m.mate), budget);
  }
  PerNode<std::vector<std::uint64_t>> items(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (owned[v]) items[v] = {g.id(v), ids[v][m.mate[v]]};
  }
  const unsigned w = s.network().id_bits;
  const auto got = pipelined_upcast(s, "collect-matching", tree, items, 2, w);
  const std::size_t root = root_index(tree);
  std::size_t frozen_count = 0;
  PerNode<std::vector<std::uint64_t>> payload(n);
  {
    std::vector<Edge> mm;
    for (const auto& r : split_records(got[root], 2)) mm.push_back({r[0], r[1]});
    std::sort(mm.begin(), mm.end());
    frozen_count = std::min(mm.size(), kmaxm_2eps_frozen(k, e));
    for (std::size_t i = 0; i < frozen_count; ++i) payload[root].insert(payload[root].end(), {mm[i].u, mm[i].v});
  }
  const auto heard = broadcast(s, "freeze", tree, payload, 1, w);
  PerNode<char> active(n, 1);
  PerPort<char> port_active(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::set<std::uint64_t> frozen(heard[v].begin(), heard[v].end());
    active[v] = !frozen.count(g.id(v));
    for (std::size_t p = 0; p < ids[v].size(); ++p) port_active[v].push_back(!frozen.count(ids[v][p]));
  }
  detail::Augmenter aug{s, tree, ids, FingerprintMode::kOff, 0, cfg.seed};
  const bool ok = aug.run(m.mate, m.nbr_matched, active, port_active, target, frozen_count, cap);
  owned = detail::owned_matched_edges(g, ids, m.mate);
  const auto enough = threshold_count(s, "validate", tree, owned, target - 1);
  std::vector<NodeOutput> outs =
      ok && enough[0] ? detail::matching_outputs(g, ids, m.mate) : detail::all_reject(n);
  return detail::finish(g, kMaxM, s, std::move(outs), budget);
}

}  // namespace kparam
