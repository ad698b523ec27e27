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

// Distributed building blocks and the Session that sequences them.
//
// A multi-phase algorithm is a sequence of node programs separated by a
// global barrier. Drivers keep per-node vectors between phases; every
// program and every piece of driver glue reads and writes only the entry of
// its own node (plus what arrived in messages), so the composition is a
// legal distributed algorithm. Phase lengths are fixed or bounded in advance,
// which lets the leader schedule the barrier; the session just sums rounds.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kparam/sim.hpp"

namespace kparam {

inline constexpr std::size_t kNoPort = static_cast<std::size_t>(-1);

struct PhaseRecord {
  std::string name;
  RunStats stats;
};

class Session {
 public:
  Session(Graph g, RunConfig cfg) : graph_(std::move(g)), net_(graph_), cfg_(cfg) {}
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const Graph& graph() const { return graph_; }
  const Network& network() const { return net_; }
  const RunConfig& config() const { return cfg_; }
  std::size_t size() const { return graph().num_nodes(); }
  const RunStats& stats() const { return stats_; }
  const std::vector<PhaseRecord>& phases() const { return phases_; }

  // Runs one phase; the round budget is shared by all phases.
  template <NodeProgram P>
  std::vector<typename P::State> phase(std::string name, const P& program) {
    RunConfig c = cfg_;
    if (stats_.rounds_used > cfg_.round_budget) throw RoundBudgetExceeded(cfg_.round_budget);
    c.round_budget = cfg_.round_budget - stats_.rounds_used;
    SimResult<typename P::State> r;
    try {
      r = run(net_, program, c);
    } catch (const RoundBudgetExceeded&) {
      throw RoundBudgetExceeded(cfg_.round_budget);
    }
    stats_.absorb(r.stats);
    phases_.push_back({std::move(name), r.stats});
    return std::move(r.states);
  }

 private:
  Graph graph_;
  Network net_;
  RunConfig cfg_;
  RunStats stats_;
  std::vector<PhaseRecord> phases_;
};

template <class T>
using PerNode = std::vector<T>;
template <class T>
using PerPort = std::vector<std::vector<T>>;  // [node][port]

// ---------------------------------------------------------------------------
// One-round exchange: node v sends values[v][p] (if any) over port p.

struct Exchange {
  const PerPort<std::optional<std::uint64_t>>* values;
  unsigned width;

  struct State {
    std::vector<std::optional<std::uint64_t>> received;
  };
  State init(const NodeContext& ctx) const { return {std::vector<std::optional<std::uint64_t>>(ctx.degree)}; }
  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    if (round == 0) {
      const auto& mine = (*values)[ctx.index];
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (mine[p]) out[p] = Message{1, static_cast<std::uint8_t>(width), {*mine[p]}};
      }
      return false;
    }
    for (std::size_t p = 0; p < ctx.degree; ++p) {
      if (in[p]) s.received[p] = in[p]->items.at(0);
    }
    return true;
  }
};

inline PerPort<std::optional<std::uint64_t>> exchange(Session& s, const std::string& name,
                                                      const PerPort<std::optional<std::uint64_t>>& values,
                                                      unsigned width) {
  auto st = s.phase(name, Exchange{&values, width});
  PerPort<std::optional<std::uint64_t>> got(st.size());
  for (std::size_t v = 0; v < st.size(); ++v) got[v] = std::move(st[v].received);
  return got;
}

// Every node learns the identifier behind each of its ports.
inline PerPort<NodeId> discover(Session& s) {
  const Graph& g = s.graph();
  PerPort<std::optional<std::uint64_t>> vals(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) vals[v].assign(g.degree(v), g.id(v));
  const auto got = exchange(s, "discover", vals, s.network().id_bits);
  PerPort<NodeId> ids(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    for (const auto& x : got[v]) ids[v].push_back(*x);
  }
  return ids;
}

// Same port flag sent to a chosen set of ports; returns which ports heard it.
inline PerPort<char> notify(Session& s, const std::string& name, const PerPort<char>& send) {
  PerPort<std::optional<std::uint64_t>> vals(send.size());
  for (std::size_t v = 0; v < send.size(); ++v) {
    vals[v].resize(send[v].size());
    for (std::size_t p = 0; p < send[v].size(); ++p) {
      if (send[v][p]) vals[v][p] = 0;
    }
  }
  const auto got = exchange(s, name, vals, 0);
  PerPort<char> heard(send.size());
  for (std::size_t v = 0; v < got.size(); ++v) {
    for (const auto& x : got[v]) heard[v].push_back(x.has_value());
  }
  return heard;
}

// ---------------------------------------------------------------------------
// Diameter probe: SMALL if D <= k, LARGE if D >= 2k+1, unanimous otherwise.
// Exactly 3k+1 rounds.

enum class DiameterVerdict { kSmall, kLarge };

struct DiameterProbe {
  std::size_t k;

  struct State {
    NodeId x = 0, y = 0, z = 0;
    DiameterVerdict verdict = DiameterVerdict::kLarge;
  };
  State init(const NodeContext& ctx) const { return {ctx.id, ctx.id, ctx.id}; }
  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    const auto w = static_cast<std::uint8_t>(ctx.id_bits);
    for (const auto& m : in) {
      if (!m) continue;
      if (round <= k) {
        s.x = std::min(s.x, m->items[0]);
      } else {
        s.y = std::min(s.y, m->items[0]);
        s.z = std::max(s.z, m->items[1]);
      }
    }
    if (round < k) {
      for (auto& o : out) o = Message{1, w, {s.x}};
      return false;
    }
    if (round == k) s.y = s.z = s.x;
    if (round <= 3 * k) {
      for (auto& o : out) o = Message{2, w, {s.y, s.z}};
      return false;
    }
    s.verdict = s.y == s.z ? DiameterVerdict::kSmall : DiameterVerdict::kLarge;
    return true;
  }
};

inline PerNode<DiameterVerdict> diameter_probe(Session& s, std::size_t k) {
  const auto st = s.phase("probe", DiameterProbe{k});
  PerNode<DiameterVerdict> out;
  for (const auto& x : st) out.push_back(x.verdict);
  return out;
}

// ---------------------------------------------------------------------------
// Leader election and BFS tree, correct when the diameter is at most bound.
// bound+1 rounds.

struct TreeInfo {
  NodeId root = 0;
  std::size_t depth = 0;
  std::size_t parent = kNoPort;
  std::vector<std::size_t> children;
  bool is_root() const { return parent == kNoPort; }
};

struct LeaderBfs {
  std::size_t bound;

  struct State {
    NodeId leader = 0;
    std::size_t dist = 0;
    bool changed = true;
    std::vector<NodeId> nbr_leader;
    std::vector<std::size_t> nbr_dist;
    TreeInfo tree;
  };
  State init(const NodeContext& ctx) const {
    State s;
    s.leader = ctx.id;
    s.nbr_leader.assign(ctx.degree, kMaxNodeId);
    s.nbr_dist.assign(ctx.degree, 0);
    return s;
  }
  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    if (round <= bound) {
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (!in[p]) continue;
        const NodeId l = in[p]->items[0];
        const std::size_t d = in[p]->items[1];
        s.nbr_leader[p] = l;
        s.nbr_dist[p] = d;
        if (l < s.leader || (l == s.leader && d + 1 < s.dist)) {
          s.leader = l;
          s.dist = d + 1;
          s.changed = true;
        }
      }
    }
    if (round < bound) {
      if (s.changed) {
        const auto w = static_cast<std::uint8_t>(ctx.id_bits);
        for (auto& o : out) o = Message{1, w, {s.leader, s.dist}};
        s.changed = false;
      }
      return false;
    }
    if (round == bound) {
      s.tree.root = s.leader;
      s.tree.depth = s.dist;
      if (s.leader != ctx.id) {
        for (std::size_t p = 0; p < ctx.degree; ++p) {
          if (s.nbr_leader[p] == s.leader && s.nbr_dist[p] + 1 == s.dist) {
            s.tree.parent = p;
            break;
          }
        }
        if (s.tree.parent != kNoPort) out[s.tree.parent] = Message{2, 0, {}};
      }
      return false;
    }
    for (std::size_t p = 0; p < ctx.degree; ++p) {
      if (in[p]) s.tree.children.push_back(p);
    }
    return true;
  }
};

inline PerNode<TreeInfo> leader_and_bfs(Session& s, std::size_t bound) {
  auto st = s.phase("bfs", LeaderBfs{bound});
  PerNode<TreeInfo> out;
  for (auto& x : st) out.push_back(std::move(x.tree));
  return out;
}

// ---------------------------------------------------------------------------
// Pipelined convergecast of fixed-width records to the root.

enum : std::uint8_t { kTagData = 1, kTagLast = 2 };

struct Upcast {
  const PerNode<TreeInfo>* tree;
  const PerNode<std::vector<std::uint64_t>>* items;  // flat, `fields` items per record
  unsigned fields;
  unsigned width;

  struct State {
    std::vector<std::uint64_t> queue;  // root: everything collected
    std::size_t head = 0;
    std::size_t children_left = 0;
  };
  State init(const NodeContext& ctx) const {
    return {(*items)[ctx.index], 0, (*tree)[ctx.index].children.size()};
  }
  bool step(const NodeContext& ctx, State& s, std::size_t, const Mailbox& in,
            Mailbox& out) const {
    const TreeInfo& t = (*tree)[ctx.index];
    for (const auto& m : in) {
      if (!m) continue;
      s.queue.insert(s.queue.end(), m->items.begin(), m->items.end());
      if (m->tag == kTagLast) --s.children_left;
    }
    if (t.is_root()) return s.children_left == 0;
    const std::size_t cap = stream_chunk(ctx.bandwidth, width, fields);
    const std::size_t take = std::min(cap, s.queue.size() - s.head);
    const bool last = s.head + take == s.queue.size() && s.children_left == 0;
    if (take == 0 && !last) return false;
    Message m{last ? kTagLast : kTagData, static_cast<std::uint8_t>(width), {}};
    m.items.assign(s.queue.begin() + static_cast<std::ptrdiff_t>(s.head),
                   s.queue.begin() + static_cast<std::ptrdiff_t>(s.head + take));
    s.head += take;
    out[t.parent] = std::move(m);
    return last;
  }
};

// Flat item list gathered at each node; only the root's entry is complete.
inline PerNode<std::vector<std::uint64_t>> pipelined_upcast(
    Session& s, const std::string& name, const PerNode<TreeInfo>& tree,
    const PerNode<std::vector<std::uint64_t>>& items, unsigned fields, unsigned width) {
  auto st = s.phase(name, Upcast{&tree, &items, fields, width});
  PerNode<std::vector<std::uint64_t>> out;
  for (std::size_t v = 0; v < st.size(); ++v) {
    out.push_back(tree[v].is_root() ? std::move(st[v].queue) : std::vector<std::uint64_t>{});
  }
  return out;
}

inline std::vector<std::vector<std::uint64_t>> split_records(const std::vector<std::uint64_t>& flat,
                                                             unsigned fields) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::size_t i = 0; i + fields <= flat.size(); i += fields) {
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                     flat.begin() + static_cast<std::ptrdiff_t>(i + fields));
  }
  return out;
}

inline std::size_t root_index(const PerNode<TreeInfo>& tree) {
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree[v].is_root()) return v;
  }
  throw std::logic_error("tree has no root");
}

// ---------------------------------------------------------------------------
// Pipelined broadcast of the root's payload to every node.

struct Broadcast {
  const PerNode<TreeInfo>* tree;
  const PerNode<std::vector<std::uint64_t>>* payload;  // only the root's entry is read
  unsigned fields;
  unsigned width;

  struct State {
    std::vector<std::uint64_t> received;
    std::size_t sent = 0;
  };
  State init(const NodeContext&) const { return {}; }
  bool step(const NodeContext& ctx, State& s, std::size_t, const Mailbox& in,
            Mailbox& out) const {
    const TreeInfo& t = (*tree)[ctx.index];
    std::optional<Message> m;
    if (t.is_root()) {
      const auto& data = (*payload)[ctx.index];
      const std::size_t cap = stream_chunk(ctx.bandwidth, width, fields);
      const std::size_t take = std::min(cap, data.size() - s.sent);
      const bool last = s.sent + take == data.size();
      m = Message{last ? kTagLast : kTagData, static_cast<std::uint8_t>(width), {}};
      m->items.assign(data.begin() + static_cast<std::ptrdiff_t>(s.sent),
                      data.begin() + static_cast<std::ptrdiff_t>(s.sent + take));
      s.sent += take;
      if (last) s.received = data;
    } else if (in[t.parent]) {
      m = in[t.parent];
      s.received.insert(s.received.end(), m->items.begin(), m->items.end());
    }
    if (!m) return false;
    for (std::size_t c : t.children) out[c] = *m;
    return m->tag == kTagLast;
  }
};

inline PerNode<std::vector<std::uint64_t>> broadcast(Session& s, const std::string& name,
                                                     const PerNode<TreeInfo>& tree,
                                                     const PerNode<std::vector<std::uint64_t>>& payload,
                                                     unsigned fields, unsigned width) {
  auto st = s.phase(name, Broadcast{&tree, &payload, fields, width});
  PerNode<std::vector<std::uint64_t>> out;
  for (auto& x : st) out.push_back(std::move(x.received));
  return out;
}

// ---------------------------------------------------------------------------
// Capped convergecast of several counters, then a verdict broadcast. Every
// node learns, per counter, whether the total exceeds its threshold; the
// root also keeps the capped totals.

struct ThresholdCount {
  const PerNode<TreeInfo>* tree;
  const PerNode<std::vector<std::uint64_t>>* counts;
  std::vector<std::uint64_t> thresholds;

  struct State {
    std::vector<std::uint64_t> sums;
    std::size_t children_left = 0;
    bool sent_up = false;
    std::vector<char> exceeds;
  };
  unsigned width() const {
    std::uint64_t top = 1;
    for (auto t : thresholds) top = std::max(top, t + 1);
    return bits_for(top);
  }
  void cap(std::vector<std::uint64_t>& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(v[i], thresholds[i] + 1);
  }
  State init(const NodeContext& ctx) const {
    State s;
    s.sums = (*counts)[ctx.index];
    s.sums.resize(thresholds.size(), 0);
    cap(s.sums);
    s.children_left = (*tree)[ctx.index].children.size();
    return s;
  }
  bool step(const NodeContext& ctx, State& s, std::size_t, const Mailbox& in,
            Mailbox& out) const {
    const TreeInfo& t = (*tree)[ctx.index];
    bool decided = false;
    for (std::size_t p = 0; p < ctx.degree; ++p) {
      if (!in[p]) continue;
      const Message& m = *in[p];
      if (m.tag == kTagData) {
        for (std::size_t i = 0; i < s.sums.size(); ++i) s.sums[i] += m.items[i];
        cap(s.sums);
        --s.children_left;
      } else {
        s.exceeds.assign(m.items.begin(), m.items.end());
        decided = true;
      }
    }
    if (t.is_root()) {
      if (s.children_left != 0) return false;
      s.exceeds.clear();
      for (std::size_t i = 0; i < s.sums.size(); ++i) s.exceeds.push_back(s.sums[i] > thresholds[i]);
      decided = true;
    } else if (!s.sent_up) {
      if (s.children_left != 0) return false;
      out[t.parent] = Message{kTagData, static_cast<std::uint8_t>(width()), s.sums};
      s.sent_up = true;
      return false;
    }
    if (!decided) return false;
    Message down{kTagLast, 1, {}};
    for (char e : s.exceeds) down.items.push_back(static_cast<std::uint64_t>(e));
    for (std::size_t c : t.children) out[c] = down;
    return true;
  }
};

struct CountResult {
  PerNode<std::vector<char>> exceeds;  // [node][counter]
  std::vector<std::uint64_t> capped_totals;  // as seen by the root
};

inline CountResult threshold_count(Session& s, const std::string& name, const PerNode<TreeInfo>& tree,
                                   const PerNode<std::vector<std::uint64_t>>& counts,
                                   std::vector<std::uint64_t> thresholds) {
  auto st = s.phase(name, ThresholdCount{&tree, &counts, std::move(thresholds)});
  CountResult r;
  for (std::size_t v = 0; v < st.size(); ++v) {
    if (tree[v].is_root()) r.capped_totals = st[v].sums;
    r.exceeds.push_back(std::move(st[v].exceeds));
  }
  return r;
}

// Single-counter convenience: one flag per node.
inline PerNode<char> threshold_count(Session& s, const std::string& name, const PerNode<TreeInfo>& tree,
                                     const PerNode<std::uint64_t>& counts, std::uint64_t threshold) {
  PerNode<std::vector<std::uint64_t>> c;
  for (auto x : counts) c.push_back({x});
  const auto r = threshold_count(s, name, tree, c, {threshold});
  PerNode<char> out;
  for (const auto& e : r.exceeds) out.push_back(e.at(0));
  return out;
}

// ---------------------------------------------------------------------------
// Graph collection: each edge accepted by keep(v, port) at its lower-id
// endpoint is reported as an identifier pair.

template <class Keep>
std::vector<Edge> collect_graph(Session& s, const PerNode<TreeInfo>& tree, const PerPort<NodeId>& nbr_ids,
                                Keep keep) {
  const Graph& g = s.graph();
  PerNode<std::vector<std::uint64_t>> items(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    for (std::size_t p = 0; p < nbr_ids[v].size(); ++p) {
      if (g.id(v) < nbr_ids[v][p] && keep(v, p)) {
        items[v].push_back(g.id(v));
        items[v].push_back(nbr_ids[v][p]);
      }
    }
  }
  const auto got = pipelined_upcast(s, "collect", tree, items, 2, s.network().id_bits);
  std::vector<Edge> edges;
  for (const auto& r : split_records(got[root_index(tree)], 2)) edges.push_back({r[0], r[1]});
  std::sort(edges.begin(), edges.end());
  return edges;
}

// ---------------------------------------------------------------------------
// Greedy maximal matching by locally minimal edges: in each two-round
// iteration every free node proposes along its smallest free edge (ports are
// in identifier order, so that is its lowest free port), mutual proposals
// match, and matched nodes tell their neighbors.

struct GreedyMatching {
  std::size_t iterations;

  struct State {
    std::size_t mate = kNoPort;
    std::size_t proposed = kNoPort;
    std::vector<char> nbr_free;
  };
  State init(const NodeContext& ctx) const {
    State s;
    s.nbr_free.assign(ctx.degree, 1);
    return s;
  }
  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    if (round % 2 == 0) {
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (in[p]) s.nbr_free[p] = 0;
      }
      if (round == 2 * iterations) return true;
      s.proposed = kNoPort;
      if (s.mate != kNoPort) return false;
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (s.nbr_free[p]) {
          s.proposed = p;
          out[p] = Message{1, 0, {}};
          break;
        }
      }
      return false;
    }
    if (s.proposed != kNoPort && in[s.proposed]) {
      s.mate = s.proposed;
      s.nbr_free[s.mate] = 0;
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (p != s.mate) out[p] = Message{2, 0, {}};
      }
    }
    return false;
  }
};

struct MatchingState {
  PerNode<std::size_t> mate;   // port of the mate or kNoPort
  PerPort<char> nbr_matched;   // neighbor known to be matched
};

inline MatchingState greedy_matching(Session& s, std::size_t iterations) {
  auto st = s.phase("greedy-matching", GreedyMatching{iterations});
  MatchingState m;
  for (auto& x : st) {
    std::vector<char> matched(x.nbr_free.size());
    for (std::size_t p = 0; p < matched.size(); ++p) matched[p] = !x.nbr_free[p];
    m.mate.push_back(x.mate);
    m.nbr_matched.push_back(std::move(matched));
  }
  return m;
}

// Greedy maximal independent set: an undecided node joins when its
// identifier is smaller than every undecided neighbor's; joined and excluded
// nodes announce themselves. Two rounds per iteration.

struct GreedyIndependentSet {
  std::size_t iterations;
  const PerPort<NodeId>* nbr_ids;

  enum class Status : std::uint8_t { kUndecided, kIn, kOut };
  struct State {
    Status status = Status::kUndecided;
    std::vector<char> nbr_undecided;
  };
  State init(const NodeContext& ctx) const { return {Status::kUndecided, std::vector<char>(ctx.degree, 1)}; }
  bool step(const NodeContext& ctx, State& s, std::size_t round, const Mailbox& in,
            Mailbox& out) const {
    if (round % 2 == 0) {
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (in[p]) s.nbr_undecided[p] = 0;
      }
      if (round == 2 * iterations) return true;
      if (s.status != Status::kUndecided) return false;
      const auto& ids = (*nbr_ids)[ctx.index];
      bool local_min = true;
      for (std::size_t p = 0; p < ctx.degree; ++p) {
        if (s.nbr_undecided[p] && ids[p] < ctx.id) local_min = false;
      }
      if (local_min) {
        s.status = Status::kIn;
        for (auto& o : out) o = Message{1, 0, {}};
      }
      return false;
    }
    bool newly_out = false;
    for (std::size_t p = 0; p < ctx.degree; ++p) {
      if (in[p]) {
        s.nbr_undecided[p] = 0;
        if (s.status == Status::kUndecided) newly_out = true;
      }
    }
    if (newly_out) {
      s.status = Status::kOut;
      for (auto& o : out) o = Message{2, 0, {}};
    }
    return false;
  }
};

inline PerNode<char> greedy_independent_set(Session& s, std::size_t iterations, const PerPort<NodeId>& nbr_ids) {
  const auto st = s.phase("greedy-mis", GreedyIndependentSet{iterations, &nbr_ids});
  PerNode<char> in;
  for (const auto& x : st) in.push_back(x.status == GreedyIndependentSet::Status::kIn);
  return in;
}

}  // namespace kparam
