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

// Synchronous LOCAL / CONGEST simulator.
//
// A node program is a type P with
//   using State = ...;
//   State init(const NodeContext&) const;
//   bool step(const NodeContext&, State&, std::size_t round,
//             const Mailbox& inbox, Mailbox& outbox) const;   // true = halted
//
// Step 0 runs with an empty inbox. A message placed in the outbox at step t
// is in the receiver's inbox at step t+1. rounds_used is the index of the
// step after which every node has halted.

#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kparam/graph.hpp"
#include "kparam/oracles.hpp"

namespace kparam {

// ceil(log2 x) for x >= 1.
inline unsigned ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0U : static_cast<unsigned>(std::bit_width(x - 1));
}

// Bits needed to write v in binary (at least 1).
inline unsigned bits_for(std::uint64_t v) {
  return std::max(1U, static_cast<unsigned>(std::bit_width(v)));
}

enum class ModelKind { kLocal, kCongest };

struct Model {
  ModelKind kind = ModelKind::kCongest;
  unsigned beta = 8;

  static Model local() { return {ModelKind::kLocal, 0}; }
  static Model congest(unsigned beta = 8) { return {ModelKind::kCongest, beta}; }

  // Per-edge, per-round limit B(n) = beta * ceil(log2(n+1)).
  std::optional<std::size_t> bandwidth(std::size_t n) const {
    if (kind == ModelKind::kLocal) return std::nullopt;
    return static_cast<std::size_t>(beta) * std::max(1U, ceil_log2(n + 1));
  }
  std::string name() const { return kind == ModelKind::kLocal ? "local" : "congest"; }
};

// Length of the Elias gamma code of x >= 1.
inline std::size_t gamma_length(std::size_t x) {
  return 2 * static_cast<std::size_t>(std::bit_width(x) - 1) + 1;
}

// A message is a kind tag plus a list of equal-width items. Its size on the
// wire is the 4-bit tag, the gamma-coded item count, and the items.
struct Message {
  static constexpr std::size_t kTagBits = 4;

  std::uint8_t tag = 0;
  std::uint8_t width = 0;
  std::vector<std::uint64_t> items;

  std::size_t bits() const {
    return kTagBits + gamma_length(items.size() + 1) + items.size() * width;
  }
};

using Mailbox = std::vector<std::optional<Message>>;

// Largest number of items of the given width that fit in one message, at
// least 1 (an oversized message is then caught by the engine).
inline std::size_t items_per_message(std::optional<std::size_t> bandwidth, unsigned width,
                                     std::size_t items_per_record = 1) {
  if (!bandwidth) return static_cast<std::size_t>(-1) / 2;
  std::size_t records = 0;
  while (true) {
    const std::size_t items = (records + 1) * items_per_record;
    const std::size_t bits =
        Message::kTagBits + gamma_length(items + 1) + items * static_cast<std::size_t>(width);
    if (bits > *bandwidth) break;
    ++records;
  }
  return std::max<std::size_t>(records, 1) * items_per_record;
}

// Items per message for a flat stream of records: whole records when one
// fits, single items otherwise (records may then straddle messages).
inline std::size_t stream_chunk(std::optional<std::size_t> bandwidth, unsigned width, std::size_t fields) {
  const std::size_t whole = items_per_message(bandwidth, width, fields);
  if (!bandwidth || Message::kTagBits + gamma_length(fields + 1) + fields * width <= *bandwidth) return whole;
  return items_per_message(bandwidth, width, 1);
}

enum class PortDir : std::uint8_t { kUndirected, kOut, kIn, kBoth };

struct NodeContext {
  std::size_t index = 0;  // dense simulation index, for per-node inputs
  NodeId id = 0;
  std::size_t degree = 0;  // ports 0..degree-1, in neighbor-identifier order
  std::size_t n = 0;
  unsigned id_bits = 1;
  std::optional<std::size_t> bandwidth;
  std::uint64_t node_seed = 0;  // derived from (global seed, id)
  const std::vector<PortDir>* dirs = nullptr;
};

// ---------------------------------------------------------------------------
// Errors.

enum class SimErrorKind { kBandwidth, kRoundBudget, kDisconnected, kNonUnanimous };

class SimError : public std::runtime_error {
 public:
  SimError(SimErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  SimErrorKind kind() const { return kind_; }

 private:
  SimErrorKind kind_;
};

class BandwidthExceeded : public SimError {
 public:
  BandwidthExceeded(NodeId from, NodeId to, std::size_t round, std::size_t bits,
                    std::size_t budget)
      : SimError(SimErrorKind::kBandwidth,
                 "bandwidth exceeded on edge " + std::to_string(from) + "->" +
                     std::to_string(to) + " in round " + std::to_string(round) + ": " +
                     std::to_string(bits) + " > " + std::to_string(budget) + " bits"),
        from(from), to(to), round(round), bits(bits), budget(budget) {}
  NodeId from, to;
  std::size_t round, bits, budget;
};

class RoundBudgetExceeded : public SimError {
 public:
  explicit RoundBudgetExceeded(std::size_t budget)
      : SimError(SimErrorKind::kRoundBudget,
                 "round budget of " + std::to_string(budget) + " exhausted"),
        budget(budget) {}
  std::size_t budget;
};

class DisconnectedInput : public SimError {
 public:
  DisconnectedInput() : SimError(SimErrorKind::kDisconnected, "input graph is disconnected") {}
};

class NonUnanimous : public SimError {
 public:
  explicit NonUnanimous(std::vector<NodeId> dissenters)
      : SimError(SimErrorKind::kNonUnanimous,
                 "nodes disagree (" + std::to_string(dissenters.size()) + " dissenters)"),
        dissenters(std::move(dissenters)) {}
  std::vector<NodeId> dissenters;
};

// ---------------------------------------------------------------------------
// Engine.

template <class P>
concept NodeProgram = requires(const P& p, const NodeContext& ctx, typename P::State& s,
                               const Mailbox& in, Mailbox& out, std::size_t round) {
  { p.init(ctx) } -> std::convertible_to<typename P::State>;
  { p.step(ctx, s, round, in, out) } -> std::same_as<bool>;
};

struct RunConfig {
  Model model = Model::congest();
  std::size_t round_budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct RunStats {
  std::size_t rounds_used = 0;
  std::size_t peak_message_bits = 0;
  std::size_t total_messages = 0;
  std::size_t total_bits = 0;

  void absorb(const RunStats& o) {
    rounds_used += o.rounds_used;
    peak_message_bits = std::max(peak_message_bits, o.peak_message_bits);
    total_messages += o.total_messages;
    total_bits += o.total_bits;
  }
  friend bool operator==(const RunStats&, const RunStats&) = default;
};

template <class State>
struct SimResult {
  std::vector<State> states;  // final state per node index
  RunStats stats;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t node_seed(std::uint64_t seed, NodeId id) {
  return splitmix64(seed ^ splitmix64(id + 0x632BE59BD9B4E019ULL));
}

// Static wiring shared by every run on the same graph.
struct Network {
  const Graph* graph = nullptr;
  std::vector<std::vector<std::size_t>> reverse_port;  // port of v at its p-th neighbor
  std::vector<std::vector<PortDir>> dirs;
  unsigned id_bits = 1;

  explicit Network(const Graph& g) : graph(&g) {
    const std::size_t n = g.num_nodes();
    if (n == 0 || !is_connected(g)) throw DisconnectedInput();
    reverse_port.resize(n);
    dirs.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      for (std::size_t w : nb) {
        const auto back = g.neighbors(w);
        reverse_port[v].push_back(
            static_cast<std::size_t>(std::lower_bound(back.begin(), back.end(), v) - back.begin()));
        if (!g.directed()) {
          dirs[v].push_back(PortDir::kUndirected);
        } else {
          const bool out = g.has_edge(g.id(v), g.id(w));
          const bool in = g.has_edge(g.id(w), g.id(v));
          dirs[v].push_back(out && in ? PortDir::kBoth : (out ? PortDir::kOut : PortDir::kIn));
        }
      }
    }
    id_bits = bits_for(g.ids().back());
  }

  NodeContext context(std::size_t v, const RunConfig& cfg) const {
    NodeContext ctx;
    ctx.index = v;
    ctx.id = graph->id(v);
    ctx.degree = graph->degree(v);
    ctx.n = graph->num_nodes();
    ctx.id_bits = id_bits;
    ctx.bandwidth = cfg.model.bandwidth(ctx.n);
    ctx.node_seed = node_seed(cfg.seed, ctx.id);
    ctx.dirs = &dirs[v];
    return ctx;
  }
};

template <NodeProgram P>
SimResult<typename P::State> run(const Network& net, const P& program, const RunConfig& cfg) {
  const Graph& g = *net.graph;
  const std::size_t n = g.num_nodes();
  std::vector<NodeContext> ctx;
  ctx.reserve(n);
  for (std::size_t v = 0; v < n; ++v) ctx.push_back(net.context(v, cfg));
  const std::optional<std::size_t> limit = cfg.model.bandwidth(n);

  SimResult<typename P::State> result;
  result.states.reserve(n);
  for (std::size_t v = 0; v < n; ++v) result.states.push_back(program.init(ctx[v]));

  std::vector<Mailbox> inbox(n), next(n);
  for (std::size_t v = 0; v < n; ++v) {
    inbox[v].resize(g.degree(v));
    next[v].resize(g.degree(v));
  }
  std::vector<char> halted(n, 0);
  std::size_t live = n;
  Mailbox out;
  RunStats& stats = result.stats;

  for (std::size_t round = 0;; ++round) {
    if (round > cfg.round_budget) throw RoundBudgetExceeded(cfg.round_budget);
    for (std::size_t v = 0; v < n; ++v) {
      if (halted[v]) continue;
      out.assign(g.degree(v), std::nullopt);
      if (program.step(ctx[v], result.states[v], round, inbox[v], out)) {
        halted[v] = 1;
        --live;
      }
      const auto nb = g.neighbors(v);
      for (std::size_t p = 0; p < out.size(); ++p) {
        if (!out[p]) continue;
        Message& m = *out[p];
        if (m.width < 64) {
          for (std::uint64_t item : m.items) {
            if (item >> m.width) {
              throw std::logic_error("message item does not fit its declared width");
            }
          }
        }
        const std::size_t bits = m.bits();
        if (limit && bits > *limit) {
          throw BandwidthExceeded(ctx[v].id, g.id(nb[p]), round + 1, bits, *limit);
        }
        stats.peak_message_bits = std::max(stats.peak_message_bits, bits);
        stats.total_bits += bits;
        ++stats.total_messages;
        next[nb[p]][net.reverse_port[v][p]] = std::move(m);
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (auto& slot : inbox[v]) slot.reset();
    }
    std::swap(inbox, next);
    if (live == 0) {
      stats.rounds_used = round;
      return result;
    }
  }
}

template <NodeProgram P>
SimResult<typename P::State> run(const Graph& g, const P& program, const RunConfig& cfg) {
  const Network net(g);
  return run(net, program, cfg);
}

// ---------------------------------------------------------------------------
// Verdicts.

enum class Verdict { kAccept, kNoKSolution };

inline std::string verdict_name(Verdict v) {
  return v == Verdict::kAccept ? "accept" : "no_k_solution";
}

// What a node reports at the end of a parameterized algorithm.
struct NodeOutput {
  Verdict verdict = Verdict::kNoKSolution;
  bool in_solution = false;                   // vertex-set problems
  std::vector<NodeId> solution_neighbors;     // edge-set problems
  friend bool operator==(const NodeOutput&, const NodeOutput&) = default;
};

struct ParamVerdict {
  Verdict verdict = Verdict::kNoKSolution;
  std::optional<Solution> solution;
};

// Common verdict of all nodes with the assembled solution. An edge belongs
// to the solution when both endpoints list it; one-sided claims count as
// disagreement.
inline ParamVerdict unanimous_verdict(const Graph& g, Problem p,
                                      const std::vector<NodeOutput>& outs) {
  std::size_t accepts = 0;
  for (const auto& o : outs) accepts += o.verdict == Verdict::kAccept;
  if (accepts != 0 && accepts != outs.size()) {
    const Verdict majority = 2 * accepts >= outs.size() ? Verdict::kAccept : Verdict::kNoKSolution;
    std::vector<NodeId> dissent;
    for (std::size_t v = 0; v < outs.size(); ++v) {
      if (outs[v].verdict != majority) dissent.push_back(g.id(v));
    }
    throw NonUnanimous(std::move(dissent));
  }
  ParamVerdict pv;
  if (accepts == 0) return pv;
  pv.verdict = Verdict::kAccept;
  if (p.shape() == Shape::kVertexSet) {
    std::vector<NodeId> members;
    for (std::size_t v = 0; v < outs.size(); ++v) {
      if (outs[v].in_solution) members.push_back(g.id(v));
    }
    pv.solution = Solution::of_vertices(p, std::move(members));
    return pv;
  }
  std::vector<Edge> claims;
  for (std::size_t v = 0; v < outs.size(); ++v) {
    for (NodeId w : outs[v].solution_neighbors) claims.push_back(normalized({g.id(v), w}));
  }
  std::sort(claims.begin(), claims.end());
  std::vector<Edge> agreed;
  std::vector<NodeId> dissent;
  for (std::size_t i = 0; i < claims.size();) {
    if (i + 1 < claims.size() && claims[i + 1] == claims[i]) {
      agreed.push_back(claims[i]);
      i += 2;
    } else {
      dissent.push_back(claims[i].u);
      dissent.push_back(claims[i].v);
      ++i;
    }
  }
  if (!dissent.empty()) throw NonUnanimous(std::move(dissent));
  pv.solution = Solution::of_edges(p, std::move(agreed));
  return pv;
}

}  // namespace kparam
