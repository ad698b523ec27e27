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

// Non-parameterized solvers for MVC and MaxM: doubling over k followed by a
// binary search, each probe a parameterized CONGEST run.

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kparam/param_algos.hpp"

namespace kparam {

class SearchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SearchMode { kExact, kOnePlusEps, kTwoMinusEps, kAdaptiveSqrt, kHybrid };

inline std::string mode_name(SearchMode m) {
  switch (m) {
    case SearchMode::kExact: return "exact";
    case SearchMode::kOnePlusEps: return "one_plus_eps";
    case SearchMode::kTwoMinusEps: return "two_minus_eps";
    case SearchMode::kAdaptiveSqrt: return "adaptive_sqrt";
    case SearchMode::kHybrid: return "hybrid";
  }
  return "?";
}

inline std::optional<SearchMode> parse_mode(const std::string& s) {
  for (SearchMode m : {SearchMode::kExact, SearchMode::kOnePlusEps, SearchMode::kTwoMinusEps,
                       SearchMode::kAdaptiveSqrt, SearchMode::kHybrid}) {
    if (mode_name(m) == s) return m;
  }
  return std::nullopt;
}

// A global (non-parameterized) algorithm used past the hybrid threshold.
struct FallbackRun {
  Solution solution;
  RunStats stats;
  std::size_t round_budget = 0;
};

struct Fallback {
  std::function<FallbackRun(const Graph&, const Model&, std::uint64_t seed)> program;
  std::function<std::size_t(std::size_t n, std::size_t max_degree)> round_formula;
};

class FallbackRegistry {
 public:
  // alpha is a label such as "2" or "2+eps".
  void register_fallback(Problem p, const std::string& alpha, Fallback f) {
    const auto key = std::make_pair(p.tag, alpha);
    if (entries_.count(key)) {
      throw SearchError("fallback already registered for " + std::string(p.name()) + " alpha=" + alpha);
    }
    entries_.emplace(key, std::move(f));
  }
  const Fallback& get(Problem p, const std::string& alpha) const {
    const auto it = entries_.find(std::make_pair(p.tag, alpha));
    if (it == entries_.end()) {
      throw SearchError("no fallback registered for " + std::string(p.name()) + " alpha=" + alpha);
    }
    return it->second;
  }
  bool contains(Problem p, const std::string& alpha) const { return entries_.count({p.tag, alpha}) > 0; }

 private:
  std::map<std::pair<ProblemTag, std::string>, Fallback> entries_;
};

// Greedy maximal matching to completion: a 2-approximation of MaxM, and its
// matched endpoints a 2-approximation of MVC. Stands in for the cited
// external global algorithms.
inline FallbackRun greedy_matching_fallback(const Graph& g, Problem p, const Model& model, std::uint64_t seed) {
  const std::size_t iterations = g.num_nodes() / 2 + 1;
  const std::size_t budget = 2 * iterations + 2;
  Session s(g, RunConfig{model, budget, seed});
  const auto ids = discover(s);
  const auto m = greedy_matching(s, iterations);
  std::vector<NodeId> vs;
  std::vector<Edge> es;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (m.mate[v] == kNoPort) continue;
    vs.push_back(g.id(v));
    if (g.id(v) < ids[v][m.mate[v]]) es.push_back({g.id(v), ids[v][m.mate[v]]});
  }
  FallbackRun r;
  r.solution = p == kMVC ? Solution::of_vertices(p, vs) : Solution::of_edges(p, es);
  r.stats = s.stats();
  r.round_budget = budget;
  return r;
}

inline FallbackRegistry default_fallbacks() {
  FallbackRegistry reg;
  for (Problem p : {kMVC, kMaxM}) {
    for (const char* alpha : {"2", "2+eps"}) {
      reg.register_fallback(p, alpha,
                          {[p](const Graph& g, const Model& m, std::uint64_t seed) {
                             return greedy_matching_fallback(g, p, m, seed);
                           },
                            [](std::size_t n, std::size_t) { return 2 * (n / 2 + 1) + 2; }});
    }
  }
  return reg;
}

struct SearchConfig {
  Problem problem = kMVC;
  SearchMode mode = SearchMode::kExact;
  Rational eps = Rational::of(1, 2);
  Model model = Model::congest();
  std::uint64_t seed = 0;
  FingerprintMode fingerprints = FingerprintMode::kOff;
  std::string alpha = "2";                 // hybrid: "2" or "2+eps"; also the fallback label
  std::optional<std::size_t> threshold;    // hybrid: T, default from the fallback's round formula
  const FallbackRegistry* registry = nullptr;  // hybrid: default_fallbacks() when null
};

struct SearchStep {
  std::string stage;  // "double", "binary", "naive" or "fallback"
  std::size_t k = 0;
  Verdict verdict = Verdict::kNoKSolution;
  std::size_t rounds = 0;
  std::size_t budget = 0;
};

struct SearchResult {
  Solution solution;
  std::vector<SearchStep> trace;
  std::size_t k_bar = 0;
  std::size_t total_rounds = 0;
  std::size_t budget_sum = 0;
  std::size_t peak_message_bits = 0;
  std::size_t total_messages = 0;
  std::optional<Rational> tail_eps;  // approximation parameter of the binary search

  std::vector<std::size_t> visited_k() const {
    std::vector<std::size_t> ks;
    for (const auto& s : trace) {
      if (s.stage == "double" || s.stage == "binary") ks.push_back(s.k);
    }
    return ks;
  }
};

// Collect the whole graph at a leader and solve there.
inline FallbackRun naive_solve(const Graph& g, Problem p, const Model& model, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  const BudgetCalc b{n, model};
  const std::size_t budget =
      2 * (1 + b.bfs(n) + b.up(n, g.num_edges(), BudgetCalc::id_bits(), 2) + b.down(n, 2 * n, BudgetCalc::id_bits(), 1)) + 4;
  Session s(g, RunConfig{model, budget, seed});
  const auto ids = discover(s);
  const auto tree = leader_and_bfs(s, n);
  const auto edges = collect_graph(s, tree, ids, [](std::size_t, std::size_t) { return true; });
  const std::size_t root = root_index(tree);
  PerNode<std::vector<std::uint64_t>> payload(n);
  const Solution opt = opt_solution(Graph::from_edges(false, {g.id(root)}, edges), p);
  for (NodeId v : opt.vertices) payload[root].push_back(v);
  for (const Edge& e : opt.edges) payload[root].insert(payload[root].end(), {e.u, e.v});
  const auto heard = broadcast(s, "decide", tree, payload, 1, s.network().id_bits);
  std::vector<NodeOutput> outs(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& msg = heard[v];
    outs[v].verdict = Verdict::kAccept;
    if (p.shape() == Shape::kVertexSet) {
      outs[v].in_solution = std::find(msg.begin(), msg.end(), g.id(v)) != msg.end();
    } else {
      for (std::size_t i = 0; i + 1 < msg.size(); i += 2) {
        if (msg[i] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i + 1]);
        if (msg[i + 1] == g.id(v)) outs[v].solution_neighbors.push_back(msg[i]);
      }
    }
  }
  FallbackRun r;
  r.solution = *unanimous_verdict(g, p, outs).solution;
  r.stats = s.stats();
  r.round_budget = budget;
  return r;
}

namespace detail {

class Searcher {
 public:
  Searcher(const Graph& g, const SearchConfig& cfg) : g_(g), cfg_(cfg) {
    if (cfg.problem != kMVC && cfg.problem != kMaxM) throw SearchError("search handles MVC and MaxM only");
    const Rational e = cfg.eps;
    if (cfg.mode == SearchMode::kOnePlusEps && (e.num == 0 || !(e < Rational::of(1, 1)))) {
      throw SearchError("one_plus_eps needs eps in (0, 1)");
    }
    if (cfg.mode == SearchMode::kTwoMinusEps && (e.num == 0 || Rational::of(1, 2) < e)) {
      throw SearchError("two_minus_eps needs eps in (0, 1/2]");
    }
    minimize_ = cfg.problem.kind() == Kind::kMin;
  }

  SearchResult run() {
    switch (cfg_.mode) {
      case SearchMode::kExact:
        return search(std::nullopt, std::nullopt, true);
      case SearchMode::kOnePlusEps:
        return search(std::nullopt, iterations(cfg_.eps, 1), true);
      case SearchMode::kTwoMinusEps: {
        const Rational tail = Rational::of(2 * cfg_.eps.num, cfg_.eps.den);
        return search(tail, iterations(cfg_.eps, 2), false);
      }
      case SearchMode::kAdaptiveSqrt:
        return search(std::nullopt, std::nullopt, false, true);
      case SearchMode::kHybrid:
        return hybrid();
    }
    throw SearchError("unknown mode");
  }

 private:
  // ceil(log2(1/eps)) + extra
  static std::size_t iterations(const Rational& e, std::size_t extra) {
    std::size_t t = 0;
    while ((std::uint64_t{1} << t) * e.num < e.den) ++t;
    return t + extra;
  }

  // A run at k either with the exact solver (approx empty) or with the
  // (2 - a)-approximation, a clamped to [1/k, 1].
  ParamRun probe(const std::string& stage, std::size_t k, std::optional<Rational> approx) {
    ParamConfig pc;
    pc.k = k;
    pc.model = cfg_.model;
    pc.seed = cfg_.seed;
    pc.fingerprints = cfg_.fingerprints;
    ParamRun r;
    if (approx) {
      Rational a = *approx;
      if (Rational::of(1, 1) < a) a = Rational::of(1, 1);
      if (k > 0 && a < Rational::of(1, k)) a = Rational::of(1, k);
      pc.eps = a;
      r = minimize_ ? congest_kmvc_2eps(g_, pc) : congest_kmaxm_2eps(g_, pc);
    } else {
      r = minimize_ ? congest_kmvc_exact(g_, pc) : congest_kmaxm_exact(g_, pc);
    }
    record(stage, k, r.verdict(), r.stats, r.round_budget);
    if (r.verdict() == Verdict::kAccept && (stage != "double" || keep_doubling_solutions_)) {
      offer(*r.result.solution);
    }
    return r;
  }

  void record(const std::string& stage, std::size_t k, Verdict v, const RunStats& st, std::size_t budget) {
    res_.trace.push_back({stage, k, v, st.rounds_used, budget});
    res_.total_rounds += st.rounds_used;
    res_.budget_sum += budget;
    res_.peak_message_bits = std::max(res_.peak_message_bits, st.peak_message_bits);
    res_.total_messages += st.total_messages;
  }

  void offer(const Solution& s) {
    if (!best_ || (minimize_ ? s.size() < best_->size() : s.size() > best_->size())) best_ = s;
  }

  // "Good" means the run reached its goal: Accept for MVC, NoK for MaxM
  // (the first k with no k-matching bounds OPT from above).
  bool stops(Verdict v) const { return minimize_ ? v == Verdict::kAccept : v == Verdict::kNoKSolution; }

  SearchResult naive() {
    const FallbackRun r = naive_solve(g_, cfg_.problem, cfg_.model, cfg_.seed);
    record("naive", 0, Verdict::kAccept, r.stats, r.round_budget);
    best_ = r.solution;
    return finish();
  }

  SearchResult finish() {
    if (!best_) best_ = minimize_ ? Solution::of_vertices(cfg_.problem, {}) : Solution::of_edges(cfg_.problem, {});
    res_.solution = *best_;
    return res_;
  }

  // Doubling then binary search on the bracket (lo, hi] where the stopping
  // verdict holds at hi and fails at lo. `approx` selects the probe solver;
  // `limit` caps the binary-search iterations (none: until closed).
  SearchResult search(std::optional<Rational> approx, std::optional<std::size_t> limit, bool naive_allowed,
                      bool adaptive = false) {
    std::optional<Rational> doubling_approx = approx;
    if (adaptive) {
      doubling_approx = Rational::of(0, 1);  // clamped to 1/k by probe()
      keep_doubling_solutions_ = false;
    }
    std::size_t k = 1;
    while (!stops(probe("double", k, doubling_approx).verdict())) k *= 2;
    res_.k_bar = k;
    // The O(k^2) parameterized search loses to O(n^2) collection once k >= n.
    if (naive_allowed && k >= g_.num_nodes()) return naive();
    std::size_t lo = k / 2, hi = k;
    if (adaptive) {
      // 2 - 2/sqrt(lo + 1) <= 2 - 1/sqrt(OPT) because lo + 1 <= 4 OPT.
      const double root = std::sqrt(static_cast<double>(lo + 1));
      const std::uint64_t den = 1'000'000;
      approx = Rational::of(std::min<std::uint64_t>(den, static_cast<std::uint64_t>(std::ceil(2.0 * den / root))), den);
    }
    res_.tail_eps = approx;
    std::map<std::size_t, bool> tail;  // k -> stopping verdict under the tail solver
    auto run_tail = [&](std::size_t at) { return tail[at] = stops(probe("binary", at, approx).verdict()); };
    std::size_t it = 0;
    while (true) {
      for (; hi - lo > 1 && (!limit || it < *limit); ++it) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (run_tail(mid) ? hi : lo) = mid;
      }
      if (!adaptive) break;
      // The answer must come from the tail solver at the deciding end.
      if (minimize_ && !tail.count(hi)) {
        if (run_tail(hi)) break;
        lo = hi;
        hi *= 2;
      } else if (!minimize_ && lo > 0 && !tail.count(lo)) {
        if (!run_tail(lo)) break;
        hi = lo;
        lo /= 2;
      } else {
        break;
      }
    }
    return finish();
  }

  SearchResult hybrid() {
    static const FallbackRegistry defaults = default_fallbacks();
    const FallbackRegistry& reg = cfg_.registry ? *cfg_.registry : defaults;
    const Fallback& fb = reg.get(cfg_.problem, cfg_.alpha);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < g_.num_nodes(); ++v) max_deg = std::max(max_deg, g_.degree(v));
    std::size_t t = 0;
    if (cfg_.threshold) {
      t = *cfg_.threshold;
    } else {
      // Largest k whose 2-approximate run is no dearer than the fallback.
      const std::size_t cost = fb.round_formula(g_.num_nodes(), max_deg);
      while (t + 1 <= g_.num_nodes() && approx_budget(t + 1) <= cost) ++t;
    }
    const Rational two = Rational::of(0, 1);  // clamped to 1/k: ratio 2 - 1/k
    for (std::size_t k = 1; k <= t; k *= 2) {
      if (!stops(probe("double", k, two).verdict())) continue;
      res_.k_bar = k;
      std::optional<std::size_t> limit;
      if (cfg_.alpha != "2") limit = iterations(cfg_.eps, 2);
      std::size_t lo = k / 2, hi = k;
      for (std::size_t it = 0; hi - lo > 1 && (!limit || it < *limit); ++it) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (stops(probe("binary", mid, two).verdict()) ? hi : lo) = mid;
      }
      return finish();
    }
    res_.k_bar = t;
    const FallbackRun r = fb.program(g_, cfg_.model, cfg_.seed);
    record("fallback", t, Verdict::kAccept, r.stats, r.round_budget);
    offer(r.solution);
    return finish();
  }

  std::size_t approx_budget(std::size_t k) const {
    const Rational e = Rational::of(1, k);
    return minimize_ ? budget_kmvc_2eps(g_.num_nodes(), k, cfg_.model)
                     : budget_kmaxm_2eps(g_.num_nodes(), k, cfg_.model, kmaxm_2eps_cap(k, e));
  }

  const Graph& g_;
  SearchConfig cfg_;
  bool minimize_ = true;
  bool keep_doubling_solutions_ = true;
  SearchResult res_;
  std::optional<Solution> best_;
};

}  // namespace detail

inline SearchResult solve(const Graph& g, const SearchConfig& cfg) { return detail::Searcher(g, cfg).run(); }

}  // namespace kparam
