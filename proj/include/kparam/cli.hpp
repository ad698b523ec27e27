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

// Command implementations behind the kparam executable. Each command takes
// parsed options, writes to the given streams and returns an exit status.

#pragma once

#include <algorithm>
#include <atomic>
#include <future>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "kparam/io.hpp"
#include "kparam/lb_harness.hpp"
#include "kparam/search.hpp"

namespace kparam::cli {

enum Exit : int {
  kExitAccept = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNoK = 3,
  kExitNonUnanimous = 4,
  kExitBandwidth = 5,
  kExitBudget = 6,
  kExitDisconnected = 7,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline int exit_for(SimErrorKind k) {
  switch (k) {
    case SimErrorKind::kBandwidth: return kExitBandwidth;
    case SimErrorKind::kRoundBudget: return kExitBudget;
    case SimErrorKind::kDisconnected: return kExitDisconnected;
    case SimErrorKind::kNonUnanimous: return kExitNonUnanimous;
  }
  return kExitFailure;
}

inline Problem parse_problem(const std::string& s) {
  for (auto p : {kMVC, kMaxIS, kMDS, kMFVS, kMaxM, kMEDS, kMFES}) {
    std::string name(p.name());
    std::string a = name, b = s;
    std::transform(a.begin(), a.end(), a.begin(), ::tolower);
    std::transform(b.begin(), b.end(), b.begin(), ::tolower);
    if (a == b) return p;
  }
  throw UsageError("unknown problem " + s);
}

// ---------------------------------------------------------------------------
// Graph sources.

struct GraphSource {
  std::string path;    // edge-list file, or empty
  std::string family;  // used when path is empty
  Params params;

  std::string family_label() const { return path.empty() ? family : "file:" + path; }
  std::string params_label() const { return path.empty() ? params_string(params) : ""; }
};

inline Graph load_graph(const GraphSource& src) {
  if (!src.path.empty()) return read_edge_list(read_file(src.path));
  if (src.family.empty()) throw UsageError("give a graph file or a family");
  return make_family(src.family, src.params).graph;
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::string algorithm;
  std::string problem;  // local-dlb, local-kmax, search
  std::string mode = "exact";
  std::size_t k = 0;
  std::optional<Rational> eps;
  std::string model = "congest";
  unsigned beta = 8;
  std::uint64_t seed = 0;
  std::optional<std::size_t> budget;
  unsigned fingerprint_c = 3;
  std::string fingerprints = "off";
  bool oracle = false;
  std::size_t oracle_limit = 40;
  std::string alpha = "2";
  std::optional<std::size_t> threshold;
};

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"kmvc-exact", "kmaxm-exact", "kmvc-2eps", "kmaxm-2eps",
                                                 "local-dlb",  "local-kmax",  "search"};
  return names;
}

inline Model model_of(const RunOptions& o) {
  if (o.model == "local") return Model::local();
  if (o.model == "congest") {
    if (o.beta == 0) throw UsageError("beta must be positive");
    return Model::congest(o.beta);
  }
  throw UsageError("unknown model " + o.model);
}

inline Problem problem_of(const RunOptions& o) {
  if (o.algorithm == "kmvc-exact" || o.algorithm == "kmvc-2eps") return kMVC;
  if (o.algorithm == "kmaxm-exact" || o.algorithm == "kmaxm-2eps") return kMaxM;
  if (o.problem.empty()) throw UsageError(o.algorithm + " needs --problem");
  return parse_problem(o.problem);
}

struct RunOutcome {
  RunRecord record;
  int exit_code = kExitAccept;
};

namespace detail {

inline ParamConfig param_config(const RunOptions& o) {
  ParamConfig c;
  c.k = o.k;
  c.eps = o.eps;
  c.model = model_of(o);
  c.seed = o.seed;
  c.fingerprint_c = o.fingerprint_c;
  c.round_budget = o.budget;
  if (o.fingerprints == "off") {
    c.fingerprints = FingerprintMode::kOff;
  } else if (o.fingerprints == "detect") {
    c.fingerprints = FingerprintMode::kDetect;
  } else if (o.fingerprints == "raw") {
    c.fingerprints = FingerprintMode::kRaw;
  } else {
    throw UsageError("unknown fingerprint mode " + o.fingerprints);
  }
  return c;
}

inline Solution checked(const Graph& g, const Solution& s) {
  if (!is_feasible(g, s)) throw std::logic_error("accepted solution failed re-validation");
  return s;
}

}  // namespace detail

inline RunOutcome execute_run(const Graph& g, const RunOptions& o, const GraphSource& src) {
  const auto known = algorithm_names();
  if (std::find(known.begin(), known.end(), o.algorithm) == known.end()) {
    throw UsageError("unknown algorithm " + o.algorithm);
  }
  const Problem p = problem_of(o);
  const Model model = model_of(o);
  RunOutcome out;
  RunRecord& r = out.record;
  r.algorithm = o.algorithm;
  r.family = src.family_label();
  r.params = src.params_label();
  r.n = g.num_nodes();
  r.k = o.k;
  r.eps = o.eps;
  r.model = model.name();
  r.beta = model.beta;
  r.seed = o.seed;
  if (o.oracle && g.num_nodes() <= o.oracle_limit) r.opt_size = opt_value(g, p);

  try {
    if (o.algorithm == "search") {
      SearchConfig sc;
      sc.problem = p;
      const auto mode = parse_mode(o.mode);
      if (!mode) throw UsageError("unknown search mode " + o.mode);
      sc.mode = *mode;
      if (o.eps) sc.eps = *o.eps;
      sc.model = model;
      sc.seed = o.seed;
      sc.fingerprints = detail::param_config(o).fingerprints;
      sc.alpha = o.alpha;
      sc.threshold = o.threshold;
      const SearchResult res = solve(g, sc);
      detail::checked(g, res.solution);
      r.k = res.k_bar;
      r.verdict = "accept";
      r.solution_size = res.solution.size();
      r.rounds = res.total_rounds;
      r.peak_message_bits = res.peak_message_bits;
      r.total_messages = res.total_messages;
      return out;
    }
    const ParamConfig cfg = detail::param_config(o);
    ParamRun run;
    if (o.algorithm == "kmvc-exact") {
      run = congest_kmvc_exact(g, cfg);
    } else if (o.algorithm == "kmaxm-exact") {
      run = congest_kmaxm_exact(g, cfg);
    } else if (o.algorithm == "kmvc-2eps") {
      if (!o.eps) throw UsageError("kmvc-2eps needs --eps");
      run = congest_kmvc_2eps(g, cfg);
    } else if (o.algorithm == "kmaxm-2eps") {
      if (!o.eps) throw UsageError("kmaxm-2eps needs --eps");
      run = congest_kmaxm_2eps(g, cfg);
    } else if (o.algorithm == "local-dlb") {
      run = local_dlb_solve(g, p, cfg);
    } else {
      run = local_kmax_greedy(g, p, cfg);
    }
    r.rounds = run.stats.rounds_used;
    r.peak_message_bits = run.stats.peak_message_bits;
    r.total_messages = run.stats.total_messages;
    if (run.verdict() == Verdict::kAccept) {
      detail::checked(g, *run.result.solution);
      r.verdict = "accept";
      r.solution_size = run.solution_size();
    } else {
      r.verdict = "no_k_solution";
      out.exit_code = kExitNoK;
    }
  } catch (const SimError& e) {
    r.verdict = "error:" + error_kind_name(e.kind());
    out.exit_code = exit_for(e.kind());
  } catch (const SearchError& e) {
    throw UsageError(e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// generate

inline int generate(const std::string& family, const Params& params, const std::string& out_path,
                    std::ostream& err) {
  FamilyGraph fg;
  try {
    fg = make_family(family, params);
  } catch (const IoError& e) {
    err << "generate: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    write_file(out_path, write_edge_list(fg.graph));
    write_file(out_path + ".meta.json", meta_json(fg.meta).dump() + "\n");
  } catch (const IoError& e) {
    err << "generate: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// sweep
//
// A sweep spec is a JSON object:
//   {"algorithm": "kmvc-exact", "graphs": [{"family": "clique", "params": {"n": 5}},
//    {"file": "g.txt"}], "k": [1, 2], "eps": ["1/2"], "seeds": [0, 1],
//    "model": "congest", "beta": 8, "oracle": true}
// plus any of problem, mode, budget, fingerprints, fingerprint_c, alpha.

struct SweepSpec {
  RunOptions base;
  std::vector<GraphSource> graphs;
  std::vector<std::size_t> ks;
  std::vector<std::optional<Rational>> eps;
  std::vector<std::uint64_t> seeds;
};

inline SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec s;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (!j.is_object()) throw IoError("sweep spec must be a JSON object");
    auto& b = s.base;
    b.algorithm = j.at("algorithm").get<std::string>();
    b.problem = j.value("problem", "");
    b.mode = j.value("mode", "exact");
    b.model = j.value("model", "congest");
    b.beta = j.value("beta", 8U);
    b.oracle = j.value("oracle", false);
    b.oracle_limit = j.value("oracle_limit", std::size_t{40});
    b.fingerprints = j.value("fingerprints", "off");
    b.fingerprint_c = j.value("fingerprint_c", 3U);
    b.alpha = j.value("alpha", "2");
    if (j.contains("budget")) b.budget = j.at("budget").get<std::size_t>();
    for (const auto& g : j.at("graphs")) {
      GraphSource src;
      if (g.contains("file")) {
        src.path = g.at("file").get<std::string>();
      } else {
        src.family = g.at("family").get<std::string>();
        if (g.contains("params")) {
          for (const auto& [k, v] : g.at("params").items()) src.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
      }
      s.graphs.push_back(std::move(src));
    }
    for (const auto& k : j.at("k")) s.ks.push_back(k.get<std::size_t>());
    if (j.contains("eps")) {
      for (const auto& e : j.at("eps")) s.eps.push_back(parse_rational(e.is_string() ? e.get<std::string>() : e.dump()));
    } else {
      s.eps.push_back(std::nullopt);
    }
    if (j.contains("seeds")) {
      for (const auto& x : j.at("seeds")) s.seeds.push_back(x.get<std::uint64_t>());
    } else {
      s.seeds.push_back(0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sweep spec: ") + e.what());
  }
  if (s.graphs.empty() || s.ks.empty()) throw IoError("malformed sweep spec: empty graphs or k");
  return s;
}

// Rows come out in sweep-file order (graphs, then k, then eps, then seeds) however
// the runs are scheduled.
inline std::string sweep_csv(const SweepSpec& spec, unsigned threads = 0) {
  struct Job {
    std::size_t graph;
    RunOptions opts;
  };
  std::vector<Graph> graphs;
  for (const auto& src : spec.graphs) graphs.push_back(load_graph(src));
  std::vector<Job> jobs;
  for (std::size_t gi = 0; gi < spec.graphs.size(); ++gi) {
    for (std::size_t k : spec.ks) {
      for (const auto& e : spec.eps) {
        for (std::uint64_t seed : spec.seeds) {
          RunOptions o = spec.base;
          o.k = k;
          o.eps = e;
          o.seed = seed;
          jobs.push_back({gi, o});
        }
      }
    }
  }
  std::vector<std::string> rows(jobs.size());
  const unsigned workers = std::max(1U, threads ? threads : std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      const auto& job = jobs[i];
      rows[i] = csv_row(execute_run(graphs[job.graph], job.opts, spec.graphs[job.graph]).record);
    }
  };
  std::vector<std::future<void>> pool;
  for (unsigned w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  std::string out = kCsvHeader;
  for (const auto& r : rows) out += r;
  return out;
}

// ---------------------------------------------------------------------------
// verify

inline int verify(const Graph& g, Problem p, const Solution& s, std::size_t oracle_limit, std::ostream& out) {
  nlohmann::ordered_json j;
  j["problem"] = std::string(p.name());
  j["n"] = g.num_nodes();
  j["size"] = s.size();
  bool feasible = false;
  try {
    feasible = is_feasible(g, s);
    j["feasible"] = feasible;
  } catch (const OracleError& e) {
    j["feasible"] = false;
    j["error"] = e.what();
  }
  if (g.num_nodes() > oracle_limit) {
    j["opt_size"] = nullptr;
    j["optimal"] = nullptr;
    j["oracle"] = "size limit exceeded";
  } else {
    try {
      const std::size_t opt = opt_value(g, p);
      j["opt_size"] = opt;
      j["optimal"] = feasible && s.size() == opt;
      j["oracle"] = "ok";
    } catch (const OracleError& e) {
      j["opt_size"] = nullptr;
      j["optimal"] = nullptr;
      j["oracle"] = std::string("error: ") + e.what();
    }
  }
  out << j.dump() << '\n';
  return feasible ? kExitAccept : kExitFailure;
}

// ---------------------------------------------------------------------------
// attack

inline nlohmann::ordered_json report_json(const AdversaryReport& r) {
  nlohmann::ordered_json j;
  j["attack"] = r.attack;
  j["program"] = r.program;
  j["problem"] = std::string(r.problem.name());
  j["label"] = r.label;
  j["views_identical"] = r.views_identical;
  j["disqualified"] = r.disqualified ? nlohmann::ordered_json(*r.disqualified) : nlohmann::ordered_json(nullptr);
  j["inputs_tried"] = r.inputs_tried;
  j["max_additive_error"] = r.max_additive_error;
  j["suboptimal_paths"] = r.suboptimal_paths;
  j["paths"] = nlohmann::ordered_json::array();
  for (const auto& p : r.paths) {
    j["paths"].push_back({{"index", p.index}, {"orientation", p.orientation}, {"optimal", p.optimal},
                          {"error", p.error}});
  }
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : r.inputs) {
    j["inputs"].push_back({{"name", in.name},
                           {"solution_size", in.solution_size},
                           {"opt_size", in.opt_size},
                           {"feasible", in.feasible},
                           {"additive_error", in.additive_error},
                           {"rounds", in.rounds}});
  }
  return j;
}

// Programs selectable from the command line.
inline CandidateProgram named_program(const std::string& name, Problem p, std::size_t rounds) {
  if (name == "truncated-greedy") return truncated_greedy_mvc(rounds);
  if (name == "collect-and-solve") return collect_and_solve(p);
  if (name == "empty") {
    return {"empty", [](Session& s) { return std::vector<NodeOutput>(s.size(), {Verdict::kAccept, false, {}}); }};
  }
  if (name == "all") {
    return {"all", [](Session& s) {
              std::vector<NodeOutput> outs(s.size(), {Verdict::kAccept, true, {}});
              const auto ids = discover(s);
              for (std::size_t v = 0; v < s.size(); ++v) outs[v].solution_neighbors = ids[v];
              return outs;
            }};
  }
  // Nodes of degree at least 3 join; for arcs, they claim their in-arcs.
  if (name == "high-degree") {
    return {"high-degree", [](Session& s) {
              const auto ids = discover(s);
              const Network& net = s.network();
              std::vector<NodeOutput> outs(s.size(), {Verdict::kAccept, false, {}});
              for (std::size_t v = 0; v < s.size(); ++v) {
                if (s.graph().degree(v) < 3) continue;
                outs[v].in_solution = true;
                for (std::size_t q = 0; q < ids[v].size(); ++q) {
                  const PortDir d = net.dirs[v][q];
                  if (d == PortDir::kIn || d == PortDir::kBoth) outs[v].solution_neighbors.push_back(ids[v][q]);
                }
              }
              return outs;
            }};
  }
  throw UsageError("unknown program " + name);
}

}  // namespace kparam::cli
