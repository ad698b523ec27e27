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

// File formats and records: the edge-list format, graph families by name,
// construction metadata and run records as JSON lines or CSV rows.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kparam/constructions.hpp"
#include "kparam/param_algos.hpp"

namespace kparam {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Edge lists.
//
//   graph <n> <m> <u|d>
//   <u> <v>            (m lines)
//   node <id>          (optional, for isolated nodes)
//   # comment

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "graph " << g.num_nodes() << ' ' << g.num_edges() << ' ' << (g.directed() ? 'd' : 'u') << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) == 0) out << "node " << g.id(v) << '\n';
  }
  return out.str();
}

namespace detail {

inline NodeId parse_id(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw IoError("line " + std::to_string(line) + ": bad identifier '" + tok + "'");
  }
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line) + ": identifier out of range");
  }
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace detail

inline Graph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n, m;
  bool directed = false;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') throw IoError("line " + std::to_string(lineno) + ": CRLF line ending");
    if (line.empty() || line[0] == '#') continue;
    const auto t = detail::tokens(line);
    if (t.empty()) continue;
    if (!n) {
      if (t.size() != 4 || t[0] != "graph" || (t[3] != "u" && t[3] != "d")) {
        throw IoError("line " + std::to_string(lineno) + ": expected 'graph <n> <m> <u|d>'");
      }
      n = detail::parse_id(t[1], lineno);
      m = detail::parse_id(t[2], lineno);
      directed = t[3] == "d";
      continue;
    }
    if (t[0] == "node") {
      if (t.size() != 2) throw IoError("line " + std::to_string(lineno) + ": expected 'node <id>'");
      nodes.push_back(detail::parse_id(t[1], lineno));
      continue;
    }
    if (t.size() != 2) throw IoError("line " + std::to_string(lineno) + ": expected '<u> <v>'");
    edges.push_back({detail::parse_id(t[0], lineno), detail::parse_id(t[1], lineno)});
  }
  if (!n) throw IoError("missing header line");
  if (edges.size() != *m) {
    throw IoError("header declares " + std::to_string(*m) + " edges, found " + std::to_string(edges.size()));
  }
  Graph g;
  try {
    g = Graph::from_edges(directed, std::move(nodes), std::move(edges));
  } catch (const GraphError& e) {
    throw IoError(e.what());
  }
  if (g.num_nodes() != *n) {
    throw IoError("header declares " + std::to_string(*n) + " nodes, found " + std::to_string(g.num_nodes()));
  }
  return g;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Families by name. Parameters arrive as strings ("r=3,l=4").

using Params = std::map<std::string, std::string>;

inline Params parse_params(const std::string& text) {
  Params p;
  std::istringstream in(text);
  for (std::string kv; std::getline(in, kv, ',');) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw IoError("bad parameter '" + kv + "', expected name=value");
    p[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return p;
}

// "k=4;tail=4", safe inside a CSV cell.
inline std::string params_string(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : ";") + k + "=" + v;
  return s;
}

struct FamilyGraph {
  Graph graph;
  ConstructionMeta meta;
};

namespace detail {

class ParamReader {
 public:
  ParamReader(const std::string& family, const Params& p) : family_(family), p_(p) {}
  std::size_t count(const std::string& key) {
    used_.push_back(key);
    const auto it = p_.find(key);
    if (it == p_.end()) throw IoError(family_ + ": missing parameter " + key);
    if (it->second.empty() || it->second.find_first_not_of("0123456789") != std::string::npos) {
      throw IoError(family_ + ": parameter " + key + " must be a non-negative integer");
    }
    return std::stoull(it->second);
  }
  double real(const std::string& key) {
    used_.push_back(key);
    const auto it = p_.find(key);
    if (it == p_.end()) throw IoError(family_ + ": missing parameter " + key);
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != it->second.size()) throw IoError(family_ + ": parameter " + key + " must be a number");
    return v;
  }
  void done() const {
    for (const auto& [k, v] : p_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw IoError(family_ + ": unknown parameter " + k);
      }
    }
  }

 private:
  std::string family_;
  const Params& p_;
  std::vector<std::string> used_;
};

inline ConstructionMeta plain_meta(const std::string& family, const Params& params, const Graph& g) {
  ConstructionMeta m;
  m.family = family;
  for (const auto& [k, v] : params) {
    if (!v.empty() && v.find_first_not_of("0123456789") == std::string::npos) m.params[k] = std::stoll(v);
  }
  m.node_count = g.num_nodes();
  if (g.num_nodes() <= 4096 && is_connected(g)) m.diameter = diameter(g);
  return m;
}

}  // namespace detail

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "path",       "cycle",         "star",        "clique",           "petersen",
      "random",     "random_connected", "path_star", "directed_path_star", "cycle_star",
      "directed_cycle_star", "cycle_star_tree", "directed_cycle_star_tree", "clique_with_tail"};
  return names;
}

inline FamilyGraph make_family(const std::string& family, const Params& params) {
  detail::ParamReader in(family, params);
  FamilyGraph out;
  try {
    if (family == "path_star" || family == "directed_path_star") {
      const std::size_t r = in.count("r"), l = in.count("l");
      in.done();
      PathStar ps = family == "path_star" ? make_path_star(r, l) : make_directed_path_star(r, l);
      return {std::move(ps.graph), std::move(ps.meta)};
    }
    if (family == "cycle_star" || family == "directed_cycle_star") {
      const std::size_t k = in.count("k"), t = in.count("t"), d = in.count("d");
      in.done();
      CycleStar cs = make_cycle_star(k, t, d, family == "directed_cycle_star");
      return {std::move(cs.graph), std::move(cs.meta)};
    }
    if (family == "path") {
      out.graph = make_path(in.count("n"));
    } else if (family == "cycle") {
      out.graph = make_cycle(in.count("n"));
    } else if (family == "star") {
      out.graph = make_star(in.count("n"));
    } else if (family == "clique") {
      out.graph = make_clique(in.count("n"));
    } else if (family == "petersen") {
      out.graph = make_petersen();
    } else if (family == "random") {
      const std::size_t n = in.count("n");
      const double p = in.real("p");
      out.graph = make_random(n, p, in.count("seed"));
    } else if (family == "random_connected") {
      const std::size_t n = in.count("n");
      const double p = in.real("p");
      out.graph = make_random_connected(n, p, in.count("seed"));
    } else if (family == "cycle_star_tree" || family == "directed_cycle_star_tree") {
      const std::size_t k = in.count("k"), t = in.count("t"), d = in.count("d");
      out.graph = make_cycle_star_tree(k, t, d, family == "directed_cycle_star_tree");
    } else if (family == "clique_with_tail") {
      const std::size_t k = in.count("k");
      out.graph = make_clique_with_tail(k, in.count("tail"));
    } else {
      throw IoError("unknown family " + family);
    }
  } catch (const GraphError& e) {
    throw IoError(e.what());
  }
  in.done();
  out.meta = detail::plain_meta(family, params, out.graph);
  return out;
}

inline nlohmann::ordered_json meta_json(const ConstructionMeta& m) {
  nlohmann::ordered_json j;
  j["family"] = m.family;
  j["params"] = m.params;
  j["node_count"] = m.node_count;
  j["diameter"] = m.diameter ? nlohmann::ordered_json(*m.diameter) : nlohmann::ordered_json(nullptr);
  j["opt_sizes"] = m.opt_sizes;
  return j;
}

// ---------------------------------------------------------------------------
// Run records.

struct RunRecord {
  std::string algorithm;
  std::string family;  // or "file:<path>"
  std::string params;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<Rational> eps;
  std::string model = "congest";
  unsigned beta = 8;
  std::uint64_t seed = 0;
  std::string verdict;  // accept, no_k_solution or error:<kind>
  std::size_t solution_size = 0;
  std::optional<std::size_t> opt_size;
  std::size_t rounds = 0;
  std::size_t peak_message_bits = 0;
  std::size_t total_messages = 0;
};

inline std::string error_kind_name(SimErrorKind k) {
  switch (k) {
    case SimErrorKind::kBandwidth: return "bandwidth";
    case SimErrorKind::kRoundBudget: return "budget";
    case SimErrorKind::kDisconnected: return "disconnected";
    case SimErrorKind::kNonUnanimous: return "non_unanimous";
  }
  return "unknown";
}

inline nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["family"] = r.family;
  j["params"] = r.params;
  j["n"] = r.n;
  j["k"] = r.k;
  j["epsilon"] = r.eps ? nlohmann::ordered_json(to_string(*r.eps)) : nlohmann::ordered_json(nullptr);
  j["model"] = r.model;
  j["beta"] = r.beta;
  j["seed"] = r.seed;
  j["verdict"] = r.verdict;
  j["solution_size"] = r.solution_size;
  j["opt_size"] = r.opt_size ? nlohmann::ordered_json(*r.opt_size) : nlohmann::ordered_json(nullptr);
  j["rounds"] = r.rounds;
  j["peak_message_bits"] = r.peak_message_bits;
  j["total_messages"] = r.total_messages;
  return j;
}

inline std::string json_line(const RunRecord& r) { return to_json(r).dump() + "\n"; }

inline const char* kCsvHeader =
    "family,params,n,k,epsilon,model,beta,seed,verdict,solution_size,opt_size,rounds,peak_bits,total_msgs\n";

inline std::string csv_row(const RunRecord& r) {
  std::ostringstream o;
  o << r.family << ',' << r.params << ',' << r.n << ',' << r.k << ',' << (r.eps ? to_string(*r.eps) : "") << ','
    << r.model << ',' << r.beta << ',' << r.seed << ',' << r.verdict << ',' << r.solution_size << ','
    << (r.opt_size ? std::to_string(*r.opt_size) : "") << ',' << r.rounds << ',' << r.peak_message_bits << ','
    << r.total_messages << '\n';
  return o.str();
}

// "1/4", "0.25" or "1".
inline Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      if (a.empty() || b.empty() || a.find_first_not_of("0123456789") != std::string::npos ||
          b.find_first_not_of("0123456789") != std::string::npos) {
        throw IoError("bad rational " + s);
      }
      return Rational::of(std::stoull(a), std::stoull(b));
    }
    const auto dot = s.find('.');
    const std::string whole = s.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if ((whole + frac).empty() || (whole + frac).find_first_not_of("0123456789") != std::string::npos ||
        frac.size() > 9) {
      throw IoError("bad rational " + s);
    }
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::uint64_t num = (whole.empty() ? 0 : std::stoull(whole)) * den + (frac.empty() ? 0 : std::stoull(frac));
    return Rational::of(num, den);
  } catch (const std::invalid_argument& e) {
    throw IoError("bad rational " + s);
  }
}

// Solutions as text: vertex problems list one id per token, edge problems
// "u-v" (or "u>v" for arcs) tokens; whitespace or commas separate tokens.
inline Solution parse_solution(Problem p, const std::string& text) {
  std::string t = text;
  for (char& c : t) {
    if (c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
  }
  std::istringstream in(t);
  std::vector<NodeId> vs;
  std::vector<Edge> es;
  for (std::string tok; in >> tok;) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (p.shape() == Shape::kVertexSet) {
      vs.push_back(detail::parse_id(tok, 0));
      continue;
    }
    const auto sep = tok.find_first_of("->");
    if (sep == std::string::npos) throw IoError("bad edge token '" + tok + "'");
    es.push_back({detail::parse_id(tok.substr(0, sep), 0), detail::parse_id(tok.substr(sep + 1), 0)});
  }
  return p.shape() == Shape::kVertexSet ? Solution::of_vertices(p, vs) : Solution::of_edges(p, es);
}

}  // namespace kparam
