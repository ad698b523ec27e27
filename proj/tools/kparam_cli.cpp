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

#include <iostream>

#include "CLI11.hpp"
#include "kparam/cli.hpp"

using namespace kparam;

namespace {

Params collect_params(const std::vector<std::string>& pairs, const std::string& joined) {
  Params p = parse_params(joined);
  for (const auto& kv : pairs) {
    for (const auto& [k, v] : parse_params(kv)) p[k] = v;
  }
  return p;
}

void add_graph_options(CLI::App* cmd, std::string& path, std::string& family, std::vector<std::string>& pairs,
                       std::string& joined) {
  cmd->add_option("--graph", path, "Edge-list file");
  cmd->add_option("--family", family, "Graph family (instead of --graph)");
  cmd->add_option("--param", pairs, "Family parameter name=value (repeatable)");
  cmd->add_option("--params", joined, "Family parameters as name=value,name=value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameterized distributed graph algorithms: simulate, sweep, verify, attack"};
  app.require_subcommand(1);

  // generate
  std::string gen_family, gen_out, gen_joined;
  std::vector<std::string> gen_pairs;
  auto* gen = app.add_subcommand("generate", "Write a graph family instance as an edge list");
  gen->add_option("family", gen_family, "Family name")->required();
  gen->add_option("--param", gen_pairs, "Parameter name=value (repeatable)");
  gen->add_option("--params", gen_joined, "Parameters as name=value,name=value");
  gen->add_option("-o,--out", gen_out, "Output path; metadata goes to <out>.meta.json")->required();

  // run
  cli::RunOptions ro;
  std::string run_path, run_family, run_joined, run_eps;
  std::vector<std::string> run_pairs;
  std::size_t run_budget = 0, run_threshold = 0;
  auto* run = app.add_subcommand("run", "Run one algorithm and print a JSON record");
  add_graph_options(run, run_path, run_family, run_pairs, run_joined);
  run->add_option("--algorithm", ro.algorithm, "kmvc-exact, kmaxm-exact, kmvc-2eps, kmaxm-2eps, local-dlb, local-kmax, search")
      ->required();
  run->add_option("--problem", ro.problem, "Problem for local-dlb, local-kmax and search");
  run->add_option("--mode", ro.mode, "Search mode: exact, one_plus_eps, two_minus_eps, adaptive_sqrt, hybrid");
  run->add_option("--k", ro.k, "Parameter k");
  run->add_option("--eps", run_eps, "Approximation parameter, e.g. 1/4");
  run->add_option("--model", ro.model, "local or congest");
  run->add_option("--beta", ro.beta, "CONGEST bandwidth factor");
  run->add_option("--seed", ro.seed, "Random seed");
  run->add_option("--budget", run_budget, "Round budget");
  run->add_option("--fingerprint-c", ro.fingerprint_c, "Fingerprint exponent c");
  run->add_option("--fingerprints", ro.fingerprints, "off, detect or raw");
  run->add_flag("--oracle", ro.oracle, "Compute the optimum when the graph is small");
  run->add_option("--oracle-limit", ro.oracle_limit, "Largest n for the oracle");
  run->add_option("--alpha", ro.alpha, "Hybrid fallback ratio label: 2 or 2+eps");
  run->add_option("--threshold", run_threshold, "Hybrid threshold");

  // sweep
  std::string sweep_spec, sweep_out;
  unsigned sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("spec", sweep_spec, "Sweep spec (JSON)")->required();
  sweep->add_option("-o,--out", sweep_out, "CSV output path (default: standard output)");
  sweep->add_option("--threads", sweep_threads, "Worker threads (default: hardware concurrency)");

  // verify
  std::string ver_path, ver_family, ver_joined, ver_problem, ver_solution, ver_solution_file;
  std::vector<std::string> ver_pairs;
  std::size_t ver_limit = 40;
  auto* verify = app.add_subcommand("verify", "Check a solution for feasibility and optimality");
  add_graph_options(verify, ver_path, ver_family, ver_pairs, ver_joined);
  verify->add_option("--problem", ver_problem, "Problem name")->required();
  verify->add_option("--solution", ver_solution, "Inline solution: ids, or u-v edges");
  verify->add_option("--solution-file", ver_solution_file, "Solution file");
  verify->add_option("--oracle-limit", ver_limit, "Largest n for the oracle");

  // attack
  auto* attack = app.add_subcommand("attack", "Run a lower-bound experiment");
  attack->require_subcommand(1);
  std::string rev_program = "truncated-greedy", rev_problem = "MVC", rev_mode = "exhaustive";
  std::size_t rev_r = 4, rev_x = 6;
  std::uint64_t rev_seed = 0;
  auto* rev = attack->add_subcommand("reversal", "Segment reversals on the path star");
  rev->add_option("--program", rev_program, "truncated-greedy or collect-and-solve");
  rev->add_option("--problem", rev_problem, "MVC, MaxM, MaxIS, MDS or MEDS");
  rev->add_option("--r", rev_r, "Number of paths");
  rev->add_option("--x", rev_x, "Round cap x (paths have length 2x+3)");
  rev->add_option("--mode", rev_mode, "exhaustive or per_path");
  rev->add_option("--seed", rev_seed, "Random seed");
  std::string ct_program = "empty", ct_problem = "MFVS";
  std::size_t ct_k = 2, ct_t = 2, ct_d = 13, ct_cap = 0;
  auto* ct = attack->add_subcommand("cycle-tree", "Cycle star against its tree variant");
  ct->add_option("--program", ct_program, "empty, all, high-degree or truncated-greedy");
  ct->add_option("--problem", ct_problem, "MFVS or MFES");
  ct->add_option("--k", ct_k, "Hub degree");
  ct->add_option("--t", ct_t, "Cycles per hub neighbor");
  ct->add_option("--d", ct_d, "Cycle length parameter");
  ct->add_option("--cap", ct_cap, "Round cap (default floor(d/2)-2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (*gen) return cli::generate(gen_family, collect_params(gen_pairs, gen_joined), gen_out, std::cerr);

    if (*run) {
      if (!run_eps.empty()) ro.eps = parse_rational(run_eps);
      if (run->count("--budget")) ro.budget = run_budget;
      if (run->count("--threshold")) ro.threshold = run_threshold;
      const cli::GraphSource src{run_path, run_family, collect_params(run_pairs, run_joined)};
      const Graph g = cli::load_graph(src);
      const auto outcome = cli::execute_run(g, ro, src);
      std::cout << json_line(outcome.record);
      return outcome.exit_code;
    }

    if (*sweep) {
      const auto spec = cli::parse_sweep_spec(read_file(sweep_spec));
      const std::string csv = cli::sweep_csv(spec, sweep_threads);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        write_file(sweep_out, csv);
      }
      return cli::kExitAccept;
    }

    if (*verify) {
      const cli::GraphSource src{ver_path, ver_family, collect_params(ver_pairs, ver_joined)};
      const Graph g = cli::load_graph(src);
      const Problem p = cli::parse_problem(ver_problem);
      if (ver_solution.empty() == ver_solution_file.empty()) {
        throw cli::UsageError("give exactly one of --solution and --solution-file");
      }
      const std::string text = ver_solution.empty() ? read_file(ver_solution_file) : ver_solution;
      return cli::verify(g, p, parse_solution(p, text), ver_limit, std::cout);
    }

    if (*rev) {
      const Problem p = cli::parse_problem(rev_problem);
      AttackMode mode;
      if (rev_mode == "exhaustive") {
        mode = AttackMode::kExhaustive;
      } else if (rev_mode == "per_path") {
        mode = AttackMode::kPerPath;
      } else {
        throw cli::UsageError("unknown attack mode " + rev_mode);
      }
      const auto rep = reversal_attack(cli::named_program(rev_program, p, rev_x), p, rev_r, rev_x, mode, rev_seed);
      std::cout << cli::report_json(rep).dump() << '\n';
      return rep.disqualified ? cli::kExitBudget : cli::kExitAccept;
    }

    if (*ct) {
      const Problem p = cli::parse_problem(ct_problem);
      std::optional<std::size_t> cap;
      if (ct->count("--cap")) cap = ct_cap;
      const std::size_t rounds = cap.value_or(ct_d / 2 - 2);
      const auto rep = cycle_vs_tree_attack(cli::named_program(ct_program, p, rounds), p, ct_k, ct_t, ct_d, cap);
      std::cout << cli::report_json(rep).dump() << '\n';
      return rep.disqualified ? cli::kExitBudget : cli::kExitAccept;
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "kparam: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "kparam: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kparam: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kparam: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitUsage;
}
