// Operator front-end: translates flags into one JSON options object and hands
// it to the shared library's command cores. All real logic lives behind the C
// interface; this file owns only flag parsing and report/table output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hardmdp.h"

namespace {

using Json = nlohmann::ordered_json;

struct CommonFlags {
  std::string formula, dimacs, descriptor, random_kind;
  uint64_t v = 0, m = 0, seed = 1;
  uint32_t r = 0;
  int k = 3;
  std::string H, mode, scenario, q, cap;
  std::string planner, budget, oracle, query_log;
  uint64_t episodes = 0, episode_len = 0, depth_bound = 0, step_limit = 0;
  std::string report_out;
};

// Register the flag set shared by every subcommand; returns the option
// pointers we need for "was it given?" checks via ->count().
void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--formula", f.formula, "DIMACS CNF file");
  cmd->add_option("--dimacs", f.dimacs, "inline DIMACS text");
  cmd->add_option("--descriptor", f.descriptor, "instance descriptor JSON file (from gen)");
  cmd->add_option("--random", f.random_kind, "generate a formula: unique | unsat")
      ->check(CLI::IsMember({"unique", "unsat"}));
  cmd->add_option("--v", f.v, "variable count for --random");
  cmd->add_option("--r", f.r, "value exponent r");
  cmd->add_option("--k", f.k, "actions per state: 2 or 3 (default 3)");
  cmd->add_option("--H", f.H, "horizon (verification mode only; decimal)");
  cmd->add_option("--mode", f.mode, "verification | reduction")
      ->check(CLI::IsMember({"verification", "reduction"}));
  cmd->add_option("--scenario", f.scenario, "exponent schedule: poly3 | poly2 | subexp | appendix")
      ->check(CLI::IsMember({"poly3", "poly2", "subexp", "appendix"}));
  cmd->add_option("--q", f.q, "schedule parameter q (\"1\", \"3/2\", \"1.25\")");
  cmd->add_option("--m", f.m, "schedule parameter m (appendix)");
  cmd->add_option("--planner", f.planner,
                  "exhaustive | greedy | regression | oracle-optimal");
  cmd->add_option("--budget", f.budget, "oracle call budget (decimal)");
  cmd->add_option("--oracle", f.oracle, "full | simulator (solve only)")
      ->check(CLI::IsMember({"full", "simulator"}));
  cmd->add_option("--seed", f.seed, "master seed (default 1)");
  cmd->add_option("--cap", f.cap, "exact-solver work cap (also: HARDMDP_CAP env)");
  cmd->add_option("--query-log", f.query_log, "write an audit log of oracle queries");
  cmd->add_option("--episodes", f.episodes, "regression planner: exploration episodes");
  cmd->add_option("--episode-len", f.episode_len, "regression planner: steps per episode");
  cmd->add_option("--depth-bound", f.depth_bound, "exhaustive planner: depth bound");
  cmd->add_option("--step-limit", f.step_limit, "greedy planner: walk step limit");
  cmd->add_option("--report-out", f.report_out, "write the JSON report to this file");
}

void put_if(CLI::App* cmd, const char* flag, Json& o, const char* key, const Json& value) {
  if (cmd->count(flag) > 0) o[key] = value;
}

Json build_options(CLI::App* cmd, const CommonFlags& f) {
  Json o = Json::object();
  put_if(cmd, "--formula", o, "formula", f.formula);
  put_if(cmd, "--dimacs", o, "dimacs", f.dimacs);
  put_if(cmd, "--descriptor", o, "descriptor", f.descriptor);
  put_if(cmd, "--random", o, "random", f.random_kind);
  put_if(cmd, "--v", o, "v", f.v);
  put_if(cmd, "--r", o, "r", f.r);
  put_if(cmd, "--k", o, "k", f.k);
  put_if(cmd, "--H", o, "H", f.H);
  put_if(cmd, "--mode", o, "mode", f.mode);
  put_if(cmd, "--scenario", o, "scenario", f.scenario);
  put_if(cmd, "--q", o, "q", f.q);
  put_if(cmd, "--m", o, "m", f.m);
  put_if(cmd, "--planner", o, "planner", f.planner);
  put_if(cmd, "--budget", o, "budget", f.budget);
  put_if(cmd, "--oracle", o, "oracle", f.oracle);
  put_if(cmd, "--seed", o, "seed", f.seed);
  put_if(cmd, "--cap", o, "cap", f.cap);
  put_if(cmd, "--query-log", o, "query_log", f.query_log);
  put_if(cmd, "--episodes", o, "episodes", f.episodes);
  put_if(cmd, "--episode-len", o, "episode_len", f.episode_len);
  put_if(cmd, "--depth-bound", o, "depth_bound", f.depth_bound);
  put_if(cmd, "--step-limit", o, "step_limit", f.step_limit);
  return o;
}

int run(const std::string& name, const Json& options, const std::string& report_out,
        bool table_to_stdout) {
  char* report = nullptr;
  char* table = nullptr;
  int exit_code = 0;
  hardmdp_status st = hardmdp_run_command(name.c_str(), options.dump().c_str(), &report, &table,
                                          &exit_code);
  if (st != HARDMDP_OK) {
    std::cerr << "error: " << hardmdp_last_error() << "\n";
    hardmdp_free_string(report);
    hardmdp_free_string(table);
    return 3;
  }
  if (table_to_stdout && table && table[0] != '\0') {
    std::cout << table;
  } else if (report) {
    std::cout << report;
  }
  if (!report_out.empty() && report) {
    std::ofstream out(report_out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << report_out << "\n";
      hardmdp_free_string(report);
      hardmdp_free_string(table);
      return 3;
    }
    out << report;
  }
  hardmdp_free_string(report);
  hardmdp_free_string(table);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNF-to-MDP compiler, exact verifier and SAT-reduction harness"};
  app.require_subcommand(1);

  CommonFlags gen_f, ver_f, sol_f, red_f, iso_f, ben_f;

  CLI::App* gen = app.add_subcommand("gen", "compile a formula into an instance descriptor");
  add_common(gen, gen_f);

  CLI::App* verify =
      app.add_subcommand("verify", "exact DP check of the value law, Q identity and linearity");
  add_common(verify, ver_f);
  uint64_t inject_fault = 0;
  std::string values_out;
  verify->add_option("--inject-fault", inject_fault,
                     "perturb the checked law at this visit index (detector sanity)");
  verify->add_option("--values-out", values_out, "export the exact value table to this file");

  CLI::App* solve = app.add_subcommand("solve", "run a planner and grade the returned policy");
  add_common(solve, sol_f);

  CLI::App* reduce = app.add_subcommand("reduce", "decide satisfiability through the MDP");
  add_common(reduce, red_f);
  bool use_isolation = false;
  uint64_t trials = 0;
  reduce->add_flag("--isolate", use_isolation, "add the parity-isolation front-end");
  reduce->add_option("--trials", trials, "pipeline trials (default 8(v+1) with --isolate)");

  CLI::App* isolate = app.add_subcommand("isolate", "emit parity-isolation candidates");
  add_common(isolate, iso_f);
  bool iso_check = false, iso_emit = false;
  isolate->add_flag("--check", iso_check, "brute-force the projection property (v <= 12)");
  isolate->add_flag("--emit-dimacs", iso_emit, "inline each candidate's DIMACS in the report");

  CLI::App* bench = app.add_subcommand("bench", "formulas x planners x budgets suite");
  add_common(bench, ben_f);
  std::string suite;
  bench->add_option("--suite", suite, "suite description JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);         // prints help/message
    return rc == 0 ? 0 : 2;      // usage errors are exit 2 by contract
  }

  if (gen->parsed()) return run("gen", build_options(gen, gen_f), gen_f.report_out, false);
  if (verify->parsed()) {
    Json o = build_options(verify, ver_f);
    if (verify->count("--inject-fault")) o["inject_fault"] = inject_fault;
    if (verify->count("--values-out")) o["values_out"] = values_out;
    return run("verify", o, ver_f.report_out, false);
  }
  if (solve->parsed()) return run("solve", build_options(solve, sol_f), sol_f.report_out, false);
  if (reduce->parsed()) {
    Json o = build_options(reduce, red_f);
    if (reduce->count("--isolate")) o["isolate"] = use_isolation;
    if (reduce->count("--trials")) o["trials"] = trials;
    return run("reduce", o, red_f.report_out, false);
  }
  if (isolate->parsed()) {
    Json o = build_options(isolate, iso_f);
    if (isolate->count("--check")) o["check"] = iso_check;
    if (isolate->count("--emit-dimacs")) o["emit_dimacs"] = iso_emit;
    return run("isolate", o, iso_f.report_out, false);
  }
  if (bench->parsed()) {
    Json o = build_options(bench, ben_f);
    if (bench->count("--suite")) o["suite"] = suite;
    return run("bench", o, ben_f.report_out, true);
  }
  return 2;
}
