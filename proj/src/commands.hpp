#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "rational.hpp"

namespace hardmdp {

using Json = nlohmann::ordered_json;

// One command run = one JSON report document (deterministic field order and
// content for fixed inputs+seed; nothing time- or host-dependent goes in).
// Bench additionally renders a human table, which is where wall-clock timing
// lives so the report itself stays byte-reproducible.
struct CommandResult {
  int exit_code = 0;
  Json report;
  std::string table;
};

// Options arrive as one JSON object (the CLI builds it from flags, the C API
// passes it through verbatim). Shared keys:
//   formula     path to a DIMACS file
//   dimacs      inline DIMACS text
//   descriptor  path to an instance descriptor emitted by gen
//   random      "unique" | "unsat" (needs v; seeded)
//   v,r,k,H     instance parameters (H/budget accept numbers or strings)
//   scenario,q,m   exponent schedule instead of r
//   mode        "verification" | "reduction"
//   seed        master seed (default 1)
//   cap         DP work cap (else HARDMDP_CAP env, else default)
CommandResult cmd_gen(const Json& opts);
CommandResult cmd_verify(const Json& opts);   // + inject_fault, values_out
CommandResult cmd_solve(const Json& opts);    // + planner, budget, oracle, query_log
CommandResult cmd_reduce(const Json& opts);   // + planner, budget, isolate, trials, query_log
CommandResult cmd_isolate(const Json& opts);  // + check, emit_dimacs
CommandResult cmd_bench(const Json& opts);    // + suite (path) or suite_inline

// Dispatch by name; thrown Errors become an error report plus the stable
// exit-code contract: 0 ok/YES/good, 1 NO/not-good/identity-failed,
// 2 usage or bad input, 3 cap exceeded or internal.
CommandResult run_command(const std::string& name, const Json& opts);

int exit_code_for(Errc code);

// "1", "3/2", "1.25" -> exact rational (the CLI's exponent syntax).
Rat parse_exponent_text(const std::string& text);

// Flat report fields of one a_sat run (shared by cmd_reduce and the C API).
struct ASatReport;
Json asat_report_json(const ASatReport& ar);

}  // namespace hardmdp
