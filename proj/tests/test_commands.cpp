#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "helpers.hpp"

using namespace hardmdp;
using namespace hardmdp::testutil;

namespace {

Json fig1_opts() { return Json{{"dimacs", kFig1Dimacs}, {"r", 2}, {"k", 3}}; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen emits parameters, bounds and a reloadable descriptor") {
  Json opts = fig1_opts();
  opts["seed"] = 42;
  CommandResult res = run_command("gen", opts);
  CHECK(res.exit_code == 0);
  const Json& rep = res.report;
  CHECK(rep.at("schema") == "hardmdp-report-v1");
  CHECK(rep.at("command") == "gen");
  CHECK(rep.at("seed") == 42);
  CHECK(rep.at("formula").at("source") == "inline");
  CHECK(rep.at("formula").at("v") == 4);
  CHECK(rep.at("formula").at("clauses") == 7);
  // default mode for gen is the reduction shape: H = v^r
  CHECK(rep.at("params").at("mode") == "reduction");
  CHECK(rep.at("params").at("H") == "16");
  CHECK(rep.at("params").at("d") == "21");
  CHECK(rep.at("params").at("degree") == 2);
  CHECK(rep.at("bound_check").at("root_ok") == true);
  CHECK(rep.at("bound_check").at("last_layer_ok") == true);
  CHECK(rep.at("descriptor").at("schema") == "hardmdp.instance/1");
  CHECK(rep.at("exit_code") == 0);

  SUBCASE("descriptor file feeds other commands, seed included") {
    const std::string path = "/tmp/hardmdp_cmd_desc.json";
    std::ofstream(path) << rep.at("descriptor").dump();
    CommandResult ver = run_command("verify", Json{{"descriptor", path}});
    CHECK(ver.exit_code == 0);
    CHECK(ver.report.at("seed") == 42);  // inherited from the descriptor
    CHECK(ver.report.at("params").at("H") == "16");
    CHECK(ver.report.at("formula").at("source") == "descriptor");
  }
}

TEST_CASE("gen resolves scenarios and random formulas") {
  CommandResult sc = run_command(
      "gen", Json{{"dimacs", kFig1Dimacs}, {"scenario", "poly3"}, {"q", "1"}});
  CHECK(sc.exit_code == 0);
  CHECK(sc.report.at("schedule").at("r") == 8);
  CHECK(sc.report.at("schedule").at("q") == "1/1");
  CHECK(sc.report.at("params").at("H") == "65536");  // 4^8

  Json ropts{{"random", "unique"}, {"v", 6}, {"r", 2}, {"seed", 7}};
  CommandResult ra = run_command("gen", ropts);
  CommandResult rb = run_command("gen", ropts);
  CHECK(ra.exit_code == 0);
  CHECK(ra.report.at("formula").at("source") == "random-unique");
  CHECK(ra.report.at("formula").at("solutions") == 1);
  CHECK(ra.report.dump() == rb.report.dump());

  CHECK(run_command("gen", Json{{"random", "unsat"}, {"v", 5}, {"r", 2}})
            .report.at("formula")
            .at("solutions") == 0);
}

TEST_CASE("gen rejects contradictory or malformed options") {
  auto code = [](const Json& o) { return run_command("gen", o).exit_code; };
  CHECK(code(Json{{"dimacs", kFig1Dimacs}, {"r", 2}, {"scenario", "poly3"}}) == 2);
  CHECK(code(Json{{"dimacs", kFig1Dimacs}}) == 2);                       // no exponent
  CHECK(code(Json{{"r", 2}}) == 2);                                      // no formula
  CHECK(code(Json{{"dimacs", kFig1Dimacs}, {"formula", "x"}, {"r", 2}}) == 2);
  CHECK(code(Json{{"random", "unique"}, {"r", 2}}) == 2);                // needs v
  CHECK(code(Json{{"dimacs", kFig1Dimacs}, {"r", 2}, {"k", 4}}) == 2);   // k not in {2,3}
  CHECK(code(Json{{"dimacs", "p cnf oops"}, {"r", 2}}) == 2);            // parse error
  CHECK(code(Json{{"formula", "/nonexistent/f.cnf"}, {"r", 2}}) == 3);   // io error
  CommandResult bad = run_command("gen", Json{{"dimacs", kFig1Dimacs}, {"r", 2}, {"k", 4}});
  CHECK(bad.report.at("error").at("code") == "invalid_argument");
  CHECK(bad.report.at("exit_code") == 2);
}

TEST_CASE("verify certifies the three claims and reports exact dimensions") {
  Json opts = fig1_opts();  // verification default H = v
  opts["values_out"] = "/tmp/hardmdp_cmd_values.txt";
  CommandResult res = run_command("verify", opts);
  CHECK(res.exit_code == 0);
  const Json& rep = res.report;
  CHECK(rep.at("command") == "verify");
  CHECK(rep.at("params").at("mode") == "verification");
  CHECK(rep.at("params").at("H") == "4");
  CHECK(rep.at("unsat") == false);
  CHECK(rep.at("value_law").at("exact") == true);
  CHECK(rep.at("q_identity").at("exact") == true);
  CHECK(rep.at("linearity").at("exact") == true);
  CHECK(rep.at("linearity").at("d_used") == "21");
  CHECK(rep.at("linearity").at("d") == "21");
  CHECK(rep.at("linearity").at("two_v_pow_D") == "32");
  CHECK(rep.at("linearity").at("dimension_ok") == true);
  CHECK(rep.at("stats").at("normal_states").get<uint64_t>() > 0);
  CHECK(rep.at("values_out") == "/tmp/hardmdp_cmd_values.txt");
  std::string values = slurp("/tmp/hardmdp_cmd_values.txt");
  CHECK(values.substr(0, 6) == "N:0:0 ");
  CHECK(std::count(values.begin(), values.end(), '\n') ==
        rep.at("stats").at("normal_states").get<long>() +
            rep.at("stats").at("intermediate_states").get<long>());
}

TEST_CASE("verify flags an injected fault through the exit code") {
  Json opts = fig1_opts();
  opts["inject_fault"] = 0;
  CommandResult res = run_command("verify", opts);
  CHECK(res.exit_code == 1);
  CHECK(res.report.at("value_law").at("exact") == false);
  std::string cx = res.report.at("value_law").at("counterexample").get<std::string>();
  CHECK(cx.find("dp=") != std::string::npos);
  // the fault perturbs only the law prediction; the exact identities hold
  CHECK(res.report.at("q_identity").at("exact") == true);
  CHECK(res.report.at("linearity").at("exact") == true);
}

TEST_CASE("verify respects work caps from option and environment") {
  Json opts = fig1_opts();
  opts["cap"] = 10;
  CommandResult res = run_command("verify", opts);
  CHECK(res.exit_code == 3);
  CHECK(res.report.at("error").at("code") == "cap_exceeded");

  setenv("HARDMDP_CAP", "10", 1);
  CommandResult env = run_command("verify", fig1_opts());
  CHECK(env.exit_code == 3);
  CHECK(env.report.at("error").at("code") == "cap_exceeded");

  setenv("HARDMDP_CAP", "notanumber", 1);
  CHECK(run_command("verify", fig1_opts()).exit_code == 2);
  unsetenv("HARDMDP_CAP");
  CHECK(run_command("verify", fig1_opts()).exit_code == 0);
}

TEST_CASE("solve grades the planner sequence against the exact optimum") {
  Json opts = fig1_opts();
  opts["planner"] = "exhaustive";
  opts["budget"] = "100000";
  opts["query_log"] = "/tmp/hardmdp_cmd_qlog.txt";
  CommandResult res = run_command("solve", opts);
  CHECK(res.exit_code == 0);
  const Json& rep = res.report;
  CHECK(rep.at("command") == "solve");
  CHECK(rep.at("planner") == "exhaustive");
  CHECK(rep.at("oracle") == "simulator");
  CHECK(rep.at("budget") == "100000");
  CHECK(rep.at("complete") == true);
  CHECK(rep.at("policy").at("good") == true);
  CHECK(rep.at("policy").at("v_pi") == rep.at("policy").at("v_star"));
  CHECK(rep.at("policy").at("margin") == "1/4");
  CHECK(rep.at("policy").at("reached_reward") == true);
  CHECK(rep.at("query_log") == "/tmp/hardmdp_cmd_qlog.txt");
  std::string log = slurp("/tmp/hardmdp_cmd_qlog.txt");
  CHECK(log.find("T N:0:0") != std::string::npos);
  CHECK(rep.at("calls").get<uint64_t>() <= 100000);

  SUBCASE("oracle-assisted baseline needs the full oracle") {
    Json full = fig1_opts();
    full["planner"] = "oracle-optimal";
    full["oracle"] = "full";
    CommandResult ok = run_command("solve", full);
    CHECK(ok.exit_code == 0);
    CHECK(ok.report.at("policy").at("good") == true);

    full["oracle"] = "simulator";
    CHECK(run_command("solve", full).exit_code == 2);  // refused loudly
  }

  SUBCASE("unknown planner is a usage error") {
    Json bad = fig1_opts();
    bad["planner"] = "dijkstra";
    CommandResult r = run_command("solve", bad);
    CHECK(r.exit_code == 2);
    CHECK(r.report.at("error").at("code") == "invalid_argument");
  }

  SUBCASE("policy grading skips when the exact check exceeds the cap") {
    Json capped = fig1_opts();
    capped["planner"] = "greedy";
    capped["budget"] = 3;
    capped["cap"] = "100";  // instance needs 768 units of DP work
    CommandResult r = run_command("solve", capped);
    CHECK(r.exit_code == 1);  // incomplete plan, no exact grade
    CHECK(r.report.at("policy").contains("skipped"));
    CHECK(r.report.at("budget_exhausted") == true);
  }
}

TEST_CASE("reduce runs the single-shot pipeline with certified decisions") {
  Json opts = fig1_opts();
  opts["budget"] = "100000";
  CommandResult res = run_command("reduce", opts);
  CHECK(res.exit_code == 0);
  const Json& rep = res.report;
  CHECK(rep.at("command") == "reduce");
  CHECK(rep.at("pipeline") == "a_sat");
  CHECK(rep.at("decision") == "YES");
  CHECK(rep.at("witness").at("pm") == "++-+");
  CHECK(rep.at("final_depth") == 3);
  CHECK(rep.at("policy_value") == "289/400");
  CHECK(rep.at("budget") == "100000");
  CHECK(rep.at("analysis") ==
        Json{{"rl_error", "1/10"}, {"sat_error", "1/8"}, {"conditioning", "7/8"}});

  // identical inputs, identical bytes
  CommandResult res2 = run_command("reduce", opts);
  CHECK(res.report.dump() == res2.report.dump());

  Json un{{"dimacs", "p cnf 2 4\n1 2 2 0\n1 -2 -2 0\n-1 2 2 0\n-1 -2 -2 0\n"},
          {"r", 2},
          {"budget", "100000"}};
  CommandResult no = run_command("reduce", un);
  CHECK(no.exit_code == 1);
  CHECK(no.report.at("decision") == "NO");
  CHECK_FALSE(no.report.contains("witness"));
}

TEST_CASE("reduce drives the isolation pipeline when asked") {
  Json opts{{"dimacs", "p cnf 3 1\n1 1 1 0\n"}, {"r", 2}, {"budget", "100000"},
            {"isolate", true}, {"seed", 9}};
  CommandResult res = run_command("reduce", opts);
  CHECK(res.exit_code == 0);
  CHECK(res.report.at("pipeline") == "end_to_end");
  CHECK(res.report.at("isolation") == true);
  CHECK(res.report.at("decision") == "YES");
  CHECK(res.report.at("witness").at("pm").get<std::string>().size() == 3);
  CHECK(res.report.at("attempts").is_array());
  CHECK(res.report.at("attempts").size() == res.report.at("candidates_run").get<size_t>());
  CHECK(res.report.at("attempts_truncated") == false);
  CHECK(res.report.at("attempts").back().at("yes") == true);

  // trials>1 without isolation also routes through the multi-trial pipeline
  Json multi = fig1_opts();
  multi["budget"] = "100000";
  multi["trials"] = 2;
  CommandResult mt = run_command("reduce", multi);
  CHECK(mt.report.at("pipeline") == "end_to_end");
  CHECK(mt.report.at("isolation") == false);
  CHECK(mt.exit_code == 0);
}

TEST_CASE("isolate reports candidates and optional exact projection checks") {
  Json opts{{"dimacs", kFig1Dimacs}, {"check", true}, {"emit_dimacs", true}, {"seed", 5}};
  CommandResult res = run_command("isolate", opts);
  CHECK(res.exit_code == 0);
  const Json& cands = res.report.at("candidates");
  REQUIRE(cands.size() == 5);  // v+1
  for (size_t i = 0; i < cands.size(); ++i) {
    const Json& row = cands[i];
    CHECK(row.at("parities") == i);
    CHECK(row.at("projects_exactly") == true);
    CHECK(row.at("v").get<uint32_t>() >= 4);
    CHECK(row.at("parity_list").size() == i);
    // emitted candidate must parse back to the same shape
    Formula f = parse_dimacs(row.at("dimacs").get<std::string>());
    CHECK(f.v == row.at("v").get<uint32_t>());
    CHECK(f.clause_count() == row.at("clauses").get<size_t>());
  }
  // candidate 0 is the formula itself: projection count = solution count
  CHECK(cands[0].at("projected_solutions") == 1);
}

TEST_CASE("bench runs a deterministic suite and keeps timing out of the report") {
  Json suite{{"v", Json::array({4, 5})}, {"per_v", 1},   {"r", 2},
             {"k", 3},                   {"runs", 2},    {"budgets", Json::array({"100000"})},
             {"planners", Json::array({"exhaustive"})}};
  Json opts{{"suite_inline", suite}, {"seed", 3}};
  CommandResult res = run_command("bench", opts);
  CHECK(res.exit_code == 0);
  const Json& rep = res.report;
  CHECK(rep.at("command") == "bench");
  CHECK(rep.at("suite").at("formulas") == 2);
  REQUIRE(rep.at("cells").size() == 2);
  for (const Json& cell : rep.at("cells")) {
    CHECK(cell.at("successes") == 2);  // exhaustive always cracks unique-SAT here
    CHECK(cell.at("success_rate") == "1/1");
    CHECK_FALSE(cell.contains("wall_ms"));
  }
  CHECK(res.table.find("wall_ms") != std::string::npos);
  CHECK(res.table.find("exhaustive") != std::string::npos);

  CommandResult res2 = run_command("bench", opts);
  CHECK(res.report.dump() == res2.report.dump());  // table may differ, report not

  SUBCASE("suite validation") {
    CHECK(run_command("bench", Json{{"suite_inline", Json::object()}}).exit_code == 0);
    Json badp = opts;
    badp["suite_inline"]["planners"] = Json::array({"dijkstra"});
    CHECK(run_command("bench", badp).exit_code == 2);
    std::ofstream("/tmp/hardmdp_cmd_suite_bad.json") << "{not json";
    CommandResult bad = run_command("bench", Json{{"suite", "/tmp/hardmdp_cmd_suite_bad.json"}});
    CHECK(bad.exit_code == 2);
    CHECK(bad.report.at("error").at("code") == "parse_error");
    CHECK(run_command("bench", Json{{"suite", "/nonexistent/s.json"}}).exit_code == 3);
  }
}

TEST_CASE("dispatch rejects unknown commands and non-object options") {
  CommandResult res = run_command("frobnicate", Json::object());
  CHECK(res.exit_code == 2);
  CHECK(res.report.at("error").at("code") == "invalid_argument");
  CHECK(res.report.at("command") == "frobnicate");
  CHECK(run_command("gen", Json::array()).exit_code == 2);
}

TEST_CASE("exit codes follow the documented contract") {
  CHECK(exit_code_for(Errc::invalid_argument) == 2);
  CHECK(exit_code_for(Errc::parse) == 2);
  CHECK(exit_code_for(Errc::precondition) == 2);
  CHECK(exit_code_for(Errc::state) == 2);
  CHECK(exit_code_for(Errc::cap) == 3);
  CHECK(exit_code_for(Errc::io) == 3);
  CHECK(exit_code_for(Errc::budget) == 3);
  CHECK(exit_code_for(Errc::internal) == 3);
}

TEST_CASE("exponent text accepts integers, fractions and decimals") {
  CHECK(parse_exponent_text("1") == Rat(1));
  CHECK(parse_exponent_text("3/2") == make_rat(Int(3), Int(2)));
  CHECK(parse_exponent_text("1.25") == make_rat(Int(5), Int(4)));
  CHECK(parse_exponent_text(".5") == make_rat(Int(1), Int(2)));
  CHECK(throws_code([] { parse_exponent_text("2."); }, Errc::invalid_argument));
  CHECK(throws_code([] { parse_exponent_text(""); }, Errc::invalid_argument));
  CHECK(throws_code([] { parse_exponent_text("x"); }, Errc::invalid_argument));
  CHECK(throws_code([] { parse_exponent_text("1.2.3"); }, Errc::invalid_argument));
  CHECK(throws_code([] { parse_exponent_text("-1"); }, Errc::invalid_argument));
}
