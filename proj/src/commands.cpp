#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "exact_solver.hpp"
#include "generator.hpp"
#include "instance.hpp"
#include "isolate.hpp"
#include "oracle.hpp"
#include "planners.hpp"
#include "reduction.hpp"

namespace hardmdp {

namespace {

constexpr const char* kSchema = "hardmdp-report-v1";

// ---- option helpers ------------------------------------------------------

[[noreturn]] void usage(const std::string& msg) { fail(Errc::invalid_argument, msg); }

bool has(const Json& o, const char* key) { return o.contains(key) && !o.at(key).is_null(); }

std::string get_str(const Json& o, const char* key) {
  const Json& j = o.at(key);
  if (!j.is_string()) usage(std::string(key) + ": expected a string");
  return j.get<std::string>();
}

uint64_t get_u64(const Json& o, const char* key, uint64_t fallback) {
  if (!has(o, key)) return fallback;
  const Json& j = o.at(key);
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer()) {
    // in-memory construction tags small literals as signed; accept them
    int64_t s = j.get<int64_t>();
    if (s >= 0) return uint64_t(s);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      size_t pos = 0;
      uint64_t val = std::stoull(s, &pos);
      if (pos == s.size()) return val;
    } catch (...) {
    }
  }
  usage(std::string(key) + ": expected a non-negative integer");
}

bool get_bool(const Json& o, const char* key, bool fallback) {
  if (!has(o, key)) return fallback;
  const Json& j = o.at(key);
  if (!j.is_boolean()) usage(std::string(key) + ": expected a boolean");
  return j.get<bool>();
}

// Big integers ride as strings or JSON integers.
Int get_int(const Json& o, const char* key) {
  const Json& j = o.at(key);
  if (j.is_number_unsigned()) return Int(j.get<uint64_t>());
  if (j.is_number_integer()) return Int(j.get<int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (!s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos) {
      return Int(s);
    }
  }
  usage(std::string(key) + ": expected an integer (number or decimal string)");
}

Int resolve_cap(const Json& o) {
  if (has(o, "cap")) return get_int(o, "cap");
  if (const char* env = std::getenv("HARDMDP_CAP")) {
    std::string s(env);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      usage("HARDMDP_CAP: expected a decimal integer");
    return Int(s);
  }
  return Int(kDefaultWorkCap);
}

std::string int_str(const Int& x) { return x.get_str(); }

// ---- formula / instance resolution ---------------------------------------

struct ResolvedFormula {
  Formula formula;
  Json info;  // where the formula came from, echoed in the report
};

ResolvedFormula resolve_formula(const Json& o, uint64_t seed) {
  int sources = int(has(o, "formula")) + int(has(o, "dimacs")) + int(has(o, "random"));
  if (sources == 0) usage("no formula given: use formula=<path>, dimacs=<text> or random=unique|unsat");
  if (sources > 1) usage("give exactly one of formula / dimacs / random");
  ResolvedFormula out;
  if (has(o, "formula")) {
    std::string path = get_str(o, "formula");
    out.formula = read_dimacs_file(path);
    out.info = Json{{"source", "file"}, {"path", path}};
  } else if (has(o, "dimacs")) {
    out.formula = parse_dimacs(get_str(o, "dimacs"));
    out.info = Json{{"source", "inline"}};
  } else {
    std::string kind = get_str(o, "random");
    uint32_t v = uint32_t(get_u64(o, "v", 0));
    if (v == 0) usage("random generation needs v");
    GeneratedFormula gen;
    if (kind == "unique") gen = random_unique_sat(v, seed);
    else if (kind == "unsat") gen = random_unsat(v, seed);
    else usage("random: expected \"unique\" or \"unsat\"");
    out.formula = std::move(gen.formula);
    out.info = Json{{"source", "random-" + kind},
                    {"attempts", gen.attempts},
                    {"solutions", gen.solutions}};
  }
  out.info["v"] = out.formula.v;
  out.info["clauses"] = out.formula.clause_count();
  return out;
}

struct ResolvedInstance {
  std::shared_ptr<const Instance> inst;
  uint64_t seed = 1;
  Json formula_info;
  Json schedule_info;  // null unless a scenario was used
};

uint32_t resolve_r(const Json& o, uint32_t v, Json& schedule_info) {
  if (has(o, "r") && has(o, "scenario")) usage("give either r or a scenario, not both");
  if (has(o, "r")) return uint32_t(get_u64(o, "r", 0));
  if (!has(o, "scenario")) usage("no exponent given: use r=<n> or scenario=<name>");
  Scenario sc = scenario_from_name(get_str(o, "scenario"));
  Rat q = has(o, "q") ? parse_exponent_text(get_str(o, "q")) : Rat(1);
  uint32_t m = uint32_t(get_u64(o, "m", 0));
  uint32_t r = schedule_r(sc, q, m, v);
  schedule_info = Json{{"scenario", scenario_name(sc)}, {"q", rat_str(q)}, {"m", m}, {"r", r}};
  return r;
}

ResolvedInstance resolve_instance(const Json& o, Mode default_mode) {
  ResolvedInstance out;
  out.seed = get_u64(o, "seed", 1);
  if (has(o, "descriptor")) {
    std::string path = get_str(o, "descriptor");
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open descriptor: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ParsedDescriptor pd = parse_descriptor(ss.str());
    if (!has(o, "seed")) out.seed = pd.seed;
    out.formula_info = Json{{"source", "descriptor"},
                            {"path", path},
                            {"v", pd.instance.formula.v},
                            {"clauses", pd.instance.formula.clause_count()}};
    out.inst = std::make_shared<Instance>(std::move(pd.instance));
    return out;
  }
  ResolvedFormula rf = resolve_formula(o, out.seed);
  out.formula_info = std::move(rf.info);
  uint32_t r = resolve_r(o, rf.formula.v, out.schedule_info);
  int k = int(get_u64(o, "k", 3));
  Mode mode = has(o, "mode") ? mode_from_name(get_str(o, "mode")) : default_mode;
  std::optional<Int> H;
  if (has(o, "H")) H = get_int(o, "H");
  else if (mode == Mode::verification) H = Int(rf.formula.v);  // desk-scale default
  out.inst = std::make_shared<Instance>(make_instance(std::move(rf.formula), r, k, mode, H));
  return out;
}

// ---- report fragments ------------------------------------------------------

Json params_json(const InstanceParams& p) {
  return Json{{"mode", mode_name(p.mode)}, {"k", p.k},       {"v", p.v},
              {"r", p.r},                  {"H", int_str(p.H)}, {"degree", p.degree},
              {"d", int_str(p.d)}};
}

Json assignment_json(const Assignment& a) {
  return Json{{"pm", a.pm_string()}, {"hex", a.hex()}};
}

Json bound_check_json(const InstanceParams& p) {
  BoundCheckResult b = bound_check(p);
  return Json{{"root_lower", rat_str(b.root_lower)},
              {"root_ok", b.root_ok},
              {"last_layer_upper", rat_str(b.last_layer_upper)},
              {"last_layer_bound", rat_str(b.last_layer_bound)},
              {"last_layer_ok", b.last_layer_ok}};
}

PlannerConfig planner_config_from(const Json& o) {
  PlannerConfig cfg;
  cfg.seed = get_u64(o, "seed", 1);
  cfg.depth_bound = uint32_t(get_u64(o, "depth_bound", 0));
  cfg.episodes = uint32_t(get_u64(o, "episodes", cfg.episodes));
  cfg.episode_len = get_u64(o, "episode_len", 0);
  cfg.step_limit = get_u64(o, "step_limit", cfg.step_limit);
  return cfg;
}

struct LogFile {
  std::ofstream stream;
  std::string path;
  std::ostream* sink = nullptr;
};

LogFile open_query_log(const Json& o) {
  LogFile lf;
  if (!has(o, "query_log")) return lf;
  lf.path = get_str(o, "query_log");
  lf.stream.open(lf.path);
  if (!lf.stream) fail(Errc::io, "cannot open query log: " + lf.path);
  lf.sink = &lf.stream;
  return lf;
}

}  // namespace

Json asat_report_json(const ASatReport& ar) {
  Json j{{"decision", ar.yes ? "YES" : "NO"},
         {"final_assignment", assignment_json(ar.final_assignment)},
         {"final_depth", ar.final_depth}};
  if (ar.witness) j["witness"] = assignment_json(*ar.witness);
  j["policy_value"] = rat_str(ar.policy_value);
  j["sequence_length"] = ar.sequence_length;
  j["planner_complete"] = ar.planner_complete;
  j["budget_exhausted"] = ar.budget_exhausted;
  j["malformed_sequence"] = ar.malformed_sequence;
  if (!ar.planner_note.empty()) j["planner_note"] = ar.planner_note;
  j["planner_calls"] = ar.planner_calls;
  j["verify_calls"] = ar.verify_calls;
  j["budget"] = int_str(ar.budget);
  j["armed_budget"] = ar.armed_budget;
  return j;
}

Rat parse_exponent_text(const std::string& text) {
  if (text.empty()) usage("empty exponent");
  auto slash = text.find('/');
  if (slash != std::string::npos) return rat_parse(text);
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    if (text.find_first_not_of("0123456789") != std::string::npos)
      usage("exponent: expected integer, fraction or decimal, got \"" + text + "\"");
    return Rat(Int(text));
  }
  std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (frac.empty() || whole.find_first_not_of("0123456789") != std::string::npos ||
      frac.find_first_not_of("0123456789") != std::string::npos)
    usage("exponent: expected integer, fraction or decimal, got \"" + text + "\"");
  Int num(whole + frac);
  Int den = ipow(Int(10), frac.size());
  return make_rat(num, den);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::parse:
    case Errc::precondition:
    case Errc::state:
      return 2;
    default:
      return 3;  // cap, io, budget escaping a command, internal
  }
}

CommandResult cmd_gen(const Json& opts) {
  ResolvedInstance ri = resolve_instance(opts, Mode::reduction);
  const Instance& inst = *ri.inst;
  CommandResult res;
  res.report = Json{{"schema", kSchema},
                    {"command", "gen"},
                    {"seed", ri.seed},
                    {"formula", ri.formula_info},
                    {"params", params_json(inst.params)}};
  if (!ri.schedule_info.is_null()) res.report["schedule"] = ri.schedule_info;
  res.report["bound_check"] = bound_check_json(inst.params);
  res.report["descriptor"] = Json::parse(descriptor_json(inst, ri.seed));
  res.report["exit_code"] = 0;
  return res;
}

CommandResult cmd_verify(const Json& opts) {
  ResolvedInstance ri = resolve_instance(opts, Mode::verification);
  const Instance& inst = *ri.inst;
  VerifyOptions vo;
  vo.work_cap = resolve_cap(opts);
  if (has(opts, "inject_fault")) vo.fault = FaultSpec{get_u64(opts, "inject_fault", 0)};
  VerifyOutcome out = verify_instance(inst.formula, inst.params, vo);

  if (has(opts, "values_out")) {
    std::string path = get_str(opts, "values_out");
    std::ofstream f(path);
    if (!f) fail(Errc::io, "cannot open values file: " + path);
    exact_values(inst.formula, inst.params, vo.work_cap).export_values(f);
  }

  bool all_exact = out.value_law_exact && out.q_identity_exact && out.linearity_exact;
  Int two_v_pow_D = 2 * ipow(Int(inst.params.v), inst.params.degree);
  CommandResult res;
  res.exit_code = all_exact ? 0 : 1;
  res.report = Json{{"schema", kSchema},
                    {"command", "verify"},
                    {"seed", ri.seed},
                    {"formula", ri.formula_info},
                    {"params", params_json(inst.params)},
                    {"unsat", out.unsat},
                    {"stats",
                     Json{{"normal_states", out.stats.normal_states},
                          {"intermediate_states", out.stats.intermediate_states},
                          {"pairs", out.stats.pairs}}}};
  Json vlaw{{"exact", out.value_law_exact}};
  if (out.value_law_counterexample) vlaw["counterexample"] = *out.value_law_counterexample;
  Json qid{{"exact", out.q_identity_exact}};
  if (out.q_counterexample) qid["counterexample"] = *out.q_counterexample;
  Json lin{{"exact", out.linearity_exact}};
  if (out.linearity_counterexample) lin["counterexample"] = *out.linearity_counterexample;
  lin["d_used"] = int_str(out.d_used);
  lin["d"] = int_str(out.d);
  lin["two_v_pow_D"] = int_str(two_v_pow_D);
  lin["dimension_ok"] = (out.d_used <= out.d && out.d <= two_v_pow_D);
  res.report["value_law"] = vlaw;
  res.report["q_identity"] = qid;
  res.report["linearity"] = lin;
  if (has(opts, "values_out")) res.report["values_out"] = get_str(opts, "values_out");
  res.report["exit_code"] = res.exit_code;
  return res;
}

CommandResult cmd_solve(const Json& opts) {
  ResolvedInstance ri = resolve_instance(opts, Mode::verification);
  std::string planner_name = has(opts, "planner") ? get_str(opts, "planner") : "exhaustive";
  OracleKind kind = has(opts, "oracle") ? oracle_kind_from_name(get_str(opts, "oracle"))
                                        : OracleKind::simulator;
  LogFile lf = open_query_log(opts);

  Oracle oracle(ri.inst, kind, ri.seed);
  std::optional<Int> budget;
  if (has(opts, "budget")) {
    budget = get_int(opts, "budget");
    oracle.arm_budget(fits_u64(*budget) ? to_u64(*budget) : UINT64_MAX);
  }
  if (lf.sink) oracle.set_query_log(lf.sink);

  PlannerConfig cfg = planner_config_from(opts);
  cfg.seed = ri.seed;
  PlanResult plan;
  try {
    plan = make_planner(planner_name, cfg)(oracle);
  } catch (const Error& e) {
    if (e.code() != Errc::budget) throw;
    plan.budget_exhausted = true;
    plan.note = e.what();
    plan.calls_used = oracle.calls();
  }

  CommandResult res;
  res.report = Json{{"schema", kSchema},
                    {"command", "solve"},
                    {"seed", ri.seed},
                    {"formula", ri.formula_info},
                    {"params", params_json(ri.inst->params)},
                    {"planner", planner_name},
                    {"oracle", oracle_kind_name(kind)}};
  if (budget) res.report["budget"] = int_str(*budget);
  res.report["calls"] = oracle.calls();
  res.report["complete"] = plan.complete;
  res.report["budget_exhausted"] = plan.budget_exhausted;
  if (!plan.note.empty()) res.report["note"] = plan.note;
  res.report["sequence_length"] = plan.actions.size();
  res.report["actions"] = plan.actions;

  bool good_known = false, good = false;
  try {
    GoodPolicyReport gp =
        good_policy_check(ri.inst->formula, ri.inst->params, plan.actions, resolve_cap(opts));
    good_known = true;
    good = gp.good;
    res.report["policy"] = Json{{"v_pi", rat_str(gp.v_pi)},
                                {"v_star", rat_str(gp.v_star)},
                                {"margin", rat_str(gp.margin)},
                                {"good", gp.good},
                                {"reached_reward", gp.reached_reward}};
  } catch (const Error& e) {
    if (e.code() != Errc::cap) throw;
    res.report["policy"] = Json{{"skipped", "exact check exceeds the DP work cap"}};
  }
  res.exit_code = good_known ? (good ? 0 : 1) : (plan.complete ? 0 : 1);
  res.report["exit_code"] = res.exit_code;
  if (lf.sink) res.report["query_log"] = lf.path;
  return res;
}

CommandResult cmd_reduce(const Json& opts) {
  uint64_t seed = get_u64(opts, "seed", 1);
  ResolvedFormula rf = resolve_formula(opts, seed);
  Json schedule_info;
  uint32_t r = resolve_r(opts, rf.formula.v, schedule_info);
  int k = int(get_u64(opts, "k", 3));
  LogFile lf = open_query_log(opts);

  ReductionOptions ro;
  ro.planner = has(opts, "planner") ? get_str(opts, "planner") : "exhaustive";
  ro.planner_cfg = planner_config_from(opts);
  if (has(opts, "budget")) ro.budget = get_int(opts, "budget");
  ro.seed = seed;
  ro.query_log = lf.sink;

  bool use_isolation = get_bool(opts, "isolate", false);
  uint64_t trials = get_u64(opts, "trials", 0);

  CommandResult res;
  res.report = Json{{"schema", kSchema},
                    {"command", "reduce"},
                    {"seed", seed},
                    {"formula", rf.info},
                    {"planner", ro.planner},
                    {"k", k},
                    {"r", r}};
  if (!schedule_info.is_null()) res.report["schedule"] = schedule_info;

  if (!use_isolation && trials <= 1) {
    ASatReport ar = a_sat(rf.formula, r, k, ro);
    res.exit_code = ar.yes ? 0 : 1;
    res.report["pipeline"] = "a_sat";
    res.report.update(asat_report_json(ar));
  } else {
    EndToEndOptions eo;
    eo.base = ro;
    eo.use_isolation = use_isolation;
    eo.trials = trials;
    EndToEndReport er = end_to_end(rf.formula, r, k, eo);
    res.exit_code = er.yes ? 0 : 1;
    res.report["pipeline"] = "end_to_end";
    res.report["isolation"] = use_isolation;
    res.report["decision"] = er.yes ? "YES" : "NO";
    if (er.witness) res.report["witness"] = assignment_json(*er.witness);
    res.report["trials_run"] = er.trials_run;
    res.report["candidates_run"] = er.candidates_run;
    res.report["planner_calls"] = er.total_planner_calls;
    res.report["verify_calls"] = er.total_verify_calls;
    Json attempts = Json::array();
    constexpr size_t kMaxAttemptRows = 200;
    for (size_t i = 0; i < er.attempts.size() && i < kMaxAttemptRows; ++i) {
      const EndToEndTrial& a = er.attempts[i];
      attempts.push_back(Json{{"trial", a.trial},
                              {"parities", a.parity_count},
                              {"v", a.candidate_v},
                              {"yes", a.yes},
                              {"planner_calls", a.planner_calls},
                              {"verify_calls", a.verify_calls}});
    }
    res.report["attempts"] = attempts;
    res.report["attempts_truncated"] = er.attempts.size() > kMaxAttemptRows;
  }
  // Analysis-side constants from the correctness argument; metadata only.
  res.report["analysis"] =
      Json{{"rl_error", "1/10"}, {"sat_error", "1/8"}, {"conditioning", "7/8"}};
  if (lf.sink) res.report["query_log"] = lf.path;
  res.report["exit_code"] = res.exit_code;
  return res;
}

CommandResult cmd_isolate(const Json& opts) {
  uint64_t seed = get_u64(opts, "seed", 1);
  ResolvedFormula rf = resolve_formula(opts, seed);
  bool check = get_bool(opts, "check", false);
  bool emit = get_bool(opts, "emit_dimacs", false);
  std::vector<IsolationCandidate> cands = isolate(rf.formula, seed);

  Json arr = Json::array();
  for (const IsolationCandidate& c : cands) {
    Json parities = Json::array();
    for (const ParityConstraint& pc : c.parities)
      parities.push_back(Json{{"vars", pc.vars}, {"rhs", pc.rhs}});
    Json row{{"parities", c.parity_count},
             {"v", c.formula.v},
             {"clauses", c.formula.clause_count()},
             {"parity_list", parities}};
    if (check) {
      row["projects_exactly"] = candidate_projects_exactly(rf.formula, c);
      row["projected_solutions"] = count_projected_solutions(rf.formula, c);
    }
    if (emit) row["dimacs"] = emit_dimacs(c.formula);
    arr.push_back(std::move(row));
  }
  CommandResult res;
  res.report = Json{{"schema", kSchema},
                    {"command", "isolate"},
                    {"seed", seed},
                    {"formula", rf.info},
                    {"candidates", arr},
                    {"exit_code", 0}};
  return res;
}

CommandResult cmd_bench(const Json& opts) {
  Json suite;
  if (has(opts, "suite")) {
    std::string path = get_str(opts, "suite");
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open suite: " + path);
    try {
      suite = Json::parse(in);
    } catch (const std::exception& e) {
      fail(Errc::parse, std::string("suite file: ") + e.what());
    }
    if (!suite.is_object()) fail(Errc::parse, "suite file: expected a JSON object");
  } else if (has(opts, "suite_inline")) {
    suite = opts.at("suite_inline");
    if (!suite.is_object()) usage("suite_inline: expected a JSON object");
  } else {
    suite = Json{{"v", Json::array({6, 7, 8, 9, 10})},
                 {"per_v", 4},
                 {"r", 2},
                 {"k", 3},
                 {"planners", Json::array({"exhaustive", "greedy"})},
                 {"budgets", Json::array({"100000"})},
                 {"runs", 3}};
  }
  uint64_t master = get_u64(opts, "seed", 1);

  std::vector<uint32_t> vs;
  if (has(suite, "v")) {
    if (!suite.at("v").is_array()) fail(Errc::parse, "suite.v: expected an array");
    for (const Json& j : suite.at("v")) {
      if (!j.is_number_integer() || j.get<int64_t>() <= 0)
        fail(Errc::parse, "suite.v: expected positive integers");
      vs.push_back(j.get<uint32_t>());
    }
  }
  uint64_t per_v = get_u64(suite, "per_v", 1);
  uint32_t r = uint32_t(get_u64(suite, "r", 2));
  int k = int(get_u64(suite, "k", 3));
  uint64_t runs = get_u64(suite, "runs", 1);
  std::vector<std::string> planners;
  if (has(suite, "planners")) {
    if (!suite.at("planners").is_array()) fail(Errc::parse, "suite.planners: expected an array");
    for (const Json& j : suite.at("planners")) {
      if (!j.is_string()) fail(Errc::parse, "suite.planners: expected strings");
      planners.push_back(j.get<std::string>());
    }
  }
  std::vector<Int> budgets;
  if (has(suite, "budgets")) {
    if (!suite.at("budgets").is_array()) fail(Errc::parse, "suite.budgets: expected an array");
    for (size_t i = 0; i < suite.at("budgets").size(); ++i) {
      Json wrap{{"b", suite.at("budgets")[i]}};
      budgets.push_back(get_int(wrap, "b"));
    }
  }
  for (const std::string& p : planners) make_planner(p, PlannerConfig{});  // validate names

  std::ostringstream table;
  table << "v  #  planner      budget      success  mean_calls  wall_ms\n";
  Json cells = Json::array();
  uint64_t formula_index = 0;
  for (uint32_t v : vs) {
    for (uint64_t i = 0; i < per_v; ++i, ++formula_index) {
      uint64_t fseed = SplitMix64::substream(master, 1000 + formula_index).next();
      GeneratedFormula gen = random_unique_sat(v, fseed);
      for (const std::string& planner : planners) {
        for (const Int& budget : budgets) {
          uint64_t successes = 0, total_calls = 0;
          auto t0 = std::chrono::steady_clock::now();
          for (uint64_t run = 0; run < runs; ++run) {
            ReductionOptions ro;
            ro.planner = planner;
            ro.budget = budget;
            ro.seed = SplitMix64::substream(fseed, run + 1).next();
            ASatReport ar = a_sat(gen.formula, r, k, ro);
            successes += ar.yes ? 1 : 0;  // suite formulas are unique-SAT
            total_calls += ar.planner_calls + ar.verify_calls;
          }
          auto t1 = std::chrono::steady_clock::now();
          double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
          std::string rate = runs ? rat_str(make_rat(Int(successes), Int(runs))) : "0";
          std::string mean = runs ? rat_str(make_rat(Int(total_calls), Int(runs))) : "0";
          cells.push_back(Json{{"v", v},
                               {"formula", formula_index},
                               {"planner", planner},
                               {"budget", int_str(budget)},
                               {"runs", runs},
                               {"successes", successes},
                               {"success_rate", rate},
                               {"mean_calls", mean}});
          char line[256];
          std::snprintf(line, sizeof(line), "%-2u %-2llu %-12s %-11s %-8s %-11s %.1f\n", v,
                        (unsigned long long)formula_index, planner.c_str(),
                        int_str(budget).c_str(), rate.c_str(), mean.c_str(), wall_ms);
          table << line;
        }
      }
    }
  }
  CommandResult res;
  res.report = Json{{"schema", kSchema},
                    {"command", "bench"},
                    {"seed", master},
                    {"suite",
                     Json{{"formulas", formula_index},
                          {"r", r},
                          {"k", k},
                          {"runs", runs},
                          {"planners", planners.size()},
                          {"budgets", budgets.size()}}},
                    {"cells", cells},
                    {"exit_code", 0}};
  res.table = table.str();
  return res;
}

CommandResult run_command(const std::string& name, const Json& opts) {
  try {
    if (!opts.is_object()) usage("options: expected a JSON object");
    if (name == "gen") return cmd_gen(opts);
    if (name == "verify") return cmd_verify(opts);
    if (name == "solve") return cmd_solve(opts);
    if (name == "reduce") return cmd_reduce(opts);
    if (name == "isolate") return cmd_isolate(opts);
    if (name == "bench") return cmd_bench(opts);
    usage("unknown command: " + name);
  } catch (const Error& e) {
    CommandResult res;
    res.exit_code = exit_code_for(e.code());
    res.report = Json{{"schema", kSchema},
                      {"command", name},
                      {"error", Json{{"code", errc_name(e.code())}, {"message", e.what()}}},
                      {"exit_code", res.exit_code}};
    return res;
  } catch (const std::exception& e) {
    CommandResult res;
    res.exit_code = 3;
    res.report = Json{{"schema", kSchema},
                      {"command", name},
                      {"error", Json{{"code", "internal"}, {"message", e.what()}}},
                      {"exit_code", res.exit_code}};
    return res;
  }
}

}  // namespace hardmdp
