#include "hardmdp.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "commands.hpp"
#include "exact_solver.hpp"
#include "generator.hpp"
#include "instance.hpp"
#include "oracle.hpp"
#include "reduction.hpp"

using namespace hardmdp;

struct hardmdp_formula {
  Formula f;
};
struct hardmdp_instance {
  std::shared_ptr<const Instance> inst;
};
struct hardmdp_oracle {
  std::unique_ptr<Oracle> owned;
  Oracle* ptr = nullptr;  // borrowed when owned is empty (planner callbacks)
  Oracle& ref() { return *ptr; }
  const Oracle& ref() const { return *ptr; }
};

namespace {

thread_local std::string g_last_error = "ok";

hardmdp_status status_of(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return HARDMDP_E_INVALID_ARGUMENT;
    case Errc::parse: return HARDMDP_E_PARSE;
    case Errc::budget: return HARDMDP_E_BUDGET;
    case Errc::cap: return HARDMDP_E_CAP;
    case Errc::state: return HARDMDP_E_STATE;
    case Errc::precondition: return HARDMDP_E_PRECONDITION;
    case Errc::io: return HARDMDP_E_IO;
    case Errc::internal: return HARDMDP_E_INTERNAL;
  }
  return HARDMDP_E_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Every entry point funnels through here so exceptions never cross the ABI.
template <typename Fn>
hardmdp_status guarded(Fn&& fn) {
  try {
    fn();
    return HARDMDP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HARDMDP_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HARDMDP_E_INTERNAL;
  }
}

void require(bool cond, const char* msg) {
  if (!cond) fail(Errc::invalid_argument, msg);
}

Assignment parse_pm(const char* text, uint32_t v) {
  require(text != nullptr, "assignment string is null");
  Assignment a = Assignment::from_pm_string(text);
  if (a.size() != v) fail(Errc::invalid_argument, "assignment width does not match the formula");
  return a;
}

}  // namespace

extern "C" {

const char* hardmdp_last_error(void) { return g_last_error.c_str(); }

void hardmdp_free_string(char* s) { std::free(s); }

/* ---------- formulas ---------- */

hardmdp_status hardmdp_formula_parse(const char* dimacs_text, hardmdp_formula** out) {
  return guarded([&] {
    require(dimacs_text && out, "null argument");
    *out = new hardmdp_formula{parse_dimacs(dimacs_text)};
  });
}

hardmdp_status hardmdp_formula_read(const char* path, hardmdp_formula** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new hardmdp_formula{read_dimacs_file(path)};
  });
}

hardmdp_status hardmdp_formula_random_unique(uint32_t v, uint64_t seed, hardmdp_formula** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new hardmdp_formula{random_unique_sat(v, seed).formula};
  });
}

hardmdp_status hardmdp_formula_random_unsat(uint32_t v, uint64_t seed, hardmdp_formula** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new hardmdp_formula{random_unsat(v, seed).formula};
  });
}

void hardmdp_formula_free(hardmdp_formula* f) { delete f; }

uint32_t hardmdp_formula_vars(const hardmdp_formula* f) { return f ? f->f.v : 0; }

uint32_t hardmdp_formula_clause_count(const hardmdp_formula* f) {
  return f ? f->f.clause_count() : 0;
}

hardmdp_status hardmdp_formula_emit(const hardmdp_formula* f, char** dimacs_out) {
  return guarded([&] {
    require(f && dimacs_out, "null argument");
    *dimacs_out = dup_string(emit_dimacs(f->f));
  });
}

hardmdp_status hardmdp_formula_evaluate(const hardmdp_formula* f, const char* assignment,
                                        int* result_out) {
  return guarded([&] {
    require(f && result_out, "null argument");
    *result_out = evaluate(f->f, parse_pm(assignment, f->f.v)) ? 1 : 0;
  });
}

hardmdp_status hardmdp_formula_count_solutions(const hardmdp_formula* f, uint64_t limit,
                                               uint64_t* count_out) {
  return guarded([&] {
    require(f && count_out, "null argument");
    *count_out = count_solutions(f->f, limit);
  });
}

/* ---------- schedules and instances ---------- */

hardmdp_status hardmdp_schedule_r(const char* scenario, const char* q, uint32_t m, uint32_t v,
                                  uint32_t* r_out) {
  return guarded([&] {
    require(scenario && r_out, "null argument");
    Rat qv = q ? parse_exponent_text(q) : Rat(1);
    *r_out = schedule_r(scenario_from_name(scenario), qv, m, v);
  });
}

hardmdp_status hardmdp_instance_create(const hardmdp_formula* f, uint32_t r, int k,
                                       const char* mode, const char* horizon,
                                       hardmdp_instance** out) {
  return guarded([&] {
    require(f && mode && out, "null argument");
    std::optional<Int> H;
    if (horizon) {
      std::string h(horizon);
      if (h.empty() || h.find_first_not_of("0123456789") != std::string::npos)
        fail(Errc::invalid_argument, "horizon: expected a decimal string");
      H = Int(h);
    }
    Mode md = mode_from_name(mode);
    if (!H && md == Mode::verification) H = Int(f->f.v);
    *out = new hardmdp_instance{
        std::make_shared<Instance>(make_instance(f->f, r, k, md, H))};
  });
}

hardmdp_status hardmdp_instance_from_descriptor(const char* descriptor_json,
                                                hardmdp_instance** out, uint64_t* seed_out) {
  return guarded([&] {
    require(descriptor_json && out, "null argument");
    ParsedDescriptor pd = parse_descriptor(descriptor_json);
    if (seed_out) *seed_out = pd.seed;
    *out = new hardmdp_instance{std::make_shared<Instance>(std::move(pd.instance))};
  });
}

void hardmdp_instance_free(hardmdp_instance* inst) { delete inst; }

uint32_t hardmdp_instance_vars(const hardmdp_instance* inst) {
  return inst ? inst->inst->params.v : 0;
}

uint32_t hardmdp_instance_r(const hardmdp_instance* inst) {
  return inst ? inst->inst->params.r : 0;
}

int hardmdp_instance_k(const hardmdp_instance* inst) { return inst ? inst->inst->params.k : 0; }

hardmdp_status hardmdp_instance_horizon(const hardmdp_instance* inst, char** decimal_out) {
  return guarded([&] {
    require(inst && decimal_out, "null argument");
    *decimal_out = dup_string(inst->inst->params.H.get_str());
  });
}

hardmdp_status hardmdp_instance_dimension(const hardmdp_instance* inst, char** decimal_out) {
  return guarded([&] {
    require(inst && decimal_out, "null argument");
    *decimal_out = dup_string(inst->inst->params.d.get_str());
  });
}

hardmdp_status hardmdp_instance_descriptor(const hardmdp_instance* inst, uint64_t seed,
                                           char** json_out) {
  return guarded([&] {
    require(inst && json_out, "null argument");
    *json_out = dup_string(descriptor_json(*inst->inst, seed));
  });
}

hardmdp_status hardmdp_instance_bound_check(const hardmdp_instance* inst, char** json_out) {
  return guarded([&] {
    require(inst && json_out, "null argument");
    BoundCheckResult b = bound_check(inst->inst->params);
    Json j{{"root_lower", rat_str(b.root_lower)},
           {"root_ok", b.root_ok},
           {"last_layer_upper", rat_str(b.last_layer_upper)},
           {"last_layer_bound", rat_str(b.last_layer_bound)},
           {"last_layer_ok", b.last_layer_ok}};
    *json_out = dup_string(j.dump());
  });
}

/* ---------- oracle protocol ---------- */

hardmdp_status hardmdp_oracle_create(const hardmdp_instance* inst, const char* kind,
                                     uint64_t seed, hardmdp_oracle** out) {
  return guarded([&] {
    require(inst && kind && out, "null argument");
    auto o = new hardmdp_oracle;
    o->owned = std::make_unique<Oracle>(inst->inst, oracle_kind_from_name(kind), seed);
    o->ptr = o->owned.get();
    *out = o;
  });
}

void hardmdp_oracle_free(hardmdp_oracle* o) { delete o; }

void hardmdp_oracle_arm_budget(hardmdp_oracle* o, uint64_t max_calls) {
  if (o) o->ref().arm_budget(max_calls);
}

uint64_t hardmdp_oracle_calls(const hardmdp_oracle* o) { return o ? o->ref().calls() : 0; }

uint64_t hardmdp_oracle_remaining_budget(const hardmdp_oracle* o) {
  return o ? o->ref().remaining_budget() : UINT64_MAX;
}

hardmdp_status hardmdp_oracle_root(const hardmdp_oracle* o, char** state_out) {
  return guarded([&] {
    require(o && state_out, "null argument");
    *state_out = dup_string(state_string(o->ref().root()));
  });
}

hardmdp_status hardmdp_oracle_transition(hardmdp_oracle* o, const char* state, int action,
                                         char** next_state_out) {
  return guarded([&] {
    require(o && state && next_state_out, "null argument");
    State s = parse_state(state, o->ref().instance().params.v);
    *next_state_out = dup_string(state_string(o->ref().query_transition(s, action)));
  });
}

hardmdp_status hardmdp_oracle_reward(hardmdp_oracle* o, const char* state, int action,
                                     int* reward_out) {
  return guarded([&] {
    require(o && state && reward_out, "null argument");
    State s = parse_state(state, o->ref().instance().params.v);
    *reward_out = o->ref().query_reward(s, action);
  });
}

hardmdp_status hardmdp_oracle_features(hardmdp_oracle* o, const char* state, char** json_out) {
  return guarded([&] {
    require(o && state && json_out, "null argument");
    State s = parse_state(state, o->ref().instance().params.v);
    *json_out = dup_string(features_json(o->ref().query_features(s)));
  });
}

hardmdp_status hardmdp_oracle_features_sa(hardmdp_oracle* o, const char* state, int action,
                                          char** json_out) {
  return guarded([&] {
    require(o && state && json_out, "null argument");
    State s = parse_state(state, o->ref().instance().params.v);
    *json_out = dup_string(features_json(o->ref().query_features_sa(s, action)));
  });
}

hardmdp_status hardmdp_oracle_rollout(hardmdp_oracle* o, const int* actions, size_t n,
                                      char** trajectory_json_out) {
  return guarded([&] {
    require(o && trajectory_json_out, "null argument");
    require(actions || n == 0, "null action array");
    std::vector<int> seq(actions, actions + n);
    *trajectory_json_out = dup_string(trajectory_json(o->ref().rollout(seq)));
  });
}

hardmdp_status hardmdp_oracle_reward_mean(const hardmdp_oracle* o, const char* state,
                                          char** rational_out) {
  return guarded([&] {
    require(o && state && rational_out, "null argument");
    State s = parse_state(state, o->ref().instance().params.v);
    *rational_out = dup_string(rat_str(o->ref().reward_mean(s)));
  });
}

hardmdp_status hardmdp_oracle_wstar(const hardmdp_oracle* o, char** assignment_out) {
  return guarded([&] {
    require(o && assignment_out, "null argument");
    const std::optional<Assignment>& w = o->ref().wstar();
    *assignment_out = dup_string(w ? w->pm_string() : std::string());
  });
}

/* ---------- custom-planner reduction ---------- */

hardmdp_status hardmdp_a_sat_custom(const hardmdp_formula* f, uint32_t r, int k,
                                    const char* budget, uint64_t seed,
                                    hardmdp_planner_fn planner, void* user, int* yes_out,
                                    char** report_json_out) {
  return guarded([&] {
    require(f && planner, "null argument");
    ReductionOptions ro;
    ro.seed = seed;
    if (budget) {
      std::string b(budget);
      if (b.empty() || b.find_first_not_of("0123456789") != std::string::npos)
        fail(Errc::invalid_argument, "budget: expected a decimal string");
      ro.budget = Int(b);
    }
    ro.planner = "custom";
    ro.custom = [planner, user](Oracle& simulator) -> PlanResult {
      hardmdp_oracle shell;
      shell.ptr = &simulator;  // borrowed: freeing it in the callback is a bug
      char* actions_json = nullptr;
      int rc = planner(user, &shell, &actions_json);
      std::string text = actions_json ? actions_json : "";
      std::free(actions_json);
      if (rc != 0) fail(Errc::precondition, "custom planner reported failure");
      PlanResult plan;
      Json j;
      try {
        j = Json::parse(text);
      } catch (const std::exception&) {
        fail(Errc::precondition, "custom planner returned malformed JSON");
      }
      if (!j.is_array()) fail(Errc::precondition, "custom planner must return a JSON array");
      for (const Json& a : j) {
        if (!a.is_number_integer())
          fail(Errc::precondition, "custom planner actions must be integers");
        plan.actions.push_back(a.get<int>());
      }
      plan.complete = true;  // the certification pass decides the outcome
      return plan;
    };
    ASatReport ar = a_sat(f->f, r, k, ro);
    if (yes_out) *yes_out = ar.yes ? 1 : 0;
    if (report_json_out) {
      Json rep{{"schema", "hardmdp-report-v1"}, {"command", "a_sat_custom"}, {"seed", seed}};
      rep.update(asat_report_json(ar));
      *report_json_out = dup_string(rep.dump(2) + "\n");
    }
  });
}

/* ---------- command cores ---------- */

hardmdp_status hardmdp_run_command(const char* name, const char* options_json,
                                   char** report_json_out, char** table_out,
                                   int* exit_code_out) {
  return guarded([&] {
    require(name != nullptr, "null command name");
    Json opts = Json::object();
    if (options_json && options_json[0] != '\0') {
      try {
        opts = Json::parse(options_json);
      } catch (const std::exception& e) {
        fail(Errc::parse, std::string("options: ") + e.what());
      }
    }
    CommandResult res = run_command(name, opts);
    if (report_json_out) *report_json_out = dup_string(res.report.dump(2) + "\n");
    if (table_out) *table_out = dup_string(res.table);
    if (exit_code_out) *exit_code_out = res.exit_code;
  });
}

}  // extern "C"
