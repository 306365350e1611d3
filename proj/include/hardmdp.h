/* C interface to the CNF-to-MDP compiler, oracle protocol and reduction
 * pipeline. All functions returning hardmdp_status set a thread-local error
 * message readable via hardmdp_last_error() on failure. Strings returned
 * through char** out-parameters are malloc'd; release them with
 * hardmdp_free_string. Handles are opaque and single-owner; oracle handles
 * are not thread-safe (one handle per thread).
 *
 * States travel as their canonical serialization:
 *   "T"                         terminal sink
 *   "N:<hex>:<depth>"           normal state (packed assignment, depth)
 *   "I:<hex>:<depth>:<i1>:<i2>" intermediate state (2-action compile)
 * Assignments travel as one '+'/'-' character per variable, variable 1
 * first. Big integers and exact rationals travel as decimal / "num/den"
 * strings.
 */
#ifndef HARDMDP_H
#define HARDMDP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hardmdp_status {
  HARDMDP_OK = 0,
  HARDMDP_E_INVALID_ARGUMENT = 1, /* bad parameter / usage */
  HARDMDP_E_PARSE = 2,            /* malformed DIMACS or JSON document */
  HARDMDP_E_BUDGET = 3,           /* armed oracle budget exceeded */
  HARDMDP_E_CAP = 4,              /* exact-solver work cap exceeded */
  HARDMDP_E_STATE = 5,            /* malformed or structurally invalid state string */
  HARDMDP_E_PRECONDITION = 6,     /* promise violated (e.g. >1 solutions) */
  HARDMDP_E_IO = 7,
  HARDMDP_E_INTERNAL = 8
} hardmdp_status;

typedef struct hardmdp_formula hardmdp_formula;
typedef struct hardmdp_instance hardmdp_instance;
typedef struct hardmdp_oracle hardmdp_oracle;

/* Message for the calling thread's most recent failure; never NULL. */
const char* hardmdp_last_error(void);
void hardmdp_free_string(char* s);

/* ---------- 3-CNF formulas ---------- */

hardmdp_status hardmdp_formula_parse(const char* dimacs_text, hardmdp_formula** out);
hardmdp_status hardmdp_formula_read(const char* path, hardmdp_formula** out);
/* Rejection-sampled random instances, certified by exact counting. */
hardmdp_status hardmdp_formula_random_unique(uint32_t v, uint64_t seed, hardmdp_formula** out);
hardmdp_status hardmdp_formula_random_unsat(uint32_t v, uint64_t seed, hardmdp_formula** out);
void hardmdp_formula_free(hardmdp_formula* f);

uint32_t hardmdp_formula_vars(const hardmdp_formula* f);
uint32_t hardmdp_formula_clause_count(const hardmdp_formula* f);
hardmdp_status hardmdp_formula_emit(const hardmdp_formula* f, char** dimacs_out);
/* assignment = '+'/'-' string of length v; *result_out = 0 or 1 */
hardmdp_status hardmdp_formula_evaluate(const hardmdp_formula* f, const char* assignment,
                                        int* result_out);
/* Exact count by enumeration, stopping once the count exceeds `limit`. */
hardmdp_status hardmdp_formula_count_solutions(const hardmdp_formula* f, uint64_t limit,
                                               uint64_t* count_out);

/* ---------- exponent schedules and instances ---------- */

/* scenario: "poly3" | "poly2" | "subexp" | "appendix"; q: "1", "3/2", "1.25" */
hardmdp_status hardmdp_schedule_r(const char* scenario, const char* q, uint32_t m, uint32_t v,
                                  uint32_t* r_out);

/* mode: "verification" | "reduction". horizon: decimal string, or NULL for
 * the mode default (reduction pins H = v^r; verification defaults H = v). */
hardmdp_status hardmdp_instance_create(const hardmdp_formula* f, uint32_t r, int k,
                                       const char* mode, const char* horizon,
                                       hardmdp_instance** out);
hardmdp_status hardmdp_instance_from_descriptor(const char* descriptor_json,
                                                hardmdp_instance** out, uint64_t* seed_out);
void hardmdp_instance_free(hardmdp_instance* inst);

uint32_t hardmdp_instance_vars(const hardmdp_instance* inst);
uint32_t hardmdp_instance_r(const hardmdp_instance* inst);
int hardmdp_instance_k(const hardmdp_instance* inst);
hardmdp_status hardmdp_instance_horizon(const hardmdp_instance* inst, char** decimal_out);
hardmdp_status hardmdp_instance_dimension(const hardmdp_instance* inst, char** decimal_out);
/* Self-contained reproducible descriptor (JSON, embeds the DIMACS). */
hardmdp_status hardmdp_instance_descriptor(const hardmdp_instance* inst, uint64_t seed,
                                           char** json_out);
/* Exact value-gap bounds as JSON (root lower bound vs 1/2, last layer). */
hardmdp_status hardmdp_instance_bound_check(const hardmdp_instance* inst, char** json_out);

/* ---------- oracle protocol ---------- */

/* kind: "full" (knows the hidden solution) | "simulator" (never computes it).
 * Every query and every executed rollout step counts as one call. */
hardmdp_status hardmdp_oracle_create(const hardmdp_instance* inst, const char* kind,
                                     uint64_t seed, hardmdp_oracle** out);
void hardmdp_oracle_free(hardmdp_oracle* o);

/* Queries beyond the budget fail with HARDMDP_E_BUDGET; rollouts truncate
 * instead and set "truncated_by_budget" in the trajectory. */
void hardmdp_oracle_arm_budget(hardmdp_oracle* o, uint64_t max_calls);
uint64_t hardmdp_oracle_calls(const hardmdp_oracle* o);
uint64_t hardmdp_oracle_remaining_budget(const hardmdp_oracle* o); /* UINT64_MAX if unarmed */

hardmdp_status hardmdp_oracle_root(const hardmdp_oracle* o, char** state_out);
hardmdp_status hardmdp_oracle_transition(hardmdp_oracle* o, const char* state, int action,
                                         char** next_state_out);
/* One Bernoulli draw (0/1); deterministic given (seed, call history). */
hardmdp_status hardmdp_oracle_reward(hardmdp_oracle* o, const char* state, int action,
                                     int* reward_out);
/* Sparse feature vector psi(s) / psi(s,a) as JSON {tuple: "num/den", ...}. */
hardmdp_status hardmdp_oracle_features(hardmdp_oracle* o, const char* state, char** json_out);
hardmdp_status hardmdp_oracle_features_sa(hardmdp_oracle* o, const char* state, int action,
                                          char** json_out);
/* Executes the 1-based action sequence from the root; trajectory JSON. */
hardmdp_status hardmdp_oracle_rollout(hardmdp_oracle* o, const int* actions, size_t n,
                                      char** trajectory_json_out);
/* This handle's own success rate for exiting `state` ("num/den"); not a
 * counted query. */
hardmdp_status hardmdp_oracle_reward_mean(const hardmdp_oracle* o, const char* state,
                                          char** rational_out);
/* Full-oracle capability only; simulators fail with E_INVALID_ARGUMENT.
 * Unsatisfiable formulas yield the empty string. */
hardmdp_status hardmdp_oracle_wstar(const hardmdp_oracle* o, char** assignment_out);

/* ---------- reduction with a caller-supplied planner ---------- */

/* The callback receives a budgeted simulator handle (borrowed — do not
 * free) and must heap-allocate a JSON array of 1-based actions into
 * *actions_json_out (ownership transfers; allocate with malloc/strdup).
 * Return nonzero to signal planner failure (the decision becomes NO). */
typedef int (*hardmdp_planner_fn)(void* user, hardmdp_oracle* simulator, char** actions_json_out);

/* budget: decimal string or NULL for the default v^ceil(r^2/4).
 * *report_json_out carries decision, witness, call counts; *yes_out is 1
 * only if the walked-out assignment provably satisfies f. */
hardmdp_status hardmdp_a_sat_custom(const hardmdp_formula* f, uint32_t r, int k,
                                    const char* budget, uint64_t seed,
                                    hardmdp_planner_fn planner, void* user, int* yes_out,
                                    char** report_json_out);

/* ---------- command cores (the CLI calls only this) ---------- */

/* name: gen | verify | solve | reduce | isolate | bench. options_json is one
 * JSON object (see the CLI documentation for keys). Always produces a
 * report; *exit_code_out follows the stable contract 0 ok/YES, 1 NO/failed
 * identity, 2 usage, 3 cap/internal. *table_out (may be empty) is the human
 * table for bench. Errors inside the command are folded into the report and
 * exit code; the return value is only nonzero when the harness itself fails
 * (e.g. out of memory). */
hardmdp_status hardmdp_run_command(const char* name, const char* options_json,
                                   char** report_json_out, char** table_out, int* exit_code_out);

#ifdef __cplusplus
}
#endif

#endif /* HARDMDP_H */
