#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"
#include "planners.hpp"

namespace hardmdp {

// Wrapping a planner into a SAT decider. The planner only ever sees a
// budgeted simulator handle; the decision is certified by walking the
// returned action sequence on a fresh simulator (transitions only) and
// evaluating the last non-terminal assignment, so YES is error-free by
// construction. Action sequences that keep going after the sink just stop
// there; structurally invalid actions mark the sequence malformed (NO).
struct ReductionOptions {
  std::string planner = "exhaustive";
  PlannerConfig planner_cfg;       // seed field is overridden by `seed`
  PlannerFn custom;                // when set, used instead of `planner`
  std::optional<Int> budget;       // oracle calls; default v^ceil(r^2/4)
  uint64_t seed = 1;               // master seed: oracle substreams + planner
  std::ostream* query_log = nullptr;
};

struct ASatReport {
  bool yes = false;
  Assignment final_assignment;       // last non-terminal state's w
  uint64_t final_depth = 0;
  std::optional<Assignment> witness; // = final_assignment when yes
  Rat policy_value;                  // simulator-view value of the final state
  std::vector<int> actions;          // planner's sequence as executed input
  uint64_t sequence_length = 0;
  bool planner_complete = false;
  bool budget_exhausted = false;
  bool malformed_sequence = false;
  std::string planner_note;
  uint64_t planner_calls = 0;
  uint64_t verify_calls = 0;
  Int budget;                        // requested budget (pre-clamp)
  uint64_t armed_budget = 0;         // what the handle actually enforced
  std::string planner_name;
};

// Builds the reduction-mode instance (H = v^r) over f's full variable set.
ASatReport a_sat(const Formula& f, uint32_t r, int k, const ReductionOptions& opts = {});
// Explicit-instance override (any mode); used by tests and the CLI.
ASatReport a_sat(std::shared_ptr<const Instance> inst, const ReductionOptions& opts = {});

// One candidate attempt inside the full pipeline.
struct EndToEndTrial {
  uint64_t trial = 0;
  uint32_t parity_count = 0;   // 0 on the no-isolation path
  uint32_t candidate_v = 0;
  bool yes = false;
  uint64_t planner_calls = 0;
  uint64_t verify_calls = 0;
};

struct EndToEndOptions {
  ReductionOptions base;
  bool use_isolation = true;
  uint64_t trials = 0;  // 0 => 8(v+1) with isolation, 1 without
};

struct EndToEndReport {
  bool yes = false;
  std::optional<Assignment> witness;  // over the original variables, certified
  uint64_t trials_run = 0;
  uint64_t candidates_run = 0;
  uint64_t total_planner_calls = 0;
  uint64_t total_verify_calls = 0;
  std::vector<EndToEndTrial> attempts;  // in execution order, stops at success
};

// Optional isolation front-end, then a_sat per candidate; YES only with a
// witness that provably satisfies the original formula after projection.
EndToEndReport end_to_end(const Formula& f, uint32_t r, int k,
                          const EndToEndOptions& opts = {});

}  // namespace hardmdp
