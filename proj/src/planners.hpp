#pragma once

#include <functional>
#include <map>

#include "oracle.hpp"

namespace hardmdp {

// Planners act only through an oracle handle. They may use the public
// instance description (the formula is the reduction's own input); the only
// hidden quantity is w*, gated behind the full-oracle capability.
struct PlannerConfig {
  uint64_t seed = 1;        // planner-local randomness, separate from oracle streams
  uint64_t depth_bound = 0;  // exhaustive: max depth in flips; 0 = min(v, H)
  uint64_t episodes = 64;    // regression: exploration episodes
  uint64_t episode_len = 0;  // regression: steps per episode; 0 = min(H, 4v)
  double ridge = 1e-8;       // regression: fallback ridge coefficient
  uint64_t step_limit = 10000000;  // greedy walk safety net when no budget armed
};

struct PlanResult {
  std::vector<int> actions;
  bool complete = false;          // planner believes the sequence reaches a satisfying state
  bool budget_exhausted = false;  // stopped by the armed budget
  uint64_t calls_used = 0;
  std::string note;
};

// Systematic DFS over action sequences, depth-bounded in flips. Detects a
// satisfying state by probing one transition: only rewarding states below
// the last layer jump to the sink. Deterministic, uses transitions only.
PlanResult plan_exhaustive(Oracle& oracle, const PlannerConfig& cfg = {});

// Uniform random walk over actions; restarts from the root after falling
// off the last layer without reward. Cheap, incomplete.
PlanResult plan_greedy_clause(Oracle& oracle, const PlannerConfig& cfg = {});

// Fits theta_hat by least squares on (psi(S_t), reward-to-go) pairs from
// random episodes, then rolls out greedily on <theta_hat, psi(s, a)>.
PlanResult plan_regression(Oracle& oracle, const PlannerConfig& cfg = {});

// Reads w* through the full-oracle capability and emits the greedy
// distance-decreasing sequence. Refuses simulator handles loudly — this
// planner exists as an upper-bound baseline, and reports mark it as
// oracle-assisted.
PlanResult plan_oracle_optimal(Oracle& oracle, const PlannerConfig& cfg = {});

using PlannerFn = std::function<PlanResult(Oracle&)>;
PlannerFn make_planner(const std::string& name, const PlannerConfig& cfg = {});
std::vector<std::string> planner_names();

// --- regression internals, exposed for direct testing ---

// Least-squares fit over the union of observed tuples; tries the plain
// normal equations first and falls back to ridge regularization when the
// system is singular or the solution is not finite.
std::map<Tuple, double> fit_linear_value(const std::vector<FeatureVector>& features,
                                         const std::vector<double>& targets, double ridge);

// Greedy argmax of <theta_hat, psi> with lowest-index tie-breaking. Invariant
// under positive scaling of theta_hat (exactly so for power-of-two scales).
int choose_greedy_action(const std::vector<FeatureVector>& psi_per_action,
                         const std::map<Tuple, double>& theta_hat);

}  // namespace hardmdp
