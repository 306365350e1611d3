#pragma once

#include <functional>
#include <iosfwd>
#include <set>
#include <unordered_map>
#include <vector>

#include "features.hpp"
#include "mdp.hpp"

namespace hardmdp {

// Brute-force ground truth, independent of the closed-form value law: forward
// reachability from the root, then backward induction over depth layers.
// States fold by (assignment, depth, variant) — an intermediate's pending
// pair is determined by its assignment, so the fold is lossless. Within a
// depth, intermediates resolve before normal states; both only ever look at
// depth l+1. Work is pre-bounded by 2^v * H * k <= work_cap.

inline constexpr int64_t kDefaultWorkCap = 100000000;  // overridable via --cap / HARDMDP_CAP

struct DpStats {
  uint64_t normal_states = 0;
  uint64_t intermediate_states = 0;
  uint64_t pairs = 0;  // (state, action) pairs visited
};

// Callbacks fire during the backward sweep (deepest layer first, keys in
// ascending packed order, intermediates of a layer before its normals), so
// verification can stream without retaining the table.
struct DpCallbacks {
  // Every reachable state with its exact optimal value.
  std::function<void(const State&, const Rat&)> on_state;
  // Every reachable (state, action) with q := V*(P(s, a)). At rewarding
  // states every action exits to the sink, so q is 0 there by definition.
  std::function<void(const State&, int, const Rat&)> on_pair;
};

class ExactValues {
 public:
  Rat value(const State& s) const;                 // exact V*; errors if s unreachable
  Rat q_value(const State& s, int action) const;   // V*(P(s, a))
  bool reachable(const State& s) const;
  const Rat& root_value() const { return root_value_; }
  const DpStats& stats() const { return stats_; }
  const InstanceParams& params() const { return params_; }
  const Formula& formula() const { return formula_; }
  const std::optional<Assignment>& wstar() const { return wstar_; }

  // Line-oriented dump "<state> <num/den>", layer-major, packed-ascending,
  // intermediates after normals — stable for cross-implementation diffing.
  void export_values(std::ostream& out) const;

  void for_each(const std::function<void(const State&, const Rat&)>& fn) const;

 private:
  friend ExactValues exact_values(const Formula&, const InstanceParams&, const Int&);
  friend struct DpEngine;

  struct Layer {
    std::vector<uint64_t> normal_keys, inter_keys;  // sorted packed assignments
    std::unordered_map<uint64_t, Rat> normal, inter;
  };

  Formula formula_;
  InstanceParams params_;
  std::optional<Assignment> wstar_;
  std::vector<Layer> layers_;  // index = depth, 0..last nonempty layer
  Rat root_value_;
  DpStats stats_;
};

// Full table, retained (memory-guarded by the work cap).
ExactValues exact_values(const Formula& f, const InstanceParams& params,
                         const Int& work_cap = Int(kDefaultWorkCap));

// Streaming root value: two rolling layers only, so horizons like v=16,
// H=256 stay in bounds.
Rat exact_root_value(const Formula& f, const InstanceParams& params,
                     const Int& work_cap = Int(kDefaultWorkCap));

// Streaming sweep with callbacks; returns root value and counts.
struct SweepResult {
  Rat root_value;
  DpStats stats;
  std::optional<Assignment> wstar;
  std::set<std::pair<uint32_t, uint32_t>> pendings_seen;
};
SweepResult dp_sweep(const Formula& f, const InstanceParams& params, const Int& work_cap,
                     const DpCallbacks* callbacks);

// Detector sanity hook: while verifying, add 1/(H+v) to the closed-form
// prediction at the state with this visit index (backward-sweep order). A
// correct checker must then report a mismatch.
struct FaultSpec {
  uint64_t state_index = 0;
};

struct VerifyOutcome {
  DpStats stats;
  bool unsat = false;
  bool value_law_exact = true;
  std::optional<std::string> value_law_counterexample;  // "state dp=.. law=.."
  bool q_identity_exact = true;
  std::optional<std::string> q_counterexample;
  bool linearity_exact = true;
  std::optional<std::string> linearity_counterexample;
  Int d_used;  // distinct feature tuples the expansion touches
  Int d;       // promised dimension
};

struct VerifyOptions {
  bool check_values = true;
  bool check_linearity = true;
  Int work_cap = Int(kDefaultWorkCap);
  std::optional<FaultSpec> fault;
};

// One DP pass checking, per reachable state: DP value == closed-form law;
// per reachable pair: q == V*(P(s,a)); and when check_linearity, the exact
// identities V*(s) == <theta, psi(s)> and q(s,a) == <theta, psi(s,a)> via
// the streamed evaluation. All comparisons are exact rational equality.
VerifyOutcome verify_instance(const Formula& f, const InstanceParams& params,
                              const VerifyOptions& opts = {});

// Narrow entry points: value-law only / linearity only.
VerifyOutcome verify_value_law(const Formula& f, const InstanceParams& params,
                               const Int& work_cap = Int(kDefaultWorkCap),
                               const std::optional<FaultSpec>& fault = std::nullopt);
VerifyOutcome verify_linearity(const Formula& f, const InstanceParams& params,
                               const Int& work_cap = Int(kDefaultWorkCap));

// Greedy distance-decreasing action sequence root -> w*; empty when the
// root already satisfies. Errors on unsatisfiable formulas. Its analytic
// rollout value equals V*(root); in the 2-action compile its length is at
// most twice the initial distance.
std::vector<int> optimal_policy(const Formula& f, const InstanceParams& params,
                                const std::optional<Assignment>& wstar = std::nullopt);

// Exact expected return of running the fixed action sequence from the root:
// the walk is deterministic until it exits a rewarding state, so the value
// is g there (any action exits), and 0 if the sequence ends beforehand.
struct PolicyValue {
  Rat value;
  bool reached_reward = false;
  uint64_t steps_used = 0;
};
PolicyValue policy_value(const Formula& f, const InstanceParams& params,
                         const std::vector<int>& actions,
                         const std::optional<Assignment>& wstar);

// good <=> V^pi > V*(root) - 1/4, decided exactly. An unsatisfiable formula
// has V* = 0, so every policy is vacuously good.
struct GoodPolicyReport {
  Rat v_pi;
  Rat v_star;
  Rat margin;  // v_pi - (v_star - 1/4)
  bool good = false;
  bool reached_reward = false;
};
GoodPolicyReport good_policy_check(const Formula& f, const InstanceParams& params,
                                   const std::vector<int>& actions,
                                   const Int& work_cap = Int(kDefaultWorkCap));

}  // namespace hardmdp
