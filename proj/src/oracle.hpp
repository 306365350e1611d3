#pragma once

#include <iosfwd>
#include <memory>

#include "features.hpp"
#include "mdp.hpp"
#include "rng.hpp"

namespace hardmdp {

// Two oracle flavors over one compiled instance:
//   full       — knows w*; rewards are Bernoulli(g(l, dist(w, w*))).
//   simulator  — the reduction's object: no w* is ever computed. Satisfying
//                states pay Bernoulli(g(l, 0)) (their distance is 0 by the
//                uniqueness promise, detectable by evaluate alone); last-layer
//                non-satisfying states pay 0 deterministically.
// Transitions and feature queries are identical in both.
enum class OracleKind { full, simulator };

const char* oracle_kind_name(OracleKind k);
OracleKind oracle_kind_from_name(const std::string& s);

struct Trajectory {
  std::vector<State> states;  // S_0 .. S_tau (terminal included when reached)
  std::vector<int> actions;   // executed prefix
  std::vector<int> rewards;   // one 0/1 draw per executed action
  bool reached_terminal = false;
  bool truncated_by_budget = false;
  uint64_t tau() const { return actions.size(); }
};

std::string trajectory_json(const Trajectory& t);

// Query-counting handle. Every query_* call and every executed rollout step
// costs exactly one call (a rollout step is one simulator invocation
// returning next state + reward). Arming a budget makes standalone queries
// beyond it throw Errc::budget; rollouts instead stop early and flag
// truncated_by_budget. Budgets are never silently extended.
//
// Determinism: standalone reward draws use substream 0 of the handle's seed;
// the n-th rollout (1-based) uses substream n. Two handles with equal seed
// and kind produce identical samples regardless of interleaving with other
// handles.
class Oracle {
 public:
  Oracle(std::shared_ptr<const Instance> instance, OracleKind kind, uint64_t seed);
  Oracle(const Instance& instance, OracleKind kind, uint64_t seed);

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  OracleKind kind() const { return kind_; }
  uint64_t seed() const { return seed_; }
  const Instance& instance() const { return *instance_; }
  const CnfMdp& mdp() const { return mdp_; }

  uint64_t calls() const { return calls_; }
  void arm_budget(uint64_t max_calls) { budget_ = max_calls; }
  std::optional<uint64_t> budget() const { return budget_; }
  uint64_t remaining_budget() const;  // UINT64_MAX when unarmed

  // Audit log: "<tag> <state> <action> -> <result>" per query.
  void set_query_log(std::ostream* sink) { log_ = sink; }

  State root() const { return mdp_.root(); }  // instance metadata, not a query

  State query_transition(const State& s, int action);
  int query_reward(const State& s, int action);
  FeatureVector query_features(const State& s);              // psi(s)
  FeatureVector query_features_sa(const State& s, int action);  // psi(s, a)

  // Runs the fixed action sequence from the root. Each executed step counts
  // one call; stops at the sink, at sequence end, or when the budget would
  // be exceeded (flagged). Sequence must be non-empty.
  Trajectory rollout(const std::vector<int>& actions);

  // The success rate this handle's own reward law assigns to exiting s —
  // introspection for reports and tests, not a counted oracle query.
  Rat reward_mean(const State& s) const;

  // Full-oracle capability: the hidden solution. Errors on simulator
  // handles — planners that need it must hold a full oracle and say so.
  const std::optional<Assignment>& wstar() const;

 private:
  void charge(const char* what);  // counter + budget enforcement

  std::shared_ptr<const Instance> instance_;
  CnfMdp mdp_;
  OracleKind kind_;
  uint64_t seed_;
  std::optional<Assignment> wstar_;  // full kind only
  SplitMix64 query_stream_;
  uint64_t rollouts_started_ = 0;
  uint64_t calls_ = 0;
  std::optional<uint64_t> budget_;
  std::ostream* log_ = nullptr;
};

// Exact Bernoulli(p) draw from 53 uniform bits: success iff u/2^53 < p,
// decided by integer cross-multiplication. p = 0 short-circuits without
// consuming randomness.
int sample_bernoulli(SplitMix64& gen, const Rat& p);

}  // namespace hardmdp
