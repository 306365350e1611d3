#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "cnf.hpp"
#include "instance.hpp"
#include "rational.hpp"

namespace hardmdp {

// States of the compiled MDP. Normal states carry (assignment, depth); the
// 2-action compile adds intermediate states that sit at the parent's depth
// and remember the two clause variables still to choose between. The
// terminal sink carries nothing.
enum class StateKind { normal, intermediate, terminal };

struct State {
  StateKind kind = StateKind::terminal;
  Assignment w;        // empty for terminal
  uint64_t depth = 0;  // l; intermediates use the parent's l
  uint32_t pend1 = 0, pend2 = 0;  // intermediate only: first/second clause vars

  static State terminal() { return State{}; }
  static State normal(Assignment w, uint64_t l) {
    return State{StateKind::normal, std::move(w), l, 0, 0};
  }
  static State intermediate(Assignment w, uint64_t l, uint32_t i1, uint32_t i2) {
    return State{StateKind::intermediate, std::move(w), l, i1, i2};
  }

  bool is_terminal() const { return kind == StateKind::terminal; }
  bool operator==(const State&) const = default;
};

// Canonical state serialization, the wire format of the oracle protocol:
//   terminal      "T"
//   normal        "N:<hex>:<depth>"
//   intermediate  "I:<hex>:<depth>:<i1>:<i2>"
// <hex> is the packed assignment (see Assignment::hex).
std::string state_string(const State& s);
State parse_state(const std::string& text, uint32_t v);

// One compiled formula: deterministic transitions, the reward law g and the
// closed-form optimal values. Everything that needs the hidden solution w*
// takes it explicitly; transitions and features never do.
class CnfMdp {
 public:
  CnfMdp(const Formula& f, const InstanceParams& params);

  const Formula& formula() const { return *f_; }
  const InstanceParams& params() const { return params_; }
  int action_count() const { return params_.k; }

  State root() const;

  bool is_satisfying(const Assignment& w) const { return !first_unsatisfied_clause(*f_, w); }

  // Rewarding = every action pays a Bernoulli(g) and exits to the sink:
  // satisfying assignments at any depth, and all normal states on the last
  // layer. Intermediates never reward.
  bool is_rewarding(const State& s) const;

  // Deterministic next state; actions are 1-based (1..k). Validates the
  // state structurally first (see validate_state).
  State transition(const State& s, int action) const;

  // Structural validity: assignment width, depth <= H, and for intermediates
  // that the pending pair is exactly the first two variables of the first
  // unsatisfied clause with the parent non-rewarding. Throws Errc::state.
  void validate_state(const State& s) const;

  // g(l, dist) = (1 - (l + dist)/(H + v))^r, the Bernoulli success rate paid
  // when exiting a rewarding state. Exact rational.
  Rat g_reward(const Int& l, uint32_t dist) const;

  // V* in closed form (the law the exact solver re-derives by DP):
  //   terminal                    0
  //   normal                      g(l, dist(w, w*))
  //   intermediate s_[i1,i2]      g with numerator l + dist + 2*[both pending
  //                               bits already agree with w*]
  // wstar empty (unsatisfiable formula) makes every value 0.
  Rat optimal_value(const State& s, const std::optional<Assignment>& wstar) const;

  // Expected immediate reward under the full-information law: g at rewarding
  // states, 0 elsewhere.
  Rat expected_reward(const State& s, const std::optional<Assignment>& wstar) const;

  // The three (or two) variables of the first unsatisfied clause, nullopt if
  // w satisfies the formula.
  std::optional<std::array<uint32_t, 3>> branch_vars(const Assignment& w) const;

 private:
  const Formula* f_;
  InstanceParams params_;
};

}  // namespace hardmdp
