#include "oracle.hpp"

#include <json.hpp>
#include <ostream>

namespace hardmdp {

const char* oracle_kind_name(OracleKind k) {
  return k == OracleKind::full ? "full" : "simulator";
}

OracleKind oracle_kind_from_name(const std::string& s) {
  if (s == "full") return OracleKind::full;
  if (s == "simulator") return OracleKind::simulator;
  fail(Errc::invalid_argument, "unknown oracle kind '" + s + "' (want full|simulator)");
}

std::string trajectory_json(const Trajectory& t) {
  nlohmann::ordered_json j;
  j["states"] = nlohmann::ordered_json::array();
  for (const State& s : t.states) j["states"].push_back(state_string(s));
  j["actions"] = t.actions;
  j["rewards"] = t.rewards;
  j["tau"] = t.tau();
  j["reached_terminal"] = t.reached_terminal;
  j["truncated_by_budget"] = t.truncated_by_budget;
  return j.dump();
}

int sample_bernoulli(SplitMix64& gen, const Rat& p) {
  if (p <= 0) return 0;
  uint64_t u = gen.bits53();
  Int lhs = Int(u) * p.get_den();
  Int rhs;
  mpz_mul_2exp(rhs.get_mpz_t(), p.get_num().get_mpz_t(), 53);  // num * 2^53
  return lhs < rhs ? 1 : 0;
}

Oracle::Oracle(std::shared_ptr<const Instance> instance, OracleKind kind, uint64_t seed)
    : instance_(std::move(instance)),
      mdp_(instance_->formula, instance_->params),
      kind_(kind),
      seed_(seed),
      query_stream_(SplitMix64::substream(seed, 0)) {
  if (kind_ == OracleKind::full) {
    // The full oracle's reward law needs the hidden solution up front.
    wstar_ = unique_solution(instance_->formula, 26);
  }
}

Oracle::Oracle(const Instance& instance, OracleKind kind, uint64_t seed)
    : Oracle(std::make_shared<const Instance>(instance), kind, seed) {}

uint64_t Oracle::remaining_budget() const {
  if (!budget_) return UINT64_MAX;
  return calls_ >= *budget_ ? 0 : *budget_ - calls_;
}

void Oracle::charge(const char* what) {
  if (budget_ && calls_ >= *budget_)
    fail(Errc::budget, std::string("oracle budget of ") + std::to_string(*budget_) +
                           " calls exhausted before " + what + " query");
  ++calls_;
}

State Oracle::query_transition(const State& s, int action) {
  charge("transition");
  State next = mdp_.transition(s, action);
  if (log_)
    *log_ << "T " << state_string(s) << ' ' << action << " -> " << state_string(next) << '\n';
  return next;
}

Rat Oracle::reward_mean(const State& s) const {
  mdp_.validate_state(s);
  if (!mdp_.is_rewarding(s)) return Rat(0);
  if (kind_ == OracleKind::full) return mdp_.expected_reward(s, wstar_);
  // Simulator law: evaluate is all it takes. A satisfying state is w* itself
  // (uniqueness promise), distance 0; a last-layer miss pays nothing.
  if (mdp_.is_satisfying(s.w)) return mdp_.g_reward(Int(s.depth), 0);
  return Rat(0);
}

int Oracle::query_reward(const State& s, int action) {
  charge("reward");
  if (s.is_terminal()) fail(Errc::state, "terminal state has no reward");
  if (action < 1 || action > mdp_.action_count())
    fail(Errc::invalid_argument, "action out of range");
  Rat p = reward_mean(s);
  int bit = sample_bernoulli(query_stream_, p);
  if (log_) *log_ << "R " << state_string(s) << ' ' << action << " -> " << bit << '\n';
  return bit;
}

FeatureVector Oracle::query_features(const State& s) {
  charge("feature");
  mdp_.validate_state(s);
  FeatureVector fv = features_psi(s, instance_->params);
  if (log_)
    *log_ << "F " << state_string(s) << " - -> " << fv.nonzero_count() << " entries\n";
  return fv;
}

FeatureVector Oracle::query_features_sa(const State& s, int action) {
  charge("feature");
  FeatureVector fv = features_psi_sa(s, action, mdp_);
  if (log_)
    *log_ << "F " << state_string(s) << ' ' << action << " -> " << fv.nonzero_count()
          << " entries\n";
  return fv;
}

Trajectory Oracle::rollout(const std::vector<int>& actions) {
  if (actions.empty()) fail(Errc::invalid_argument, "rollout needs a non-empty action sequence");
  ++rollouts_started_;
  SplitMix64 stream = SplitMix64::substream(seed_, rollouts_started_);

  Trajectory t;
  State s = root();
  t.states.push_back(s);
  for (int action : actions) {
    if (budget_ && calls_ >= *budget_) {
      t.truncated_by_budget = true;
      break;
    }
    ++calls_;  // one simulator invocation: (state, action) -> (next, reward)
    int reward = mdp_.is_rewarding(s) ? sample_bernoulli(stream, reward_mean(s)) : 0;
    State next = mdp_.transition(s, action);
    if (log_)
      *log_ << "S " << state_string(s) << ' ' << action << " -> " << state_string(next) << ' '
            << reward << '\n';
    t.actions.push_back(action);
    t.rewards.push_back(reward);
    t.states.push_back(next);
    s = std::move(next);
    if (s.is_terminal()) {
      t.reached_terminal = true;
      break;
    }
  }
  return t;
}

const std::optional<Assignment>& Oracle::wstar() const {
  if (kind_ != OracleKind::full)
    fail(Errc::invalid_argument,
         "w* is a full-oracle capability; this handle is a simulator");
  return wstar_;
}

}  // namespace hardmdp
