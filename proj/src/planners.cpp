#include "planners.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "exact_solver.hpp"

namespace hardmdp {

namespace {

uint64_t default_depth_bound(const Oracle& oracle) {
  const InstanceParams& p = oracle.instance().params;
  uint64_t bound = p.v;
  if (p.horizon_fits_u64()) bound = std::min(bound, to_u64(p.H));
  return bound;
}

// True when the probe (s -a-> terminal) certifies s satisfying: a rewarding
// exit below the last layer can only come from a satisfying assignment.
bool exit_below_horizon(const Oracle& oracle, const State& s) {
  return !oracle.instance().params.at_horizon(s.depth);
}

}  // namespace

PlanResult plan_exhaustive(Oracle& oracle, const PlannerConfig& cfg) {
  PlanResult result;
  uint64_t start_calls = oracle.calls();
  uint64_t max_depth = cfg.depth_bound ? cfg.depth_bound : default_depth_bound(oracle);

  std::unordered_set<std::string> explored;  // (w, l, variant) nodes fully expanded
  std::vector<int> path;
  bool found = false;

  // DFS; each expansion probes actions 1..k once. A child equal to the sink
  // certifies the current node rewarding; below the horizon that means
  // satisfying, and the path to it is the answer.
  auto dfs = [&](auto&& self, const State& s) -> void {
    if (found) return;
    if (!explored.insert(state_string(s)).second) return;
    for (int action = 1; action <= oracle.mdp().action_count(); ++action) {
      State child = oracle.query_transition(s, action);
      if (child.is_terminal()) {
        if (exit_below_horizon(oracle, s)) {
          found = true;
          result.actions = path;
          result.complete = true;
        }
        return;  // every action exits a rewarding state; nothing deeper here
      }
      if (child.depth <= max_depth) {
        path.push_back(action);
        self(self, child);
        path.pop_back();
        if (found) return;
      }
    }
  };

  try {
    dfs(dfs, oracle.root());
    if (!found) result.note = "search space exhausted to depth " + std::to_string(max_depth);
  } catch (const Error& e) {
    if (e.code() != Errc::budget) throw;
    result.budget_exhausted = true;
    result.note = "budget exhausted mid-search";
  }
  result.calls_used = oracle.calls() - start_calls;
  return result;
}

PlanResult plan_greedy_clause(Oracle& oracle, const PlannerConfig& cfg) {
  PlanResult result;
  uint64_t start_calls = oracle.calls();
  SplitMix64 rng(SplitMix64::mix(cfg.seed));
  int k = oracle.mdp().action_count();

  std::vector<int> path;
  State s = oracle.root();
  uint64_t steps = 0;
  try {
    while (steps < cfg.step_limit) {
      ++steps;
      int action = int(rng.below(uint64_t(k))) + 1;
      State child = oracle.query_transition(s, action);
      if (child.is_terminal()) {
        if (exit_below_horizon(oracle, s)) {
          result.actions = path;
          result.complete = true;
          break;
        }
        // fell off the last layer: restart from the root
        path.clear();
        s = oracle.root();
        continue;
      }
      path.push_back(action);
      s = std::move(child);
    }
    if (!result.complete && steps >= cfg.step_limit) result.note = "step limit reached";
  } catch (const Error& e) {
    if (e.code() != Errc::budget) throw;
    result.budget_exhausted = true;
    result.note = "budget exhausted mid-walk";
  }
  result.calls_used = oracle.calls() - start_calls;
  return result;
}

std::map<Tuple, double> fit_linear_value(const std::vector<FeatureVector>& features,
                                         const std::vector<double>& targets, double ridge) {
  if (features.size() != targets.size())
    fail(Errc::invalid_argument, "fit_linear_value: sample count mismatch");
  std::map<Tuple, size_t> columns;
  for (const FeatureVector& fv : features)
    for (const auto& [tuple, value] : fv.entries())
      columns.emplace(tuple, columns.size());

  size_t n = features.size(), p = columns.size();
  std::map<Tuple, double> model;
  if (n == 0 || p == 0) return model;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(long(n), long(p));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(long(n));
  for (size_t i = 0; i < n; ++i) {
    y[long(i)] = targets[i];
    for (const auto& [tuple, value] : features[i].entries())
      a(long(i), long(columns.at(tuple))) = value.get_d();
  }

  Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::VectorXd rhs = a.transpose() * y;
  auto solve_with = [&](double lambda) {
    Eigen::MatrixXd m = gram;
    if (lambda > 0) m.diagonal().array() += lambda;
    return Eigen::VectorXd(m.ldlt().solve(rhs));
  };

  Eigen::VectorXd theta = solve_with(0.0);
  // Plain normal equations are singular whenever the sampled support is
  // rank-deficient; detect via the residual of the solved system.
  bool ok = theta.allFinite();
  if (ok) {
    double residual = (gram * theta - rhs).norm();
    ok = residual <= 1e-6 * (1.0 + rhs.norm());
  }
  if (!ok) theta = solve_with(ridge);

  for (const auto& [tuple, col] : columns) model[tuple] = theta[long(col)];
  return model;
}

int choose_greedy_action(const std::vector<FeatureVector>& psi_per_action,
                         const std::map<Tuple, double>& theta_hat) {
  if (psi_per_action.empty()) fail(Errc::invalid_argument, "no actions to choose from");
  int best_action = 1;
  double best_score = 0;
  for (size_t i = 0; i < psi_per_action.size(); ++i) {
    double score = 0;
    for (const auto& [tuple, value] : psi_per_action[i].entries()) {
      auto it = theta_hat.find(tuple);
      if (it != theta_hat.end()) score += it->second * value.get_d();
    }
    if (i == 0 || score > best_score) {
      best_score = score;
      best_action = int(i) + 1;
    }
  }
  return best_action;
}

PlanResult plan_regression(Oracle& oracle, const PlannerConfig& cfg) {
  PlanResult result;
  uint64_t start_calls = oracle.calls();
  SplitMix64 rng(SplitMix64::mix(cfg.seed ^ 0x9E3779B97F4A7C15ULL));
  int k = oracle.mdp().action_count();
  const InstanceParams& params = oracle.instance().params;

  uint64_t episode_len = cfg.episode_len ? cfg.episode_len : 4 * uint64_t(params.v);
  if (params.horizon_fits_u64()) episode_len = std::min(episode_len, to_u64(params.H));
  uint64_t initial_remaining = oracle.remaining_budget();

  std::vector<FeatureVector> xs;
  std::vector<double> ys;

  try {
    // Exploration: uniform random episodes; each step spends 3 calls
    // (features, reward, transition). Keep roughly 40% of the budget for
    // the greedy phase.
    uint64_t explore_floor = initial_remaining == UINT64_MAX ? 0 : (initial_remaining * 2) / 5;
    for (uint64_t ep = 0; ep < cfg.episodes; ++ep) {
      if (oracle.remaining_budget() <= explore_floor + 3) break;
      State s = oracle.root();
      std::vector<FeatureVector> ep_features;
      std::vector<int> ep_rewards;
      for (uint64_t step = 0; step < episode_len; ++step) {
        if (oracle.remaining_budget() <= explore_floor + 3) break;
        int action = int(rng.below(uint64_t(k))) + 1;
        ep_features.push_back(oracle.query_features(s));
        ep_rewards.push_back(oracle.query_reward(s, action));
        State next = oracle.query_transition(s, action);
        s = std::move(next);
        if (s.is_terminal()) break;
      }
      // reward-to-go targets
      double togo = 0;
      std::vector<double> targets(ep_rewards.size());
      for (size_t i = ep_rewards.size(); i-- > 0;) {
        togo += ep_rewards[i];
        targets[i] = togo;
      }
      xs.insert(xs.end(), ep_features.begin(), ep_features.end());
      ys.insert(ys.end(), targets.begin(), targets.end());
    }

    std::map<Tuple, double> theta_hat = fit_linear_value(xs, ys, cfg.ridge);

    // Greedy rollout on the fitted linear value.
    State s = oracle.root();
    for (uint64_t step = 0; step < episode_len; ++step) {
      if (oracle.remaining_budget() < uint64_t(k) + 1) break;
      std::vector<FeatureVector> candidates;
      for (int action = 1; action <= k; ++action)
        candidates.push_back(oracle.query_features_sa(s, action));
      int action = choose_greedy_action(candidates, theta_hat);
      State child = oracle.query_transition(s, action);
      if (child.is_terminal()) {
        result.complete = exit_below_horizon(oracle, s);
        break;
      }
      result.actions.push_back(action);
      s = std::move(child);
    }
  } catch (const Error& e) {
    if (e.code() != Errc::budget) throw;
    result.budget_exhausted = true;
    result.note = "budget exhausted";
  }
  result.calls_used = oracle.calls() - start_calls;
  return result;
}

PlanResult plan_oracle_optimal(Oracle& oracle, const PlannerConfig&) {
  // Capability check happens here: wstar() throws on simulator handles.
  const std::optional<Assignment>& wstar = oracle.wstar();
  PlanResult result;
  if (!wstar) {
    result.note = "oracle reports unsatisfiable; no rewarding policy exists";
    return result;
  }
  result.actions =
      optimal_policy(oracle.instance().formula, oracle.instance().params, wstar);
  result.complete = true;
  result.note = "oracle-assisted: used the w* capability";
  return result;
}

PlannerFn make_planner(const std::string& name, const PlannerConfig& cfg) {
  if (name == "exhaustive")
    return [cfg](Oracle& o) { return plan_exhaustive(o, cfg); };
  if (name == "greedy")
    return [cfg](Oracle& o) { return plan_greedy_clause(o, cfg); };
  if (name == "regression")
    return [cfg](Oracle& o) { return plan_regression(o, cfg); };
  if (name == "oracle-optimal")
    return [cfg](Oracle& o) { return plan_oracle_optimal(o, cfg); };
  fail(Errc::invalid_argument,
       "unknown planner '" + name + "' (want exhaustive|greedy|regression|oracle-optimal)");
}

std::vector<std::string> planner_names() {
  return {"exhaustive", "greedy", "regression", "oracle-optimal"};
}

}  // namespace hardmdp
