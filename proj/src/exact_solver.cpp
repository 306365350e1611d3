#include "exact_solver.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <ostream>

namespace hardmdp {

namespace {

struct BranchInfo {
  bool sat = false;
  std::array<uint32_t, 3> vars{0, 0, 0};
};

BranchInfo compute_branch(const Formula& f, const Assignment& w) {
  BranchInfo info;
  auto idx = first_unsatisfied_clause(f, w);
  if (!idx) {
    info.sat = true;
    return info;
  }
  const Clause& c = f.clauses[*idx];
  info.vars = {c[0].var, c[1].var, c[2].var};
  return info;
}

// Branch lookups dominate the sweep, so tabulate them over all 2^v
// assignments when that is cheap; fall back to direct clause scans for the
// wide-but-shallow corner the work cap still admits.
class BranchSource {
 public:
  BranchSource(const Formula& f) : f_(f) {
    if (f.v <= 20) {
      uint64_t total = uint64_t(1) << f.v;
      table_.resize(total);
      for (uint64_t bits = 0; bits < total; ++bits)
        table_[bits] = compute_branch(f, Assignment::from_packed64(f.v, bits));
    }
  }

  BranchInfo get(uint64_t packed) const {
    if (!table_.empty()) return table_[packed];
    return compute_branch(f_, Assignment::from_packed64(f_.v, packed));
  }

 private:
  const Formula& f_;
  std::vector<BranchInfo> table_;
};

uint64_t flip_bit(uint64_t packed, uint32_t var) {
  return packed ^ (uint64_t(1) << (var - 1));
}

}  // namespace

struct DpEngine {
  const Formula& f;
  const InstanceParams& p;
  Int work_cap;
  const DpCallbacks* cbs;
  ExactValues* retain;  // may be null (streaming)

  SweepResult out = {};
  uint64_t H = 0;
  bool has_wstar = false;
  uint64_t wstar_packed = 0;

  void check_cap() const {
    if (p.v > 62) fail(Errc::cap, "exact solving is limited to v <= 62");
    Int work = ipow(Int(2), p.v) * p.H * p.k;
    if (work > work_cap)
      fail(Errc::cap, "exact solve work 2^v*H*k = " + work.get_str() + " exceeds cap " +
                          work_cap.get_str() + " (raise --cap / HARDMDP_CAP if intended)");
    if (!p.horizon_fits_u64()) fail(Errc::cap, "horizon too large for exact solving");
  }

  Rat g_of(uint64_t l, uint32_t dist) const {
    Int hv = p.H + p.v;
    Int num = hv - Int(l) - dist;
    return rpow(make_rat(num, hv), p.r);
  }

  void run() {
    check_cap();
    H = to_u64(p.H);

    std::optional<Assignment> wstar = unique_solution(f, 26);
    has_wstar = wstar.has_value();
    if (has_wstar) wstar_packed = wstar->packed64();
    out.wstar = wstar;

    BranchSource branch(f);
    bool k2 = p.k == 2;

    // Forward closure from the root, one sorted key list per depth.
    std::vector<std::vector<uint64_t>> reach;
    reach.push_back({0});  // all-negative assignment packs to 0
    for (uint64_t l = 0; l < H; ++l) {
      std::vector<uint64_t> next;
      for (uint64_t w : reach[l]) {
        BranchInfo info = branch.get(w);
        if (info.sat) continue;  // rewarding: exits to the sink
        next.push_back(flip_bit(w, info.vars[0]));
        next.push_back(flip_bit(w, info.vars[1]));
        next.push_back(flip_bit(w, info.vars[2]));
      }
      if (next.empty()) break;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      reach.push_back(std::move(next));
    }
    uint64_t last = reach.size() - 1;
    if (retain) retain->layers_.resize(last + 1);

    // Backward induction; layer H's reward row by distance, shared.
    std::vector<Rat> horizon_row;
    if (last == H) {
      horizon_row.resize(p.v + 1, Rat(0));
      if (has_wstar)
        for (uint32_t dist = 0; dist <= p.v; ++dist) horizon_row[dist] = g_of(H, dist);
    }

    std::unordered_map<uint64_t, Rat> local_next;
    const std::unordered_map<uint64_t, Rat>* next_values = nullptr;

    for (uint64_t l = last + 1; l-- > 0;) {
      ExactValues::Layer layer;
      layer.normal_keys = reach[l];

      auto next_of = [&](uint64_t key) -> const Rat& {
        auto it = next_values->find(key);
        // forward closure covers every successor; a miss is a solver bug
        if (it == next_values->end()) fail(Errc::internal, "successor missing from next layer");
        return it->second;
      };

      // Intermediates of this depth (2-action compile, non-rewarding parents).
      if (k2) {
        for (uint64_t w : layer.normal_keys) {
          BranchInfo info = branch.get(w);
          if (info.sat || l == H) continue;
          const Rat& q1 = next_of(flip_bit(w, info.vars[0]));
          const Rat& q2 = next_of(flip_bit(w, info.vars[1]));
          Rat best = q1 >= q2 ? q1 : q2;
          layer.inter_keys.push_back(w);
          layer.inter.emplace(w, std::move(best));
        }
        if (cbs) {
          for (uint64_t w : layer.inter_keys) {
            BranchInfo info = branch.get(w);
            State s = State::intermediate(Assignment::from_packed64(p.v, w), l, info.vars[0],
                                          info.vars[1]);
            out.pendings_seen.insert({info.vars[0], info.vars[1]});
            if (cbs->on_state) cbs->on_state(s, layer.inter.at(w));
            if (cbs->on_pair) {
              cbs->on_pair(s, 1, next_of(flip_bit(w, info.vars[0])));
              cbs->on_pair(s, 2, next_of(flip_bit(w, info.vars[1])));
            }
          }
        } else if (!layer.inter_keys.empty()) {
          for (uint64_t w : layer.inter_keys) {
            BranchInfo info = branch.get(w);
            out.pendings_seen.insert({info.vars[0], info.vars[1]});
          }
        }
        out.stats.intermediate_states += layer.inter_keys.size();
        out.stats.pairs += 2 * layer.inter_keys.size();
      }

      for (uint64_t w : layer.normal_keys) {
        BranchInfo info = branch.get(w);
        bool rewarding = info.sat || l == H;
        Rat value;
        if (rewarding) {
          if (l == H) value = horizon_row[uint32_t(std::popcount(w ^ wstar_packed))];
          else value = has_wstar ? g_of(l, 0) : Rat(0);
          // A satisfying state under the uniqueness promise is w* itself, so
          // its distance is 0; unsatisfiable formulas never pay.
        } else {
          const Rat* best = &next_of(flip_bit(w, info.vars[2]));
          if (k2) {
            const Rat& via_inter = layer.inter.at(w);
            if (via_inter > *best) best = &via_inter;
          } else {
            const Rat& q1 = next_of(flip_bit(w, info.vars[0]));
            const Rat& q2 = next_of(flip_bit(w, info.vars[1]));
            if (q1 > *best) best = &q1;
            if (q2 > *best) best = &q2;
          }
          value = *best;
        }

        if (cbs) {
          State s = State::normal(Assignment::from_packed64(p.v, w), l);
          if (cbs->on_state) cbs->on_state(s, value);
          if (cbs->on_pair) {
            if (rewarding) {
              for (int a = 1; a <= p.k; ++a) cbs->on_pair(s, a, Rat(0));
            } else if (k2) {
              cbs->on_pair(s, 1, next_of(flip_bit(w, info.vars[2])));
              cbs->on_pair(s, 2, layer.inter.at(w));
            } else {
              for (int a = 1; a <= 3; ++a)
                cbs->on_pair(s, a, next_of(flip_bit(w, info.vars[size_t(a - 1)])));
            }
          }
        }
        out.stats.pairs += uint64_t(p.k);
        layer.normal.emplace(w, std::move(value));
      }
      out.stats.normal_states += layer.normal_keys.size();

      if (retain) {
        retain->layers_[l] = std::move(layer);
        next_values = &retain->layers_[l].normal;
      } else {
        local_next = std::move(layer.normal);
        next_values = &local_next;
      }
    }

    out.root_value = next_values->at(0);
  }
};

ExactValues exact_values(const Formula& f, const InstanceParams& params, const Int& work_cap) {
  ExactValues ev;
  ev.formula_ = f;
  ev.params_ = params;
  DpEngine engine{ev.formula_, ev.params_, work_cap, nullptr, &ev};
  engine.run();
  ev.wstar_ = engine.out.wstar;
  ev.root_value_ = engine.out.root_value;
  ev.stats_ = engine.out.stats;
  return ev;
}

Rat exact_root_value(const Formula& f, const InstanceParams& params, const Int& work_cap) {
  DpEngine engine{f, params, work_cap, nullptr, nullptr};
  engine.run();
  return engine.out.root_value;
}

SweepResult dp_sweep(const Formula& f, const InstanceParams& params, const Int& work_cap,
                     const DpCallbacks* callbacks) {
  DpEngine engine{f, params, work_cap, callbacks, nullptr};
  engine.run();
  return std::move(engine.out);
}

Rat ExactValues::value(const State& s) const {
  if (s.is_terminal()) return Rat(0);
  CnfMdp mdp(formula_, params_);
  mdp.validate_state(s);
  if (s.depth >= layers_.size()) fail(Errc::state, "state not reachable (beyond explored depth)");
  const Layer& layer = layers_[s.depth];
  const auto& map = s.kind == StateKind::intermediate ? layer.inter : layer.normal;
  auto it = map.find(s.w.packed64());
  if (it == map.end()) fail(Errc::state, "state not reachable from the root");
  return it->second;
}

Rat ExactValues::q_value(const State& s, int action) const {
  CnfMdp mdp(formula_, params_);
  State next = mdp.transition(s, action);
  return value(next);
}

bool ExactValues::reachable(const State& s) const {
  if (s.is_terminal()) return true;
  try {
    CnfMdp mdp(formula_, params_);
    mdp.validate_state(s);
  } catch (const Error&) {
    return false;
  }
  if (s.depth >= layers_.size()) return false;
  const Layer& layer = layers_[s.depth];
  const auto& map = s.kind == StateKind::intermediate ? layer.inter : layer.normal;
  return map.contains(s.w.packed64());
}

void ExactValues::for_each(const std::function<void(const State&, const Rat&)>& fn) const {
  for (uint64_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    for (uint64_t w : layer.normal_keys)
      fn(State::normal(Assignment::from_packed64(params_.v, w), l), layer.normal.at(w));
    CnfMdp mdp(formula_, params_);
    for (uint64_t w : layer.inter_keys) {
      Assignment a = Assignment::from_packed64(params_.v, w);
      auto vars = mdp.branch_vars(a);
      fn(State::intermediate(std::move(a), l, (*vars)[0], (*vars)[1]), layer.inter.at(w));
    }
  }
}

void ExactValues::export_values(std::ostream& out) const {
  for_each([&](const State& s, const Rat& value) {
    out << state_string(s) << ' ' << rat_str(value) << '\n';
  });
}

VerifyOutcome verify_instance(const Formula& f, const InstanceParams& params,
                              const VerifyOptions& opts) {
  VerifyOutcome out;
  out.d = params.d;
  out.d_used = 0;

  std::optional<Assignment> wstar = unique_solution(f, 26);
  out.unsat = !wstar;
  ThetaVector theta = make_theta(f, wstar, params);
  CnfMdp mdp(f, params);
  Rat fault_delta = make_rat(Int(1), params.H + params.v);

  uint64_t visit = 0;
  auto note_value_mismatch = [&](const State& s, const Rat& dp, const Rat& law) {
    if (!out.value_law_exact) return;
    out.value_law_exact = false;
    out.value_law_counterexample =
        state_string(s) + " dp=" + rat_str(dp) + " law=" + rat_str(law);
  };
  auto note_lin_mismatch = [&](const std::string& what, const Rat& dp, const Rat& lin) {
    if (!out.linearity_exact) return;
    out.linearity_exact = false;
    out.linearity_counterexample = what + " dp=" + rat_str(dp) + " <theta,psi>=" + rat_str(lin);
  };

  DpCallbacks cbs;
  cbs.on_state = [&](const State& s, const Rat& dp_value) {
    if (opts.check_values) {
      Rat law = mdp.optimal_value(s, wstar);
      if (opts.fault && visit == opts.fault->state_index) {
        Rat bumped = law + fault_delta;
        law = bumped;
      }
      if (law != dp_value) note_value_mismatch(s, dp_value, law);
    }
    if (opts.check_linearity) {
      Rat lin = psi_dot_theta(s, params, theta);
      if (lin != dp_value) note_lin_mismatch(state_string(s), dp_value, lin);
    }
    ++visit;
  };
  cbs.on_pair = [&](const State& s, int action, const Rat& q) {
    State next = mdp.transition(s, action);
    if (opts.check_values) {
      Rat law_q = mdp.optimal_value(next, wstar);
      if (law_q != q && out.q_identity_exact) {
        out.q_identity_exact = false;
        out.q_counterexample = state_string(s) + " a=" + std::to_string(action) +
                               " q=" + rat_str(q) + " V(P)=" + rat_str(law_q);
      }
    }
    if (opts.check_linearity) {
      Rat lin = psi_dot_theta(next, params, theta);
      if (lin != q)
        note_lin_mismatch(state_string(s) + " a=" + std::to_string(action), q, lin);
    }
  };

  SweepResult swept = dp_sweep(f, params, opts.work_cap, &cbs);
  out.stats = swept.stats;
  if (opts.check_linearity)
    out.d_used = count_touched_tuples(params.v, params.r, params.k, swept.pendings_seen);
  return out;
}

VerifyOutcome verify_value_law(const Formula& f, const InstanceParams& params,
                               const Int& work_cap, const std::optional<FaultSpec>& fault) {
  VerifyOptions opts;
  opts.check_values = true;
  opts.check_linearity = false;
  opts.work_cap = work_cap;
  opts.fault = fault;
  return verify_instance(f, params, opts);
}

VerifyOutcome verify_linearity(const Formula& f, const InstanceParams& params,
                               const Int& work_cap) {
  VerifyOptions opts;
  opts.check_values = false;
  opts.check_linearity = true;
  opts.work_cap = work_cap;
  return verify_instance(f, params, opts);
}

std::vector<int> optimal_policy(const Formula& f, const InstanceParams& params,
                                const std::optional<Assignment>& wstar_in) {
  std::optional<Assignment> wstar = wstar_in ? wstar_in : unique_solution(f, 26);
  if (!wstar) fail(Errc::precondition, "optimal_policy needs a satisfiable formula");
  if (!evaluate(f, *wstar)) fail(Errc::invalid_argument, "supplied w* does not satisfy f");

  CnfMdp mdp(f, params);
  std::vector<int> actions;
  Assignment w = Assignment::all_negative(params.v);
  uint64_t l = 0;

  while (!mdp.is_satisfying(w) && !params.at_horizon(l)) {
    auto vars = mdp.branch_vars(w);
    // The first unsatisfied clause is satisfied by w*, so at least one of
    // its variables disagrees with w*; flipping any such variable moves one
    // step closer. Lowest action index wins ties.
    auto differs = [&](uint32_t var) { return w.is_true(var) != wstar->is_true(var); };
    if (params.k == 3) {
      int a = differs((*vars)[0]) ? 1 : differs((*vars)[1]) ? 2 : 3;
      assert(differs((*vars)[size_t(a - 1)]));
      actions.push_back(a);
      w.flip((*vars)[size_t(a - 1)]);
    } else {
      if (differs((*vars)[2])) {
        actions.push_back(1);
        w.flip((*vars)[2]);
      } else {
        actions.push_back(2);  // descend to the intermediate chooser
        int a = differs((*vars)[0]) ? 1 : 2;
        assert(differs((*vars)[size_t(a - 1)]));
        actions.push_back(a);
        w.flip((*vars)[size_t(a - 1)]);
      }
    }
    ++l;
  }
  return actions;
}

PolicyValue policy_value(const Formula& f, const InstanceParams& params,
                         const std::vector<int>& actions,
                         const std::optional<Assignment>& wstar) {
  CnfMdp mdp(f, params);
  State s = mdp.root();
  PolicyValue out;
  out.value = Rat(0);
  // The walk is deterministic until a rewarding state; once there, every
  // action exits with a Bernoulli(g) payoff, so the policy's value is g at
  // the first rewarding state it reaches — remaining actions are irrelevant.
  for (int action : actions) {
    if (mdp.is_rewarding(s)) break;
    s = mdp.transition(s, action);
    ++out.steps_used;
  }
  if (mdp.is_rewarding(s)) {
    out.reached_reward = true;
    out.value = mdp.expected_reward(s, wstar);
  }
  return out;
}

GoodPolicyReport good_policy_check(const Formula& f, const InstanceParams& params,
                                   const std::vector<int>& actions, const Int& work_cap) {
  std::optional<Assignment> wstar = unique_solution(f, 26);
  GoodPolicyReport rep;
  rep.v_star = exact_root_value(f, params, work_cap);
  PolicyValue pv = policy_value(f, params, actions, wstar);
  rep.v_pi = pv.value;
  rep.reached_reward = pv.reached_reward;
  Rat quarter = make_rat(Int(1), Int(4));
  Rat threshold = rep.v_star - quarter;
  rep.margin = rep.v_pi - threshold;
  rep.good = rep.v_pi > threshold;
  return rep;
}

}  // namespace hardmdp
