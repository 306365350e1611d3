#include "reduction.hpp"

#include "error.hpp"
#include "isolate.hpp"
#include "oracle.hpp"
#include "rng.hpp"

namespace hardmdp {

namespace {

Int default_budget(uint32_t v, uint32_t r) {
  uint64_t e = (uint64_t(r) * r + 3) / 4;  // ceil(r^2 / 4)
  return ipow(Int(v), e);
}

}  // namespace

ASatReport a_sat(std::shared_ptr<const Instance> inst, const ReductionOptions& opts) {
  const InstanceParams& p = inst->params;
  ASatReport rep;
  rep.planner_name = opts.planner;
  rep.budget = opts.budget ? *opts.budget : default_budget(p.v, p.r);
  if (rep.budget < 0) fail(Errc::invalid_argument, "a_sat: negative budget");
  rep.armed_budget = fits_u64(rep.budget) ? to_u64(rep.budget) : UINT64_MAX;

  Oracle planner_view(inst, OracleKind::simulator, opts.seed);
  planner_view.arm_budget(rep.armed_budget);
  if (opts.query_log) planner_view.set_query_log(opts.query_log);

  PlannerConfig cfg = opts.planner_cfg;
  cfg.seed = opts.seed;
  PlanResult plan;
  try {
    PlannerFn fn = opts.custom ? opts.custom : make_planner(opts.planner, cfg);
    plan = fn(planner_view);
  } catch (const Error& e) {
    if (e.code() == Errc::budget) {
      plan.budget_exhausted = true;
      plan.note = e.what();
    } else if (e.code() == Errc::invalid_argument || e.code() == Errc::precondition ||
               e.code() == Errc::state) {
      // Planner can't run against this handle (e.g. demands the hidden
      // solution): decide NO rather than crash the pipeline.
      plan.actions.clear();
      plan.note = e.what();
      rep.malformed_sequence = true;
    } else {
      throw;
    }
  }
  rep.planner_calls = planner_view.calls();
  rep.planner_complete = plan.complete;
  rep.budget_exhausted = plan.budget_exhausted;
  rep.planner_note = plan.note;
  rep.actions = plan.actions;
  rep.sequence_length = plan.actions.size();

  // Certification pass: fresh unbudgeted simulator, transitions only.
  Oracle verifier(inst, OracleKind::simulator, opts.seed);
  if (opts.query_log) verifier.set_query_log(opts.query_log);
  State s = verifier.root();
  State last_ns = s;
  for (int a : plan.actions) {
    if (s.is_terminal()) break;  // sequence continues past the sink: ignore the rest
    try {
      s = verifier.query_transition(s, a);
    } catch (const Error& e) {
      if (e.code() == Errc::invalid_argument || e.code() == Errc::state) {
        rep.malformed_sequence = true;
        if (rep.planner_note.empty()) rep.planner_note = e.what();
        break;
      }
      throw;
    }
    if (!s.is_terminal()) last_ns = s;
  }
  rep.verify_calls = verifier.calls();
  rep.final_assignment = last_ns.w;
  rep.final_depth = last_ns.depth;
  rep.policy_value = verifier.reward_mean(last_ns);  // g(l,0) if satisfying, else 0
  rep.yes = !rep.malformed_sequence && evaluate(inst->formula, last_ns.w);
  if (rep.yes) rep.witness = last_ns.w;
  // The YES side is certified: never emit YES without a checked witness.
  if (rep.yes && !evaluate(inst->formula, *rep.witness))
    fail(Errc::internal, "a_sat: witness check failed after positive decision");
  return rep;
}

ASatReport a_sat(const Formula& f, uint32_t r, int k, const ReductionOptions& opts) {
  auto inst = std::make_shared<Instance>(make_instance(f, r, k, Mode::reduction));
  return a_sat(std::move(inst), opts);
}

EndToEndReport end_to_end(const Formula& f, uint32_t r, int k, const EndToEndOptions& opts) {
  EndToEndReport rep;
  const uint64_t trials =
      opts.trials != 0 ? opts.trials : (opts.use_isolation ? 8 * (uint64_t(f.v) + 1) : 1);
  for (uint64_t t = 0; t < trials && !rep.yes; ++t) {
    SplitMix64 tstream = SplitMix64::substream(opts.base.seed, t + 1);
    rep.trials_run = t + 1;
    if (!opts.use_isolation) {
      ReductionOptions ro = opts.base;
      ro.seed = tstream.next();
      ASatReport ar = a_sat(f, r, k, ro);
      rep.candidates_run += 1;
      rep.total_planner_calls += ar.planner_calls;
      rep.total_verify_calls += ar.verify_calls;
      rep.attempts.push_back(EndToEndTrial{t, 0, f.v, ar.yes, ar.planner_calls, ar.verify_calls});
      if (ar.yes) {
        rep.yes = true;
        rep.witness = ar.final_assignment;
      }
      continue;
    }
    const uint64_t iso_seed = tstream.next();
    const uint64_t asat_base = tstream.next();
    std::vector<IsolationCandidate> cands = isolate(f, iso_seed);
    for (const IsolationCandidate& cand : cands) {
      ReductionOptions ro = opts.base;
      ro.seed = SplitMix64::mix(asat_base ^ SplitMix64::mix(cand.parity_count + 1));
      ASatReport ar = a_sat(cand.formula, r, k, ro);
      rep.candidates_run += 1;
      rep.total_planner_calls += ar.planner_calls;
      rep.total_verify_calls += ar.verify_calls;
      rep.attempts.push_back(EndToEndTrial{t, cand.parity_count, cand.formula.v, ar.yes,
                                           ar.planner_calls, ar.verify_calls});
      if (!ar.yes) continue;
      // Project onto the original variables and re-check: the decision is
      // only YES with a witness for the input formula itself.
      Assignment projected(f.v);
      for (uint32_t var = 1; var <= f.v; ++var)
        projected.set_true(var, ar.final_assignment.is_true(var));
      if (evaluate(f, projected)) {
        rep.yes = true;
        rep.witness = projected;
        break;
      }
    }
  }
  return rep;
}

}  // namespace hardmdp
