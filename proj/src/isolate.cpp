#include "isolate.hpp"

#include <algorithm>

#include "error.hpp"
#include "rng.hpp"

namespace hardmdp {

namespace {

Literal pos(uint32_t var) { return Literal{var, true}; }
Literal neg(uint32_t var) { return Literal{var, false}; }

// x_a XOR x_b XOR x_c == rhs, four ternary clauses each blocking one
// violating sign pattern.
void emit_xor3(Formula& f, uint32_t a, uint32_t b, uint32_t c, bool rhs) {
  if (rhs) {
    f.clauses.push_back({pos(a), pos(b), pos(c)});
    f.clauses.push_back({neg(a), neg(b), pos(c)});
    f.clauses.push_back({neg(a), pos(b), neg(c)});
    f.clauses.push_back({pos(a), neg(b), neg(c)});
  } else {
    f.clauses.push_back({neg(a), pos(b), pos(c)});
    f.clauses.push_back({pos(a), neg(b), pos(c)});
    f.clauses.push_back({pos(a), pos(b), neg(c)});
    f.clauses.push_back({neg(a), neg(b), neg(c)});
  }
}

}  // namespace

void encode_parity(Formula& f, const ParityConstraint& c, std::vector<AuxDef>& aux_defs,
                   std::vector<uint32_t>& unsat_markers) {
  for (uint32_t var : c.vars)
    if (var == 0 || var > f.v) fail(Errc::invalid_argument, "parity variable out of range");
  if (c.vars.empty()) {
    if (!c.rhs) return;  // 0 == 0, nothing to add
    // 0 == 1: contradictory pair on a fresh variable.
    uint32_t z = ++f.v;
    f.clauses.push_back({pos(z), pos(z), pos(z)});
    f.clauses.push_back({neg(z), neg(z), neg(z)});
    unsat_markers.push_back(z);
    return;
  }
  if (c.vars.size() == 1) {
    Literal lit = c.rhs ? pos(c.vars[0]) : neg(c.vars[0]);
    f.clauses.push_back({lit, lit, lit});
    return;
  }
  if (c.vars.size() == 2) {
    uint32_t a = c.vars[0], b = c.vars[1];
    if (c.rhs) {  // a != b
      f.clauses.push_back({pos(a), pos(b), pos(b)});
      f.clauses.push_back({neg(a), neg(b), neg(b)});
    } else {  // a == b
      f.clauses.push_back({pos(a), neg(b), neg(b)});
      f.clauses.push_back({neg(a), pos(b), pos(b)});
    }
    return;
  }
  // Chain longer parities down to three variables: t := w[0] XOR w[1].
  std::vector<uint32_t> work = c.vars;
  while (work.size() > 3) {
    uint32_t t = ++f.v;
    emit_xor3(f, work[0], work[1], t, false);  // w0 ^ w1 ^ t == 0  =>  t forced
    aux_defs.push_back(AuxDef{t, work[0], work[1]});
    std::vector<uint32_t> next;
    next.reserve(work.size() - 1);
    next.push_back(t);
    next.insert(next.end(), work.begin() + 2, work.end());
    work = std::move(next);
  }
  emit_xor3(f, work[0], work[1], work[2], c.rhs);
}

std::vector<IsolationCandidate> isolate(const Formula& f, uint64_t seed) {
  if (f.v == 0) fail(Errc::invalid_argument, "isolate: formula has no variables");
  std::vector<IsolationCandidate> out;
  out.reserve(f.v + 1);
  for (uint32_t k = 0; k <= f.v; ++k) {
    SplitMix64 rng(SplitMix64::substream(seed, k));
    IsolationCandidate cand;
    cand.formula = f;
    cand.original_v = f.v;
    cand.parity_count = k;
    for (uint32_t j = 0; j < k; ++j) {
      ParityConstraint pc;
      for (uint32_t var = 1; var <= f.v; ++var)
        if (rng.coin()) pc.vars.push_back(var);
      pc.rhs = rng.coin();
      encode_parity(cand.formula, pc, cand.aux_defs, cand.unsat_markers);
      cand.parities.push_back(std::move(pc));
    }
    out.push_back(std::move(cand));
  }
  return out;
}

bool candidate_accepts(const Formula& original, const IsolationCandidate& cand,
                       const Assignment& x) {
  if (x.size() != cand.original_v || original.v != cand.original_v)
    fail(Errc::invalid_argument, "candidate_accepts: variable count mismatch");
  if (!evaluate(original, x)) return false;
  for (const ParityConstraint& pc : cand.parities) {
    bool acc = false;
    for (uint32_t var : pc.vars) acc ^= x.is_true(var);
    if (acc != pc.rhs) return false;
  }
  return true;
}

Assignment extend_assignment(const IsolationCandidate& cand, const Assignment& x) {
  if (x.size() != cand.original_v)
    fail(Errc::invalid_argument, "extend_assignment: variable count mismatch");
  Assignment y(cand.formula.v);
  for (uint32_t var = 1; var <= cand.original_v; ++var) y.set_true(var, x.is_true(var));
  // aux_defs are emitted in forcing order: inputs always precede the output.
  for (const AuxDef& d : cand.aux_defs) y.set_true(d.var, y.is_true(d.a) ^ y.is_true(d.b));
  return y;  // unsat markers stay false; their clause pair is false either way
}

bool candidate_projects_exactly(const Formula& original, const IsolationCandidate& cand) {
  const uint32_t v = cand.original_v;
  if (v > 24) fail(Errc::invalid_argument, "candidate_projects_exactly: enumeration cap is 24 variables");
  for (uint64_t bits = 0; bits < (uint64_t(1) << v); ++bits) {
    Assignment x = Assignment::from_packed64(v, bits);
    bool want = candidate_accepts(original, cand, x);
    bool got = evaluate(cand.formula, extend_assignment(cand, x));
    if (want != got) return false;
  }
  return true;
}

uint64_t count_projected_solutions(const Formula& original, const IsolationCandidate& cand) {
  const uint32_t v = cand.original_v;
  if (v > 24) fail(Errc::invalid_argument, "count_projected_solutions: enumeration cap is 24 variables");
  uint64_t n = 0;
  for (uint64_t bits = 0; bits < (uint64_t(1) << v); ++bits)
    n += candidate_accepts(original, cand, Assignment::from_packed64(v, bits)) ? 1 : 0;
  return n;
}

}  // namespace hardmdp
