#pragma once

#include <vector>

#include "cnf.hpp"

namespace hardmdp {

// XOR of the listed variables equals rhs (vars over the original formula,
// sorted ascending, possibly empty).
struct ParityConstraint {
  std::vector<uint32_t> vars;
  bool rhs = false;
};

// Auxiliary variable forced to x_a XOR x_b (a, b may themselves be aux).
struct AuxDef {
  uint32_t var = 0;
  uint32_t a = 0;
  uint32_t b = 0;
};

// One isolation candidate: the original clauses followed by 3-CNF encodings
// of `parity_count` random parities. Aux variables sit above original_v and
// are functionally forced, so satisfying assignments project 1:1 onto
// assignments of the original variables that satisfy formula + parities.
struct IsolationCandidate {
  Formula formula;
  std::vector<ParityConstraint> parities;
  std::vector<AuxDef> aux_defs;          // xor-chain links, in forcing order
  std::vector<uint32_t> unsat_markers;   // aux z with (z)(~z); any value falsifies
  uint32_t original_v = 0;
  uint32_t parity_count = 0;
};

// Append the 3-CNF encoding of one parity to f, recording forced aux
// definitions / markers. vars must be sorted, distinct, within 1..original v.
void encode_parity(Formula& f, const ParityConstraint& c, std::vector<AuxDef>& aux_defs,
                   std::vector<uint32_t>& unsat_markers);

// Valiant–Vazirani candidate list for k = 0..v parities (v+1 candidates,
// candidate 0 is the formula unchanged). Each variable enters a parity with
// probability 1/2; right-hand sides are fair coins. Deterministic in seed.
std::vector<IsolationCandidate> isolate(const Formula& f, uint64_t seed);

// True iff x (over the original variables) satisfies the original formula
// and every parity of the candidate.
bool candidate_accepts(const Formula& original, const IsolationCandidate& cand,
                       const Assignment& x);

// Extend x with the forced aux values (markers set false).
Assignment extend_assignment(const IsolationCandidate& cand, const Assignment& x);

// Exhaustive check (2^v) that the candidate's satisfying assignments are
// exactly the extensions of {x : original(x) and parities(x)}.
bool candidate_projects_exactly(const Formula& original, const IsolationCandidate& cand);

// Number of x over the original variables accepted by the candidate.
uint64_t count_projected_solutions(const Formula& original, const IsolationCandidate& cand);

}  // namespace hardmdp
