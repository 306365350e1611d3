#pragma once

#include "cnf.hpp"
#include "rng.hpp"

namespace hardmdp {

// Random 3-CNF at clause ratio ~4.26 (distinct variables per clause when
// v >= 3, uniform signs); deterministic in the seed via per-attempt
// substreams.
Formula random_formula(uint32_t v, uint32_t clauses, SplitMix64& rng);

struct GeneratedFormula {
  Formula formula;
  uint64_t attempts = 0;   // rejection rounds consumed
  uint64_t solutions = 0;  // certified count
};

// Rejection-sampled unique-SAT instance, uniqueness certified by exact
// counting. Draws with >1 solutions are repaired by appending random
// clauses that keep at least one solution alive until exactly one remains;
// every accept is re-certified from scratch.
GeneratedFormula random_unique_sat(uint32_t v, uint64_t seed, uint32_t max_attempts = 500);

// Rejection-sampled unsatisfiable instance (certified count 0).
GeneratedFormula random_unsat(uint32_t v, uint64_t seed, uint32_t max_attempts = 500);

// Rejection-sampled instance with a certified solution count in [lo, hi]
// (used to exercise isolation on multi-solution formulas).
GeneratedFormula random_with_count(uint32_t v, uint64_t seed, uint64_t lo, uint64_t hi,
                                   uint32_t max_attempts = 2000);

}  // namespace hardmdp
