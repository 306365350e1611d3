#pragma once

// Shared fixtures for the test suites.

#include <string>

#include "cnf.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "rng.hpp"

namespace hardmdp::testutil {

// The 4-variable running example: uniquely satisfied by (+,+,-,+).
inline const char* kFig1Dimacs =
    "c 4-variable example, unique solution (1,1,-1,1)\n"
    "p cnf 4 7\n"
    "1 2 3 0\n"
    "-1 2 3 0\n"
    "-1 3 4 0\n"
    "1 2 -3 0\n"
    "-1 2 -3 0\n"
    "-3 -3 -3 0\n"
    "1 1 1 0\n";

inline Formula fig1() { return parse_dimacs(kFig1Dimacs); }

inline Assignment fig1_solution() { return Assignment::from_pm_string("++-+"); }

// Tiny always-satisfied-at-root formula: root = all-negative.
inline Formula root_satisfying() { return parse_dimacs("p cnf 1 1\n-1 -1 -1 0\n"); }

// v=2 unsatisfiable formula (all four sign patterns on x1,x2).
inline Formula tiny_unsat() {
  return parse_dimacs(
      "p cnf 2 4\n"
      "1 2 2 0\n"
      "1 -2 -2 0\n"
      "-1 2 2 0\n"
      "-1 -2 -2 0\n");
}

// Uniform random 3-CNF used by property-style tests (distinct vars, random
// signs) — local twin of the generator's clause sampler so cnf tests don't
// depend on the generator module.
inline Formula random_formula_for_tests(uint32_t v, uint32_t clauses, SplitMix64& rng) {
  Formula f;
  f.v = v;
  for (uint32_t c = 0; c < clauses; ++c) {
    Clause cl{};
    for (int i = 0; i < 3; ++i) {
      uint32_t var;
      for (;;) {
        var = uint32_t(rng.below(v)) + 1;
        bool dup = false;
        for (int j = 0; j < i; ++j) dup |= cl[j].var == var;
        if (!dup || v < 3) break;
      }
      cl[i] = Literal{var, rng.coin()};
    }
    f.clauses.push_back(cl);
  }
  return f;
}

// Error-code assertion helper: runs fn, requires it to throw Error with the
// given code.
template <typename Fn>
bool throws_code(Fn&& fn, Errc want) {
  try {
    fn();
    return false;
  } catch (const Error& e) {
    return e.code() == want;
  } catch (...) {
    return false;
  }
}

}  // namespace hardmdp::testutil
