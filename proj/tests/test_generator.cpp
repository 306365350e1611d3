#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generator.hpp"
#include "helpers.hpp"

using namespace hardmdp;
using namespace hardmdp::testutil;

TEST_CASE("random formulas are well-formed 3-CNF") {
  SplitMix64 rng(8);
  for (uint32_t v : {3u, 5u, 9u}) {
    Formula f = random_formula(v, 4 * v, rng);
    CHECK(f.v == v);
    CHECK(f.clause_count() == 4 * v);
    for (const Clause& c : f.clauses) {
      for (const Literal& lit : c) {
        CHECK(lit.var >= 1);
        CHECK(lit.var <= v);
      }
      // v >= 3 draws distinct variables per clause
      CHECK(c[0].var != c[1].var);
      CHECK(c[0].var != c[2].var);
      CHECK(c[1].var != c[2].var);
    }
  }

  // v < 3 cannot have three distinct variables; still well-formed
  Formula narrow = random_formula(2, 6, rng);
  for (const Clause& c : narrow.clauses)
    for (const Literal& lit : c) CHECK(lit.var <= 2);
}

TEST_CASE("unique-SAT generation is certified and deterministic") {
  for (uint32_t v : {4u, 6u, 10u}) {
    CAPTURE(v);
    GeneratedFormula a = random_unique_sat(v, 31);
    CHECK(a.solutions == 1);
    CHECK(a.formula.v == v);
    CHECK(count_solutions(a.formula, 2) == 1);  // re-certify here
    CHECK(a.attempts >= 1);

    GeneratedFormula b = random_unique_sat(v, 31);
    CHECK(a.formula == b.formula);
    CHECK(a.attempts == b.attempts);

    GeneratedFormula c = random_unique_sat(v, 32);
    CHECK(!(c.formula == a.formula));
  }
}

TEST_CASE("unsat generation is certified and deterministic") {
  for (uint32_t v : {4u, 6u, 10u}) {
    CAPTURE(v);
    GeneratedFormula a = random_unsat(v, 7);
    CHECK(a.solutions == 0);
    CHECK(count_solutions(a.formula, 1) == 0);
    CHECK(a.formula == random_unsat(v, 7).formula);
  }
}

TEST_CASE("count-ranged generation hits the requested window") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    GeneratedFormula g = random_with_count(8, seed, 2, 8);
    CAPTURE(seed);
    CHECK(g.solutions >= 2);
    CHECK(g.solutions <= 8);
    CHECK(count_solutions(g.formula, 9) == g.solutions);
  }
  // exact two-solution draws exist too (isolation frequency tests lean on these)
  GeneratedFormula two = random_with_count(6, 11, 2, 2);
  CHECK(two.solutions == 2);
}

TEST_CASE("generation failures surface as errors, not bad instances") {
  // a 1-variable 3-CNF has 2 assignments; asking for 5..9 solutions is hopeless
  CHECK(throws_code([] { random_with_count(1, 1, 5, 9, 10); }, Errc::precondition));
  CHECK(throws_code([] { random_unique_sat(0, 1); }, Errc::invalid_argument));
  CHECK(throws_code([] { random_with_count(4, 1, 3, 2); }, Errc::invalid_argument));
}
