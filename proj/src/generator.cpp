#include "generator.hpp"

#include "error.hpp"

namespace hardmdp {

namespace {

// ~4.26 clauses per variable, the usual hard-region ratio.
uint32_t default_clause_count(uint32_t v) {
  uint32_t m = (426u * v + 50u) / 100u;
  return m == 0 ? 1u : m;
}

Clause random_clause(uint32_t v, SplitMix64& rng) {
  std::array<uint32_t, 3> vars{};
  if (v >= 3) {
    for (int i = 0; i < 3; ++i) {
      for (;;) {
        uint32_t cand = static_cast<uint32_t>(rng.below(v)) + 1;
        bool dup = false;
        for (int j = 0; j < i; ++j) dup |= (vars[j] == cand);
        if (!dup) { vars[i] = cand; break; }
      }
    }
  } else {
    for (int i = 0; i < 3; ++i) vars[i] = static_cast<uint32_t>(rng.below(v)) + 1;
  }
  Clause c{};
  for (int i = 0; i < 3; ++i) c[i] = Literal{vars[i], rng.coin()};
  return c;
}

}  // namespace

Formula random_formula(uint32_t v, uint32_t clauses, SplitMix64& rng) {
  if (v == 0) fail(Errc::invalid_argument, "random_formula: v must be >= 1");
  Formula f;
  f.v = v;
  f.clauses.reserve(clauses);
  for (uint32_t i = 0; i < clauses; ++i) f.clauses.push_back(random_clause(v, rng));
  return f;
}

GeneratedFormula random_unique_sat(uint32_t v, uint64_t seed, uint32_t max_attempts) {
  const uint32_t m = default_clause_count(v);
  for (uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    SplitMix64 rng(SplitMix64::substream(seed, attempt));
    Formula f = random_formula(v, m, rng);
    uint64_t count = count_solutions(f, 1);
    if (count == 0) continue;
    // Too many solutions: append clauses that keep at least one alive.
    uint32_t added = 0;
    while (count > 1 && added < 8 * v + 8) {
      bool extended = false;
      for (int tries = 0; tries < 64; ++tries) {
        Formula f2 = f;
        f2.clauses.push_back(random_clause(v, rng));
        uint64_t c2 = count_solutions(f2, 1);
        if (c2 >= 1) {
          f = std::move(f2);
          count = c2;
          ++added;
          extended = true;
          break;
        }
      }
      if (!extended) break;
    }
    if (count == 1) return GeneratedFormula{std::move(f), attempt + 1, 1};
  }
  fail(Errc::precondition, "random_unique_sat: no unique-solution formula within attempt limit");
}

GeneratedFormula random_unsat(uint32_t v, uint64_t seed, uint32_t max_attempts) {
  const uint32_t m = default_clause_count(v);
  for (uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    SplitMix64 rng(SplitMix64::substream(seed, attempt));
    Formula f = random_formula(v, m, rng);
    if (count_solutions(f, 1) == 0) return GeneratedFormula{std::move(f), attempt + 1, 0};
  }
  fail(Errc::precondition, "random_unsat: no unsatisfiable formula within attempt limit");
}

GeneratedFormula random_with_count(uint32_t v, uint64_t seed, uint64_t lo, uint64_t hi,
                                   uint32_t max_attempts) {
  if (lo > hi) fail(Errc::invalid_argument, "random_with_count: lo > hi");
  const uint32_t m = default_clause_count(v);
  for (uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    SplitMix64 rng(SplitMix64::substream(seed, attempt));
    Formula f = random_formula(v, m, rng);
    uint64_t count = count_solutions(f, hi);
    if (count >= lo && count <= hi) return GeneratedFormula{std::move(f), attempt + 1, count};
  }
  fail(Errc::precondition, "random_with_count: no formula in the requested range within attempt limit");
}

}  // namespace hardmdp
