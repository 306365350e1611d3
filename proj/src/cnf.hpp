#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace hardmdp {

// Variables are 1-based (DIMACS convention) throughout the library.
// A literal is a signed variable; sign=false means negated.
struct Literal {
  uint32_t var = 0;
  bool sign = true;

  int encoded() const { return sign ? int(var) : -int(var); }
  bool operator==(const Literal&) const = default;
};

// Exactly three literals; repeats are legal and used as padding.
using Clause = std::array<Literal, 3>;

// ±1 assignment over v variables, bit-packed: bit (i-1) set <=> w_i = +1.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(uint32_t v) : v_(v), words_((v + 63) / 64, 0) {}

  static Assignment all_negative(uint32_t v) { return Assignment(v); }

  uint32_t size() const { return v_; }
  bool empty() const { return v_ == 0; }

  bool is_true(uint32_t var) const {
    check_var(var);
    return (words_[(var - 1) >> 6] >> ((var - 1) & 63)) & 1;
  }
  // w_i as a ±1 integer.
  int sign(uint32_t var) const { return is_true(var) ? 1 : -1; }

  void set_true(uint32_t var, bool value) {
    check_var(var);
    uint64_t mask = uint64_t(1) << ((var - 1) & 63);
    if (value) words_[(var - 1) >> 6] |= mask;
    else words_[(var - 1) >> 6] &= ~mask;
  }

  void flip(uint32_t var) {
    check_var(var);
    words_[(var - 1) >> 6] ^= uint64_t(1) << ((var - 1) & 63);
  }

  Assignment with_flip(uint32_t var) const {
    Assignment out = *this;
    out.flip(var);
    return out;
  }

  uint32_t hamming(const Assignment& other) const;
  // <w, w'> = v - 2*hamming.
  int64_t dot(const Assignment& other) const {
    return int64_t(v_) - 2 * int64_t(hamming(other));
  }

  // Packed low word; only valid for v <= 64 (used as a DP key).
  uint64_t packed64() const {
    if (v_ > 64) fail(Errc::invalid_argument, "assignment too wide to pack into 64 bits");
    return v_ == 0 ? 0 : words_[0];
  }
  static Assignment from_packed64(uint32_t v, uint64_t bits);

  // Canonical hex form (lowercase, fixed width ceil(v/4), msb first).
  std::string hex() const;
  static Assignment from_hex(uint32_t v, const std::string& hex);

  // Human form: one '+'/'-' per variable, variable 1 first.
  std::string pm_string() const;
  static Assignment from_pm_string(const std::string& s);

  bool operator==(const Assignment&) const = default;

 private:
  void check_var(uint32_t var) const {
    if (var == 0 || var > v_) fail(Errc::invalid_argument, "variable index out of range");
  }

  uint32_t v_ = 0;
  std::vector<uint64_t> words_;
};

struct Formula {
  uint32_t v = 0;  // number of variables
  std::vector<Clause> clauses;

  uint32_t clause_count() const { return uint32_t(clauses.size()); }
  bool operator==(const Formula&) const = default;
};

bool literal_satisfied(const Literal& lit, const Assignment& w);
bool clause_satisfied(const Clause& c, const Assignment& w);
bool evaluate(const Formula& f, const Assignment& w);

// Index of the first clause not satisfied by w, or nullopt if w satisfies f.
std::optional<uint32_t> first_unsatisfied_clause(const Formula& f, const Assignment& w);

// DIMACS CNF. parse() diagnoses errors with 1-based line numbers; clauses
// must have exactly 3 literals. Comment lines ('c ...') are ignored, a '%'
// line ends the file (SATLIB convention).
Formula parse_dimacs(const std::string& text);
Formula read_dimacs_file(const std::string& path);
std::string emit_dimacs(const Formula& f);
void write_dimacs_file(const Formula& f, const std::string& path);

// Exact model count by enumeration, stopping early once the count exceeds
// `limit`. Enforced enumeration cap: f.v <= max_vars (default 24).
uint64_t count_solutions(const Formula& f, uint64_t limit, uint32_t max_vars = 24);

// The unique satisfying assignment if the count is exactly 1, nullopt if
// unsatisfiable; errors if the formula has two or more solutions (the
// construction's promise) or exceeds the enumeration cap.
std::optional<Assignment> unique_solution(const Formula& f, uint32_t max_vars = 24);

}  // namespace hardmdp
