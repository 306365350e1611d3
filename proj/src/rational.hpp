#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "error.hpp"

namespace hardmdp {

// Exact arithmetic everywhere a value, bound or schedule is compared: mpz for
// counts/horizons, mpq for rewards and value functions. Careful with gmpxx
// expression templates: always materialize into Int/Rat before calling methods.
using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline Rat rpow(const Rat& base, unsigned long e) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  // base was canonical, so num^e / den^e already is.
  return out;
}

// num/den from integer parts, canonicalized.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) fail(Errc::invalid_argument, "rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Canonical text form used in reports and value-table exports: "num/den",
// denominator always present ("0/1", "17/20").
inline std::string rat_str(const Rat& q) {
  Int n = q.get_num();
  Int d = q.get_den();
  return n.get_str() + "/" + d.get_str();
}

inline Rat rat_parse(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) fail(Errc::parse, "bad rational: '" + s + "'");
  q.canonicalize();
  return q;
}

inline bool fits_u64(const Int& x) { return x >= 0 && x.fits_ulong_p(); }

inline uint64_t to_u64(const Int& x) {
  if (!fits_u64(x)) fail(Errc::invalid_argument, "integer out of uint64 range: " + x.get_str());
  return x.get_ui();
}

// Smallest n >= 0 with n*n >= x (x >= 0).
inline Int ceil_sqrt(const Rat& x) {
  if (x < 0) fail(Errc::invalid_argument, "ceil_sqrt of negative value");
  if (x == 0) return 0;
  // n*n >= num/den  <=>  n*n*den >= num. Start from floor(sqrt(ceil(x))) - 1.
  Int num = x.get_num(), den = x.get_den();
  Int approx_num = num / den + 1;
  Int n;
  mpz_sqrt(n.get_mpz_t(), approx_num.get_mpz_t());
  while (n > 0) {
    Int m = n - 1;
    Int sq = m * m * den;
    if (sq >= num) n = m; else break;
  }
  while (true) {
    Int sq = n * n * den;
    if (sq >= num) return n;
    n += 1;
  }
}

}  // namespace hardmdp
