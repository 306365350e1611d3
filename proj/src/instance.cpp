#include "instance.hpp"

#include <json.hpp>

namespace hardmdp {

const char* mode_name(Mode m) {
  return m == Mode::reduction ? "reduction" : "verification";
}

Mode mode_from_name(const std::string& s) {
  if (s == "reduction") return Mode::reduction;
  if (s == "verification") return Mode::verification;
  fail(Errc::invalid_argument, "unknown mode '" + s + "' (want reduction|verification)");
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::poly3: return "poly3";
    case Scenario::poly2: return "poly2";
    case Scenario::subexp: return "subexp";
    case Scenario::appendix: return "appendix";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& s) {
  if (s == "poly3") return Scenario::poly3;
  if (s == "poly2") return Scenario::poly2;
  if (s == "subexp") return Scenario::subexp;
  if (s == "appendix") return Scenario::appendix;
  fail(Errc::invalid_argument,
       "unknown scenario '" + s + "' (want poly3|poly2|subexp|appendix)");
}

InstanceParams derive_params(uint32_t v, uint32_t r, int k, Mode mode,
                             const std::optional<Int>& H) {
  if (v < 1) fail(Errc::invalid_argument, "instance needs at least one variable");
  if (r < 1) fail(Errc::invalid_argument, "exponent r must be >= 1");
  if (k != 2 && k != 3) fail(Errc::invalid_argument, "action count k must be 2 or 3");

  InstanceParams p;
  p.v = v;
  p.r = r;
  p.k = k;
  p.mode = mode;
  if (mode == Mode::reduction) {
    if (H) fail(Errc::invalid_argument, "reduction mode fixes H = v^r; do not supply H");
    p.H = ipow(Int(v), r);
  } else {
    if (!H) fail(Errc::invalid_argument, "verification mode requires an explicit horizon H");
    if (*H < 1) fail(Errc::invalid_argument, "horizon H must be >= 1");
    p.H = *H;
  }
  p.degree = (k == 2) ? 2 * r : r;
  Int d = 0;
  for (uint32_t j = 0; j <= p.degree; ++j) d += ipow(Int(v), j);
  p.d = d;
  return p;
}

Instance make_instance(Formula f, uint32_t r, int k, Mode mode, const std::optional<Int>& H) {
  InstanceParams p = derive_params(f.v, r, k, mode, H);
  return Instance{std::move(f), std::move(p)};
}

namespace {

Int ceil_rat(const Rat& x) {
  Int out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return out;
}

// Exact log2(v) for powers of two, nullopt otherwise.
std::optional<unsigned long> exact_log2(uint32_t v) {
  Int n(v);
  if (mpz_popcount(n.get_mpz_t()) == 1) return mpz_sizeinbase(n.get_mpz_t(), 2) - 1;
  return std::nullopt;
}

// Rational bracket lo <= log2(v) <= hi with denominator `prec`:
// 2^p <= v^prec < 2^(p+1) gives log2(v) in [p/prec, (p+1)/prec]. For
// non-powers of two both inequalities are strict, so widening prec
// eventually separates any candidate ceiling from the true value.
void log2_bracket(uint32_t v, unsigned long prec, Rat& lo, Rat& hi) {
  Int power = ipow(Int(v), prec);
  unsigned long p = mpz_sizeinbase(power.get_mpz_t(), 2) - 1;
  lo = make_rat(Int(p), Int(prec));
  hi = make_rat(Int(p + 1), Int(prec));
}

// Smallest integer n with n^2 >= (16q)^(m+2) * log2(v)^m. The m = 0 and
// power-of-two cases are exact; otherwise bracket log2(v) until both ends
// of the bracket agree on the ceiling. Exact ties are impossible for
// non-powers of two (log2 v is transcendental there), so this terminates.
Int ceil_sqrt_with_log(const Rat& base, uint32_t m, uint32_t v) {
  if (m == 0) return ceil_sqrt(base);
  if (v < 2) fail(Errc::invalid_argument, "log2 schedule needs v >= 2");
  if (auto lg = exact_log2(v)) {
    Rat x = base * rpow(Rat(Int(*lg)), m);
    return ceil_sqrt(x);
  }
  for (unsigned long prec = 32; prec <= (1ul << 20); prec *= 2) {
    Rat lo, hi;
    log2_bracket(v, prec, lo, hi);
    Rat xlo = base * rpow(lo, m);
    Rat xhi = base * rpow(hi, m);
    Int a = ceil_sqrt(xlo), b = ceil_sqrt(xhi);
    if (a == b) return a;
  }
  fail(Errc::internal, "log2 bracket did not converge");
}

// Smallest integer n >= 1 with n >= sqrt(v)/log2(v), i.e. n^2*log2(v)^2 >= v.
Int subexp_exponent(uint32_t v) {
  if (v < 2) fail(Errc::invalid_argument, "subexp schedule needs v >= 2");
  if (auto lg = exact_log2(v)) {
    Rat x = make_rat(Int(v), Int(*lg) * Int(*lg));
    Int n = ceil_sqrt(x);
    return n < 1 ? Int(1) : n;
  }
  for (unsigned long prec = 32; prec <= (1ul << 20); prec *= 2) {
    Rat lo, hi;
    log2_bracket(v, prec, lo, hi);
    Rat xa = make_rat(Int(v), Int(1));
    Rat x_hi_end = xa / (lo * lo);  // log2 underestimate -> target overestimate
    Rat x_lo_end = xa / (hi * hi);
    Rat tmp1 = x_hi_end, tmp2 = x_lo_end;
    Int a = ceil_sqrt(tmp2), b = ceil_sqrt(tmp1);
    if (a == b) return a < 1 ? Int(1) : a;
  }
  fail(Errc::internal, "log2 bracket did not converge");
}

}  // namespace

uint32_t schedule_r(Scenario scenario, const Rat& q, uint32_t m, uint32_t v) {
  if (q <= 0) fail(Errc::invalid_argument, "hardness exponent q must be positive");
  Int r;
  switch (scenario) {
    case Scenario::poly3: {
      Rat x = Rat(8) * q;
      r = ceil_rat(x);
      break;
    }
    case Scenario::poly2: {
      Rat x = Rat(12) * q;
      r = ceil_rat(x);
      break;
    }
    case Scenario::subexp:
      r = subexp_exponent(v);
      break;
    case Scenario::appendix: {
      Rat sixteen_q = Rat(16) * q;
      Rat base = rpow(sixteen_q, m + 2);
      r = ceil_sqrt_with_log(base, m, v);
      break;
    }
  }
  if (r < 1) r = 1;
  if (!fits_u64(r) || to_u64(r) > 0xFFFFFFFFull)
    fail(Errc::invalid_argument, "scheduled exponent does not fit in 32 bits");
  return uint32_t(to_u64(r));
}

BoundCheckResult bound_check(const InstanceParams& p) {
  if (p.mode != Mode::reduction)
    fail(Errc::invalid_argument, "bound_check applies to reduction-mode instances");
  BoundCheckResult out;
  Int hv = p.H + p.v;
  out.root_lower = rpow(make_rat(p.H, hv), p.r);
  out.root_ok = out.root_lower >= make_rat(Int(1), Int(2));
  out.last_layer_upper = rpow(make_rat(Int(p.v), hv), p.r);
  // v^(r - r^2) = 1 / v^(r^2 - r); r >= 1 so the exponent is >= 0.
  unsigned long e = (unsigned long)(p.r) * p.r - p.r;
  out.last_layer_bound = make_rat(Int(1), ipow(Int(p.v), e));
  out.last_layer_ok = out.last_layer_upper <= out.last_layer_bound;
  return out;
}

std::string descriptor_json(const Instance& inst, uint64_t seed) {
  nlohmann::ordered_json j;
  j["schema"] = "hardmdp.instance/1";
  j["mode"] = mode_name(inst.params.mode);
  j["k"] = inst.params.k;
  j["v"] = inst.params.v;
  j["r"] = inst.params.r;
  j["H"] = inst.params.H.get_str();
  j["d"] = inst.params.d.get_str();
  j["degree"] = inst.params.degree;
  j["seed"] = seed;
  j["dimacs"] = emit_dimacs(inst.formula);
  return j.dump(2) + "\n";
}

ParsedDescriptor parse_descriptor(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse, std::string("descriptor is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "hardmdp.instance/1")
      fail(Errc::parse, "descriptor schema mismatch");
    Formula f = parse_dimacs(j.at("dimacs").get<std::string>());
    Mode mode = mode_from_name(j.at("mode").get<std::string>());
    uint32_t r = j.at("r").get<uint32_t>();
    int k = j.at("k").get<int>();
    std::optional<Int> H;
    if (mode == Mode::verification) H = Int(j.at("H").get<std::string>());
    Instance inst = make_instance(std::move(f), r, k, mode, H);
    if (j.at("v").get<uint32_t>() != inst.params.v)
      fail(Errc::parse, "descriptor v does not match the embedded formula");
    if (Int(j.at("H").get<std::string>()) != inst.params.H)
      fail(Errc::parse, "descriptor H is inconsistent with mode/v/r");
    if (Int(j.at("d").get<std::string>()) != inst.params.d)
      fail(Errc::parse, "descriptor d is inconsistent with v/degree");
    ParsedDescriptor out{std::move(inst), j.at("seed").get<uint64_t>()};
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse, std::string("descriptor missing or mistyped field: ") + e.what());
  }
}

}  // namespace hardmdp
