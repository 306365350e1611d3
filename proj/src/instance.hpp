#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cnf.hpp"
#include "rational.hpp"

namespace hardmdp {

enum class Mode { verification, reduction };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& s);

// Fixed parameters of one compiled MDP instance. In reduction mode the
// horizon is pinned to H = v^r; verification mode takes any caller H >= 1 so
// exact solving stays feasible. degree D is the max feature-tuple length:
// r for the 3-action compile, 2r for the 2-action compile.
struct InstanceParams {
  uint32_t v = 0;
  uint32_t r = 0;
  int k = 3;
  Mode mode = Mode::verification;
  Int H;
  Int d;           // feature dimension: sum_{j<=D} v^j
  uint32_t degree = 0;

  // Depth values are tracked in uint64; when H exceeds that range no
  // trajectory of representable length can reach the last layer anyway.
  bool horizon_fits_u64() const { return fits_u64(H); }
  bool at_horizon(uint64_t l) const { return horizon_fits_u64() && l == to_u64(H); }
};

InstanceParams derive_params(uint32_t v, uint32_t r, int k, Mode mode,
                             const std::optional<Int>& H = std::nullopt);

struct Instance {
  Formula formula;
  InstanceParams params;
};

Instance make_instance(Formula f, uint32_t r, int k, Mode mode,
                       const std::optional<Int>& H = std::nullopt);

// Exponent schedules from the hardness statements. q is an exact rational
// ("1", "3/2", "1.25" accepted at the CLI and normalized before this call);
// all ceilings are decided in exact arithmetic — irrational boundaries via
// interval refinement on log2(v), never floating point.
enum class Scenario { poly3, poly2, subexp, appendix };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& s);

// poly3:    r = ceil(8q)                                   (3-action compile)
// poly2:    r = ceil(12q)                                  (2-action compile)
// subexp:   r = ceil(sqrt(v) / log2(v)), v >= 2
// appendix: r = ceil(sqrt((16q)^(m+2) * log2(v)^m)), v >= 2 when m >= 1
uint32_t schedule_r(Scenario scenario, const Rat& q, uint32_t m, uint32_t v);

// Exact check of the two value-gap bounds that make the reduction decode:
// the root value of a satisfiable instance is at least (H/(H+v))^r >= 1/2,
// and any last-layer reward is at most (v/(H+v))^r <= v^(r-r^2).
struct BoundCheckResult {
  Rat root_lower;        // (H/(H+v))^r
  bool root_ok;          // root_lower >= 1/2
  Rat last_layer_upper;  // (v/(H+v))^r
  Rat last_layer_bound;  // v^(r - r^2)
  bool last_layer_ok;    // last_layer_upper <= last_layer_bound
};

BoundCheckResult bound_check(const InstanceParams& p);

// Self-contained instance descriptor: JSON with the canonical DIMACS inline
// plus mode/k/r/H and the experiment seed, so one file reproduces a run.
std::string descriptor_json(const Instance& inst, uint64_t seed);
struct ParsedDescriptor {
  Instance instance;
  uint64_t seed = 0;
};
ParsedDescriptor parse_descriptor(const std::string& json_text);

}  // namespace hardmdp
