#pragma once

#include <map>
#include <set>
#include <vector>

#include "mdp.hpp"

namespace hardmdp {

// Feature coordinates are ordered index tuples over variables 1..v, length
// 0..D; the empty tuple is the constant coordinate. The optimal value is
// linear in theta over this basis: V*(s) = <theta, psi(s)>.
using Tuple = std::vector<uint32_t>;

std::string tuple_str(const Tuple& t);  // "" / "3" / "1,2" — report form

// Sparse rational vector over the tuple basis.
class FeatureVector {
 public:
  void add(const Tuple& t, const Rat& value);
  const std::map<Tuple, Rat>& entries() const { return entries_; }
  size_t nonzero_count() const { return entries_.size(); }
  Rat at(const Tuple& t) const;
  void drop_zeros();

  bool operator==(const FeatureVector&) const = default;

 private:
  std::map<Tuple, Rat> entries_;
};

// theta depends only on the hidden solution: theta_S = prod_{i in S} w*_i,
// identically zero when the formula is unsatisfiable. Never materialized at
// full dimension unless asked (tests); sign_at answers any tuple in O(|S|).
struct ThetaVector {
  bool satisfiable = false;
  Assignment wstar;  // valid iff satisfiable
  uint32_t v = 0;
  uint32_t degree = 0;

  int sign_at(const Tuple& t) const;
  Rat dot(const FeatureVector& psi) const;
  // All sum_{j<=degree} v^j coordinates; guarded by an entry cap.
  std::map<Tuple, int> materialize(uint64_t cap_entries = 1u << 21) const;
};

// Validates that wstar (when present) satisfies f.
ThetaVector make_theta(const Formula& f, const std::optional<Assignment>& wstar,
                       const InstanceParams& params);

// psi(s): the value g rewritten as a polynomial in w* and expanded over
// ordered tuples. The expansion convolves r identical linear factors; each
// factor is a sum of atoms (constant / single index / pending pair), and a
// sequence of atom picks contributes the product of its coefficients at the
// concatenation of its index tuples. For normal states this lands the
// pinned coefficients C(r,j) c^(r-j) b^j prod w_t on every ordered tuple.
// psi of the terminal sink is the zero vector. Entry count guarded by cap.
FeatureVector features_psi(const State& s, const InstanceParams& params,
                           uint64_t cap_entries = 1u << 21);

// psi(s, a) := psi(P(s, a)) — the next-state features, the form planners
// regress on. Errors as transition does.
FeatureVector features_psi_sa(const State& s, int action, const CnfMdp& mdp,
                              uint64_t cap_entries = 1u << 21);

// Exact <theta, psi(s)> without materializing psi: streams the same ordered
// atom-sequence expansion, folding theta's ±1 signs into each term. Runs on
// int64 numerators over the fixed denominator (2(H+v))^r when an a-priori
// bound fits in 62 bits, arbitrary precision otherwise. A unit test pins
// this route equal to theta.dot(features_psi(s)).
Rat psi_dot_theta(const State& s, const InstanceParams& params, const ThetaVector& theta);

// Distinct tuples the expansion touches across a verification sweep: every
// tuple of length <= r (normal states use all of them), plus for the
// 2-action compile the longer concatenation tuples contributed by each
// pending pair actually reached. This is the d_used figure in linearity
// reports; it never exceeds d.
Int count_touched_tuples(uint32_t v, uint32_t r, int k,
                         const std::set<std::pair<uint32_t, uint32_t>>& pendings_seen,
                         uint64_t cap_entries = 1u << 21);

std::string features_json(const FeatureVector& fv);

}  // namespace hardmdp
