#include "features.hpp"

#include <json.hpp>

namespace hardmdp {

std::string tuple_str(const Tuple& t) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(t[i]);
  }
  return out;
}

void FeatureVector::add(const Tuple& t, const Rat& value) {
  auto it = entries_.find(t);
  if (it == entries_.end()) {
    entries_.emplace(t, value);
  } else {
    Rat sum = it->second + value;
    it->second = sum;
  }
}

Rat FeatureVector::at(const Tuple& t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? Rat(0) : it->second;
}

void FeatureVector::drop_zeros() {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second == 0) it = entries_.erase(it);
    else ++it;
  }
}

int ThetaVector::sign_at(const Tuple& t) const {
  if (!satisfiable) return 0;
  int sign = 1;
  for (uint32_t var : t) sign *= wstar.sign(var);
  return sign;
}

Rat ThetaVector::dot(const FeatureVector& psi) const {
  Rat total(0);
  for (const auto& [tuple, value] : psi.entries()) {
    int s = sign_at(tuple);
    if (s == 1) { Rat t = total + value; total = t; }
    else if (s == -1) { Rat t = total - value; total = t; }
  }
  return total;
}

std::map<Tuple, int> ThetaVector::materialize(uint64_t cap_entries) const {
  Int count = 0;
  for (uint32_t j = 0; j <= degree; ++j) count += ipow(Int(v), j);
  if (count > Int(cap_entries))
    fail(Errc::cap, "theta materialization of " + count.get_str() + " entries exceeds cap");
  std::map<Tuple, int> out;
  Tuple t;
  // Depth-first enumeration of all tuples up to `degree`.
  auto emit = [&](auto&& self) -> void {
    out[t] = sign_at(t);
    if (t.size() == degree) return;
    for (uint32_t var = 1; var <= v; ++var) {
      t.push_back(var);
      self(self);
      t.pop_back();
    }
  };
  emit(emit);
  return out;
}

ThetaVector make_theta(const Formula& f, const std::optional<Assignment>& wstar,
                       const InstanceParams& params) {
  ThetaVector th;
  th.v = params.v;
  th.degree = params.degree;
  if (wstar) {
    if (wstar->size() != f.v) fail(Errc::invalid_argument, "w* width does not match formula");
    if (!evaluate(f, *wstar))
      fail(Errc::invalid_argument, "supplied w* does not satisfy the formula");
    th.satisfiable = true;
    th.wstar = *wstar;
  }
  return th;
}

namespace {

// One linear factor of the value polynomial, as atoms with integer
// numerators over the shared denominator 2(H+v). Normal state at depth l:
//   (2H+v-2l) * ()  +  sum_t w_t * (t)
// Intermediate with pending (i1,i2) folds the agreement indicator in:
//   (2H+v-2l-1) * ()  +  sum_{t not pending} w_t * (t)  -  w_i1 w_i2 * (i1,i2)
// and for a degenerate pending pair (i,i) the i-th single survives with a
// flipped sign (-w_i) next to the constant pair atom (i,i) with -1.
struct Atom {
  Tuple idx;
  Int num;
};

struct FactorExpansion {
  std::vector<Atom> atoms;
  Int den;  // 2(H+v)
};

FactorExpansion base_atoms(const State& s, const InstanceParams& p) {
  FactorExpansion fx;
  Int hv = p.H + p.v;
  fx.den = 2 * hv;
  Int c_num = 2 * p.H + p.v - 2 * Int(s.depth);

  if (s.kind == StateKind::normal) {
    fx.atoms.push_back({Tuple{}, c_num});
    for (uint32_t t = 1; t <= p.v; ++t)
      fx.atoms.push_back({Tuple{t}, Int(s.w.sign(t))});
    return fx;
  }

  // Intermediate.
  fx.atoms.push_back({Tuple{}, c_num - 1});
  if (s.pend1 != s.pend2) {
    for (uint32_t t = 1; t <= p.v; ++t)
      if (t != s.pend1 && t != s.pend2)
        fx.atoms.push_back({Tuple{t}, Int(s.w.sign(t))});
    fx.atoms.push_back({Tuple{s.pend1, s.pend2}, Int(-s.w.sign(s.pend1) * s.w.sign(s.pend2))});
  } else {
    for (uint32_t t = 1; t <= p.v; ++t)
      if (t != s.pend1) fx.atoms.push_back({Tuple{t}, Int(s.w.sign(t))});
    fx.atoms.push_back({Tuple{s.pend1}, Int(-s.w.sign(s.pend1))});
    fx.atoms.push_back({Tuple{s.pend1, s.pend1}, Int(-1)});
  }
  return fx;
}

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

FeatureVector features_psi(const State& s, const InstanceParams& params, uint64_t cap_entries) {
  FeatureVector fv;
  if (s.is_terminal()) return fv;  // zero vector

  FactorExpansion fx = base_atoms(s, params);
  std::map<Tuple, Rat> acc;
  acc[Tuple{}] = Rat(1);
  for (uint32_t round = 0; round < params.r; ++round) {
    std::map<Tuple, Rat> next;
    for (const auto& [tuple, value] : acc) {
      for (const Atom& atom : fx.atoms) {
        Rat coef = make_rat(atom.num, fx.den);
        Rat term = value * coef;
        Tuple key = concat(tuple, atom.idx);
        auto it = next.find(key);
        if (it == next.end()) {
          if (next.size() >= cap_entries)
            fail(Errc::cap, "feature expansion exceeds entry cap");
          next.emplace(std::move(key), term);
        } else {
          Rat sum = it->second + term;
          it->second = sum;
        }
      }
    }
    acc = std::move(next);
  }
  for (auto& [tuple, value] : acc) fv.add(tuple, value);
  fv.drop_zeros();
  return fv;
}

FeatureVector features_psi_sa(const State& s, int action, const CnfMdp& mdp,
                              uint64_t cap_entries) {
  return features_psi(mdp.transition(s, action), mdp.params(), cap_entries);
}

Rat psi_dot_theta(const State& s, const InstanceParams& params, const ThetaVector& theta) {
  if (s.is_terminal()) return Rat(0);
  if (!theta.satisfiable) return Rat(0);
  if (theta.v != params.v) fail(Errc::invalid_argument, "theta width does not match instance");

  FactorExpansion fx = base_atoms(s, params);

  // theta is multiplicative over concatenation, so every expansion term's
  // psi_S * theta_S is the product of per-atom signed numerators. Summing
  // those products over all ordered atom sequences is exactly <theta, psi>.
  std::vector<Int> folded;
  Int abs_sum = 0;
  folded.reserve(fx.atoms.size());
  for (const Atom& atom : fx.atoms) {
    Int f = atom.num * theta.sign_at(atom.idx);
    abs_sum += abs(f);
    folded.push_back(f);
  }

  Int seq_count = ipow(Int(fx.atoms.size()), params.r);
  if (seq_count > Int(1000000000))
    fail(Errc::cap, "streamed feature evaluation would enumerate " + seq_count.get_str() +
                        " terms; over cap");

  Int bound = ipow(abs_sum, params.r);
  Int total;
  if (bound < (Int(1) << 62)) {
    // Fast path: the whole enumeration fits in int64 arithmetic.
    std::vector<int64_t> f64;
    f64.reserve(folded.size());
    for (const Int& f : folded) f64.push_back(f.get_si());
    int64_t sum = 0;
    auto rec = [&](auto&& self, uint32_t slot, int64_t prod) -> void {
      if (slot == params.r) { sum += prod; return; }
      for (int64_t f : f64) self(self, slot + 1, prod * f);
    };
    rec(rec, 0, 1);
    total = Int(sum);
  } else {
    Int sum = 0;
    auto rec = [&](auto&& self, uint32_t slot, const Int& prod) -> void {
      if (slot == params.r) { sum += prod; return; }
      for (const Int& f : folded) {
        Int next = prod * f;
        self(self, slot + 1, next);
      }
    };
    rec(rec, 0, Int(1));
    total = sum;
  }
  return make_rat(total, ipow(fx.den, params.r));
}

Int count_touched_tuples(uint32_t v, uint32_t r, int k,
                         const std::set<std::pair<uint32_t, uint32_t>>& pendings_seen,
                         uint64_t cap_entries) {
  // Normal states put nonzero weight on every ordered tuple of length <= r
  // (the constant and single-index coefficients can never vanish), so that
  // whole block counts arithmetically.
  Int base = 0;
  for (uint32_t j = 0; j <= r; ++j) base += ipow(Int(v), j);
  if (k == 3 || pendings_seen.empty()) return base;

  // Intermediates add concatenation tuples longer than r (their shorter
  // tuples all live in the base block already). Enumerate per pending pair.
  std::set<Tuple> longer;
  for (auto [i1, i2] : pendings_seen) {
    std::set<Tuple> cur;
    cur.insert(Tuple{});
    for (uint32_t round = 0; round < r; ++round) {
      std::set<Tuple> next;
      auto push = [&](Tuple t) {
        if (next.size() >= cap_entries) fail(Errc::cap, "tuple support enumeration exceeds cap");
        next.insert(std::move(t));
      };
      for (const Tuple& t : cur) {
        push(t);  // constant atom
        for (uint32_t x = 1; x <= v; ++x) {
          if (i1 != i2 && (x == i1 || x == i2)) continue;
          push(concat(t, Tuple{x}));
        }
        push(concat(t, Tuple{i1, i2}));
      }
      cur = std::move(next);
    }
    for (const Tuple& t : cur)
      if (t.size() > r) longer.insert(t);
    if (longer.size() >= cap_entries) fail(Errc::cap, "tuple support enumeration exceeds cap");
  }
  return base + Int(uint64_t(longer.size()));
}

std::string features_json(const FeatureVector& fv) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [tuple, value] : fv.entries()) j[tuple_str(tuple)] = rat_str(value);
  return j.dump();
}

}  // namespace hardmdp
