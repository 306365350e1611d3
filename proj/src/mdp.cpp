#include "mdp.hpp"

#include <cassert>

namespace hardmdp {

std::string state_string(const State& s) {
  switch (s.kind) {
    case StateKind::terminal:
      return "T";
    case StateKind::normal:
      return "N:" + s.w.hex() + ":" + std::to_string(s.depth);
    case StateKind::intermediate:
      return "I:" + s.w.hex() + ":" + std::to_string(s.depth) + ":" + std::to_string(s.pend1) +
             ":" + std::to_string(s.pend2);
  }
  fail(Errc::internal, "unreachable state kind");
}

namespace {

std::vector<std::string> split_fields(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
}

uint64_t parse_u64_field(const std::string& s, const char* what) {
  if (s.empty()) fail(Errc::state, std::string("empty ") + what + " in state string");
  uint64_t value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') fail(Errc::state, std::string("bad ") + what + " in state string");
    uint64_t digit = uint64_t(c - '0');
    if (value > (UINT64_MAX - digit) / 10)
      fail(Errc::state, std::string(what) + " overflows in state string");
    value = value * 10 + digit;
  }
  return value;
}

}  // namespace

State parse_state(const std::string& text, uint32_t v) {
  if (text == "T") return State::terminal();
  auto fields = split_fields(text);
  if (fields.empty()) fail(Errc::state, "empty state string");
  if (fields[0] == "N") {
    if (fields.size() != 3) fail(Errc::state, "normal state wants N:<hex>:<depth>");
    Assignment w = Assignment::from_hex(v, fields[1]);
    return State::normal(std::move(w), parse_u64_field(fields[2], "depth"));
  }
  if (fields[0] == "I") {
    if (fields.size() != 5) fail(Errc::state, "intermediate state wants I:<hex>:<depth>:<i1>:<i2>");
    Assignment w = Assignment::from_hex(v, fields[1]);
    uint64_t depth = parse_u64_field(fields[2], "depth");
    uint64_t i1 = parse_u64_field(fields[3], "pending index");
    uint64_t i2 = parse_u64_field(fields[4], "pending index");
    if (i1 == 0 || i1 > v || i2 == 0 || i2 > v)
      fail(Errc::state, "pending variable out of range in state string");
    return State::intermediate(std::move(w), depth, uint32_t(i1), uint32_t(i2));
  }
  fail(Errc::state, "unknown state tag '" + fields[0] + "'");
}

CnfMdp::CnfMdp(const Formula& f, const InstanceParams& params) : f_(&f), params_(params) {
  if (f.v != params.v)
    fail(Errc::invalid_argument, "formula and instance parameters disagree on v");
}

State CnfMdp::root() const {
  return State::normal(Assignment::all_negative(params_.v), 0);
}

bool CnfMdp::is_rewarding(const State& s) const {
  if (s.kind != StateKind::normal) return false;
  return is_satisfying(s.w) || params_.at_horizon(s.depth);
}

std::optional<std::array<uint32_t, 3>> CnfMdp::branch_vars(const Assignment& w) const {
  auto idx = first_unsatisfied_clause(*f_, w);
  if (!idx) return std::nullopt;
  const Clause& c = f_->clauses[*idx];
  return std::array<uint32_t, 3>{c[0].var, c[1].var, c[2].var};
}

void CnfMdp::validate_state(const State& s) const {
  switch (s.kind) {
    case StateKind::terminal:
      return;
    case StateKind::normal: {
      if (s.w.size() != params_.v) fail(Errc::state, "state assignment width mismatch");
      if (params_.horizon_fits_u64() && s.depth > to_u64(params_.H))
        fail(Errc::state, "state depth exceeds horizon");
      return;
    }
    case StateKind::intermediate: {
      if (params_.k != 2) fail(Errc::state, "intermediate states exist only in the 2-action compile");
      if (s.w.size() != params_.v) fail(Errc::state, "state assignment width mismatch");
      if (params_.horizon_fits_u64() && s.depth >= to_u64(params_.H))
        fail(Errc::state, "intermediate state depth must be below the horizon");
      auto vars = branch_vars(s.w);
      if (!vars) fail(Errc::state, "intermediate state over a satisfying assignment");
      if ((*vars)[0] != s.pend1 || (*vars)[1] != s.pend2)
        fail(Errc::state, "intermediate pending pair does not match the first unsatisfied clause");
      return;
    }
  }
}

State CnfMdp::transition(const State& s, int action) const {
  validate_state(s);
  if (s.is_terminal()) fail(Errc::state, "terminal state has no outgoing transitions");
  if (action < 1 || action > params_.k)
    fail(Errc::invalid_argument, "action " + std::to_string(action) + " out of range 1.." +
                                     std::to_string(params_.k));

  if (s.kind == StateKind::intermediate) {
    uint32_t var = action == 1 ? s.pend1 : s.pend2;
    return State::normal(s.w.with_flip(var), s.depth + 1);
  }

  // Normal state: rewarding states exit to the sink on every action.
  if (is_rewarding(s)) return State::terminal();
  auto vars = branch_vars(s.w);
  assert(vars);  // non-rewarding normal states are unsatisfying below the horizon

  if (params_.k == 3) {
    uint32_t var = (*vars)[size_t(action - 1)];
    return State::normal(s.w.with_flip(var), s.depth + 1);
  }
  // 2-action compile: action 1 handles the clause's last variable directly,
  // action 2 defers the first-vs-second choice to an intermediate state.
  if (action == 1) return State::normal(s.w.with_flip((*vars)[2]), s.depth + 1);
  return State::intermediate(s.w, s.depth, (*vars)[0], (*vars)[1]);
}

Rat CnfMdp::g_reward(const Int& l, uint32_t dist) const {
  if (l < 0 || l > params_.H) fail(Errc::invalid_argument, "g: depth out of [0, H]");
  if (dist > params_.v) fail(Errc::invalid_argument, "g: distance exceeds v");
  Int hv = params_.H + params_.v;
  Int num = hv - l - dist;
  return rpow(make_rat(num, hv), params_.r);
}

Rat CnfMdp::optimal_value(const State& s, const std::optional<Assignment>& wstar) const {
  validate_state(s);
  if (s.is_terminal()) return Rat(0);
  if (!wstar) return Rat(0);  // unsatisfiable: no state ever pays
  if (wstar->size() != params_.v)
    fail(Errc::invalid_argument, "w* width does not match the instance");

  uint32_t dist = s.w.hamming(*wstar);
  Int numerator = Int(s.depth) + dist;
  if (s.kind == StateKind::intermediate) {
    // Entering the detour costs the extra level unless both pending bits
    // already agree with w*; indicator via 1{a=b} = (1+ab)/2 on ±1 values.
    bool both = s.w.is_true(s.pend1) == wstar->is_true(s.pend1) &&
                s.w.is_true(s.pend2) == wstar->is_true(s.pend2);
    numerator += both ? 2 : 0;
  }
  Int hv = params_.H + params_.v;
  assert(numerator <= hv);
  return rpow(make_rat(hv - numerator, hv), params_.r);
}

Rat CnfMdp::expected_reward(const State& s, const std::optional<Assignment>& wstar) const {
  if (!is_rewarding(s)) return Rat(0);
  if (!wstar) return Rat(0);
  return g_reward(Int(s.depth), s.w.hamming(*wstar));
}

}  // namespace hardmdp
