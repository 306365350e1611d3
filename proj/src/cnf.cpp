#include "cnf.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace hardmdp {

uint32_t Assignment::hamming(const Assignment& other) const {
  if (v_ != other.v_) fail(Errc::invalid_argument, "hamming distance over mismatched widths");
  uint32_t count = 0;
  for (size_t i = 0; i < words_.size(); ++i)
    count += uint32_t(std::popcount(words_[i] ^ other.words_[i]));
  return count;
}

Assignment Assignment::from_packed64(uint32_t v, uint64_t bits) {
  if (v > 64) fail(Errc::invalid_argument, "packed assignment limited to 64 variables");
  Assignment w(v);
  if (v > 0) {
    uint64_t mask = v == 64 ? ~uint64_t(0) : ((uint64_t(1) << v) - 1);
    w.words_[0] = bits & mask;
  }
  return w;
}

std::string Assignment::hex() const {
  uint32_t nibbles = (v_ + 3) / 4;
  std::string out(nibbles, '0');
  static const char digits[] = "0123456789abcdef";
  for (uint32_t n = 0; n < nibbles; ++n) {
    uint32_t bitpos = 4 * (nibbles - 1 - n);  // msb first
    uint64_t nib = (words_[bitpos >> 6] >> (bitpos & 63)) & 0xF;
    // a nibble can straddle a word boundary only if v were not padded; our
    // words are 64-bit so nibbles never straddle.
    out[n] = digits[nib];
  }
  return out;
}

Assignment Assignment::from_hex(uint32_t v, const std::string& hex) {
  uint32_t nibbles = (v + 3) / 4;
  if (hex.size() != nibbles)
    fail(Errc::state, "assignment hex has wrong width (want " + std::to_string(nibbles) +
                          " digits, got " + std::to_string(hex.size()) + ")");
  Assignment w(v);
  for (uint32_t n = 0; n < nibbles; ++n) {
    char c = hex[n];
    uint64_t nib;
    if (c >= '0' && c <= '9') nib = uint64_t(c - '0');
    else if (c >= 'a' && c <= 'f') nib = uint64_t(c - 'a' + 10);
    else fail(Errc::state, std::string("bad hex digit '") + c + "' in assignment");
    uint32_t bitpos = 4 * (nibbles - 1 - n);
    w.words_[bitpos >> 6] |= nib << (bitpos & 63);
  }
  // Reject set bits above v (non-canonical encoding).
  if (v % 64 != 0 || v == 0) {
    uint32_t top_word = v == 0 ? 0 : (v - 1) >> 6;
    if (!w.words_.empty()) {
      uint64_t mask = (v % 64 == 0) ? ~uint64_t(0) : ((uint64_t(1) << (v % 64)) - 1);
      if ((w.words_[top_word] & ~mask) != 0)
        fail(Errc::state, "assignment hex sets bits beyond variable count");
    }
  }
  return w;
}

std::string Assignment::pm_string() const {
  std::string out(v_, '-');
  for (uint32_t i = 1; i <= v_; ++i)
    if (is_true(i)) out[i - 1] = '+';
  return out;
}

Assignment Assignment::from_pm_string(const std::string& s) {
  Assignment w(uint32_t(s.size()));
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') w.set_true(uint32_t(i + 1), true);
    else if (s[i] != '-')
      fail(Errc::invalid_argument, "assignment string must be '+'/'-' characters");
  }
  return w;
}

bool literal_satisfied(const Literal& lit, const Assignment& w) {
  return w.is_true(lit.var) == lit.sign;
}

bool clause_satisfied(const Clause& c, const Assignment& w) {
  return literal_satisfied(c[0], w) || literal_satisfied(c[1], w) || literal_satisfied(c[2], w);
}

bool evaluate(const Formula& f, const Assignment& w) {
  if (w.size() != f.v) fail(Errc::invalid_argument, "assignment width does not match formula");
  for (const Clause& c : f.clauses)
    if (!clause_satisfied(c, w)) return false;
  return true;
}

std::optional<uint32_t> first_unsatisfied_clause(const Formula& f, const Assignment& w) {
  if (w.size() != f.v) fail(Errc::invalid_argument, "assignment width does not match formula");
  for (uint32_t i = 0; i < f.clauses.size(); ++i)
    if (!clause_satisfied(f.clauses[i], w)) return i;
  return std::nullopt;
}

namespace {

// Comment lines start with 'c' at the beginning of a line; a line starting
// with '%' ends the input (SATLIB convention). Tokens carry their 1-based
// line number for diagnostics.
struct TokenStream {
  std::vector<std::pair<std::string, uint32_t>> tokens;
  size_t pos = 0;
  uint32_t line = 1;  // line of the most recently consumed token

  explicit TokenStream(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    uint32_t lineno = 0;
    bool stopped = false;
    while (!stopped && std::getline(in, raw)) {
      ++lineno;
      size_t first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (raw[first] == 'c') continue;
      if (raw[first] == '%') break;
      std::istringstream ls(raw);
      std::string tok;
      while (ls >> tok) tokens.emplace_back(tok, lineno);
    }
  }

  [[noreturn]] void die(const std::string& msg) const {
    fail(Errc::parse, "line " + std::to_string(line) + ": " + msg);
  }

  std::optional<std::string> next() {
    if (pos >= tokens.size()) return std::nullopt;
    line = tokens[pos].second;
    return tokens[pos++].first;
  }

  long to_long(const std::string& tok) {
    size_t consumed = 0;
    long value = 0;
    try {
      value = std::stol(tok, &consumed);
    } catch (const std::exception&) {
      die("expected integer, got '" + tok + "'");
    }
    if (consumed != tok.size()) die("expected integer, got '" + tok + "'");
    return value;
  }
};

}  // namespace

Formula parse_dimacs(const std::string& text) {
  TokenStream ts(text);

  // Header: p cnf <vars> <clauses>, possibly after comments.
  auto tok = ts.next();
  if (!tok) fail(Errc::parse, "empty DIMACS input");
  if (*tok != "p") ts.die("expected 'p cnf' header, got '" + *tok + "'");
  tok = ts.next();
  if (!tok || *tok != "cnf") ts.die("expected 'cnf' after 'p'");
  tok = ts.next();
  if (!tok) ts.die("missing variable count in header");
  long vars = ts.to_long(*tok);
  tok = ts.next();
  if (!tok) ts.die("missing clause count in header");
  long clause_count = ts.to_long(*tok);
  if (vars < 1) ts.die("variable count must be >= 1");
  if (clause_count < 0) ts.die("clause count must be >= 0");

  Formula f;
  f.v = uint32_t(vars);
  f.clauses.reserve(size_t(clause_count));

  std::vector<Literal> current;
  while (long(f.clauses.size()) < clause_count) {
    tok = ts.next();
    if (!tok) ts.die("unexpected end of input: " + std::to_string(f.clauses.size()) + " of " +
                     std::to_string(clause_count) + " clauses read");
    long lit = ts.to_long(*tok);
    if (lit == 0) {
      if (current.size() != 3)
        ts.die("clause " + std::to_string(f.clauses.size() + 1) + " has " +
               std::to_string(current.size()) + " literals; exactly 3 required");
      f.clauses.push_back(Clause{current[0], current[1], current[2]});
      current.clear();
      continue;
    }
    long var = lit < 0 ? -lit : lit;
    if (var > vars)
      ts.die("literal " + std::to_string(lit) + " out of range (formula has " +
             std::to_string(vars) + " variables)");
    if (current.size() == 3)
      ts.die("clause " + std::to_string(f.clauses.size() + 1) +
             " has more than 3 literals before terminating 0");
    current.push_back(Literal{uint32_t(var), lit > 0});
  }
  if (!current.empty()) fail(Errc::parse, "input ends inside a clause (missing terminating 0)");
  if ((tok = ts.next()))
    ts.die("trailing garbage after final clause: '" + *tok + "'");
  return f;
}

Formula read_dimacs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dimacs(buf.str());
  } catch (const Error& e) {
    if (e.code() == Errc::parse) fail(Errc::parse, path + ": " + e.what());
    throw;
  }
}

std::string emit_dimacs(const Formula& f) {
  std::ostringstream out;
  out << "p cnf " << f.v << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses)
    out << c[0].encoded() << ' ' << c[1].encoded() << ' ' << c[2].encoded() << " 0\n";
  return out.str();
}

void write_dimacs_file(const Formula& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << emit_dimacs(f);
  if (!out) fail(Errc::io, "write failed on '" + path + "'");
}

uint64_t count_solutions(const Formula& f, uint64_t limit, uint32_t max_vars) {
  if (f.v > max_vars)
    fail(Errc::cap, "count_solutions: " + std::to_string(f.v) + " variables exceeds enumeration cap " +
                        std::to_string(max_vars));
  uint64_t count = 0;
  uint64_t total = uint64_t(1) << f.v;
  for (uint64_t bits = 0; bits < total; ++bits) {
    Assignment w = Assignment::from_packed64(f.v, bits);
    if (evaluate(f, w)) {
      ++count;
      if (count > limit) return count;  // early exit: caller only cares up to limit
    }
  }
  return count;
}

std::optional<Assignment> unique_solution(const Formula& f, uint32_t max_vars) {
  if (f.v > max_vars)
    fail(Errc::cap, "unique_solution: formula exceeds enumeration cap");
  std::optional<Assignment> found;
  uint64_t total = uint64_t(1) << f.v;
  for (uint64_t bits = 0; bits < total; ++bits) {
    Assignment w = Assignment::from_packed64(f.v, bits);
    if (evaluate(f, w)) {
      if (found)
        fail(Errc::precondition, "formula has more than one satisfying assignment");
      found = std::move(w);
    }
  }
  return found;
}

}  // namespace hardmdp
