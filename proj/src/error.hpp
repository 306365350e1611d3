#pragma once

#include <stdexcept>
#include <string>

namespace hardmdp {

// Error categories carried across the library; the C ABI maps them 1:1 to
// status codes, the CLI maps them to exit codes.
enum class Errc {
  invalid_argument,  // bad parameter / contract violation by the caller
  parse,             // malformed DIMACS / descriptor / state string
  budget,            // armed oracle budget exhausted
  cap,               // enforced work cap exceeded (DP size, enumeration, ...)
  state,             // malformed or structurally invalid MDP state
  precondition,      // instance fails an op's precondition (e.g. not unique-SAT)
  io,                // file read/write failure
  internal,          // should-not-happen
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::parse: return "parse_error";
    case Errc::budget: return "budget_exhausted";
    case Errc::cap: return "cap_exceeded";
    case Errc::state: return "state_error";
    case Errc::precondition: return "precondition_failed";
    case Errc::io: return "io_error";
    case Errc::internal: return "internal_error";
  }
  return "unknown";
}

}  // namespace hardmdp
