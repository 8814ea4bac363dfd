#pragma once

#include <stdexcept>
#include <string>

namespace rl {

// Every failure the library signals derives from Error; the tag drives the
// CLI exit-code mapping.
enum class ErrorKind {
  unsupported,    // e.g. inv on N0
  horizon,        // evaluation or search ran past what is known
  precondition,   // caller-supplied data violates a stated requirement
  parse,          // DSL / file syntax
  stage,          // builder could not complete a stage within its bounds
  word_cap,       // F2 word longer than the desk-scale cap
  check           // a certificate or trace assertion failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::unsupported: return "unsupported-operation";
    case ErrorKind::horizon: return "horizon-error";
    case ErrorKind::precondition: return "precondition-violation";
    case ErrorKind::parse: return "parse-error";
    case ErrorKind::stage: return "stage-failure";
    case ErrorKind::word_cap: return "word-cap-exceeded";
    case ErrorKind::check: return "check-failure";
  }
  return "error";
}

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) {
  throw Error(k, std::string(to_string(k)) + ": " + what);
}

}  // namespace rl
