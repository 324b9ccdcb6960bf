#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entropy_lab {

enum class ErrorKind {
  kRegime,          // exponent / coefficient admissibility violated
  kRegimeBoundary,  // exactly on a boundary of an admissible region
  kHypothesis,      // a theorem hypothesis (e.g. d >= 3) is not met
  kPrecondition,
  kFitDomain,
  kSpectrumDomain,
  kNotSupported,
  kResource,
  kNumeric,
  kDiscretization,
  kIo,
  kSchema,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Regime, boundary and hypothesis violations are reported to the shell
  // with exit status 2, everything else with 1.
  bool is_admissibility_violation() const noexcept {
    return kind_ == ErrorKind::kRegime || kind_ == ErrorKind::kRegimeBoundary ||
           kind_ == ErrorKind::kHypothesis;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace entropy_lab
