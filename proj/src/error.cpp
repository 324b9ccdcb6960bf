#include "entropy_lab/error.hpp"

namespace entropy_lab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRegime: return "regime";
    case ErrorKind::kRegimeBoundary: return "regime-boundary";
    case ErrorKind::kHypothesis: return "hypothesis";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kFitDomain: return "fit-domain";
    case ErrorKind::kSpectrumDomain: return "spectrum-domain";
    case ErrorKind::kNotSupported: return "not-supported";
    case ErrorKind::kResource: return "resource";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kDiscretization: return "discretization";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kSchema: return "schema";
  }
  return "unknown";
}

}  // namespace entropy_lab
