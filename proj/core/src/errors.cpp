#include "invasion/errors.hpp"

namespace invasion {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kConstraint: return "constraint";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kNumericalBlowup: return "numerical_blowup";
    case ErrorKind::kFrontLost: return "front_lost";
    case ErrorKind::kFit: return "fit";
  }
  return "unknown";
}

}  // namespace invasion
