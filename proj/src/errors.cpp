#include "tla/errors.hpp"

namespace tla {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "config";
    case ErrorCode::NonCentral: return "non-central";
    case ErrorCode::SelftestFailed: return "selftest";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::Lattice: return "lattice";
    case ErrorCode::Presentation: return "presentation";
    case ErrorCode::Evaluation: return "evaluation";
    case ErrorCode::Groupoid: return "groupoid";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace tla
