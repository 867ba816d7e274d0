#include "corput/error.hpp"

namespace corput {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::evaluation_failure: return "evaluation-failure";
    case ErrorKind::catalog_miss: return "catalog-miss";
    case ErrorKind::unsupported_order: return "unsupported-order";
    case ErrorKind::precision_failure: return "precision-failure";
    case ErrorKind::budget_exhausted: return "budget-exhausted";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::noise_floor: return "noise-floor";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace corput
