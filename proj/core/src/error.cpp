#include "nsfstab/error.hpp"

namespace nsfstab {

std::string_view to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::kDomain: return "domain error";
    case ErrorCategory::kInput: return "input error";
    case ErrorCategory::kPositivity: return "positivity violation";
    case ErrorCategory::kSolver: return "solver error";
    case ErrorCategory::kBlowup: return "numerical blow-up";
    case ErrorCategory::kRootFinding: return "root finding error";
  }
  return "unknown error";
}

}  // namespace nsfstab
