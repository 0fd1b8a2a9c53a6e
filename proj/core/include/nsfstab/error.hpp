#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsfstab {

enum class ErrorCategory {
  kDomain,              // argument outside the mathematical domain
  kInput,               // invalid configuration or malformed input
  kPositivity,          // total temperature dropped below the positivity floor
  kSolver,              // iterative solver did not converge
  kBlowup,              // NaN/Inf in the evolved fields
  kRootFinding,         // bracketing failure in scalar root search
};

std::string_view to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& what) {
  throw Error(c, what);
}

}  // namespace nsfstab
