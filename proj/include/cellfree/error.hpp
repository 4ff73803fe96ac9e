#pragma once

#include <stdexcept>
#include <string>

namespace cellfree {

enum class ErrorCode {
  InvalidParameter,
  NoAccessPoints,
  Dimension,
  NotLinear,
  Infeasible,
  CovarianceFactorization,
  BudgetExhausted,
  DegenerateRates,
  SampleSize,
  Unsupported,
  NumericalDegeneracy,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cellfree
