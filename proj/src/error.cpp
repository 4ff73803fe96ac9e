#include "cellfree/error.hpp"

namespace cellfree {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::NoAccessPoints: return "no-aps";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::NotLinear: return "not-linear";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::CovarianceFactorization: return "covariance-factorization";
    case ErrorCode::BudgetExhausted: return "budget-exhausted";
    case ErrorCode::DegenerateRates: return "degenerate-rates";
    case ErrorCode::SampleSize: return "sample-size";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::NumericalDegeneracy: return "numerical-degeneracy";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace cellfree
