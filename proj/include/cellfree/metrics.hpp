#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cellfree/ostbc.hpp"

namespace cellfree {

struct OutageResult {
  double epsilon = 0.0;
  double gamma_eps = 0.0;
  double rate_bpcu = 0.0;
  std::size_t n_trials = 0;
  /// Half-width of the 95% interval on rate_bpcu.
  double ci_halfwidth = 0.0;
};

/// (1 - tau_p / tau_c) (N_s / block_len) log2(1 + gamma_eps).
double outage_rate(double gamma_eps, int tau_p, int tau_c, const OstbcCode& code);

/// P(sum_n Exp(lambda_n) >= gamma) = sum_n e^(-gamma lambda_n) / prod_{k!=n}(1 - lambda_n / lambda_k).
/// Throws DegenerateRates when two rates are closer than 1e-6 relative.
double coverage_perfect(double gamma, std::span<const double> lambdas);

/// Mean of e^(-gamma lambda) over large-scale draws of the single-group LS rate.
double coverage_ls_single(double gamma, std::span<const double> lambda_samples);

struct QuantileEstimate {
  double value = 0.0;
  /// Order statistics bracketing the quantile at 95% (binomial normal
  /// approximation).
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n = 0;
};

/// Smallest sample count accepted for an epsilon quantile.
std::size_t min_samples_for(double epsilon);

/// Lower-interpolated epsilon quantile (index floor(epsilon (n-1)) of the
/// sorted samples). Needs n >= 50 / epsilon.
QuantileEstimate quantile_threshold(std::span<const double> samples, double epsilon);

/// Solves coverage(gamma) = target for gamma >= 0, assuming coverage is
/// non-increasing with coverage(0) = 1. Bracket is grown from initial_hi.
double invert_coverage(const std::function<double(double)>& coverage, double target, double initial_hi = 1.0);

}  // namespace cellfree
