#include "cellfree/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cellfree/error.hpp"

namespace cellfree {

double outage_rate(double gamma_eps, int tau_p, int tau_c, const OstbcCode& code) {
  if (tau_p < 0 || tau_p >= tau_c) throw Error(ErrorCode::InvalidParameter, "need 0 <= tau_p < tau_c");
  if (!(gamma_eps >= 0.0)) throw Error(ErrorCode::InvalidParameter, "threshold must be non-negative");
  return (1.0 - static_cast<double>(tau_p) / tau_c) * code.rate() * std::log2(1.0 + gamma_eps);
}

double coverage_perfect(double gamma, std::span<const double> lambdas) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidParameter, "no rates given");
  for (double l : lambdas)
    if (!(l > 0.0)) throw Error(ErrorCode::InvalidParameter, "rates must be positive");
  if (gamma <= 0.0) return 1.0;
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    for (std::size_t k = n + 1; k < lambdas.size(); ++k) {
      if (std::abs(lambdas[n] - lambdas[k]) < 1e-6 * std::max(lambdas[n], lambdas[k]))
        throw Error(ErrorCode::DegenerateRates, "rates too close for the partial-fraction formula");
    }
  }
  double total = 0.0;
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    double denom = 1.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      if (k != n) denom *= 1.0 - lambdas[n] / lambdas[k];
    }
    total += std::exp(-gamma * lambdas[n]) / denom;
  }
  return std::clamp(total, 0.0, 1.0);
}

double coverage_ls_single(double gamma, std::span<const double> lambda_samples) {
  if (lambda_samples.empty()) throw Error(ErrorCode::SampleSize, "no large-scale samples");
  if (gamma <= 0.0) return 1.0;
  double sum = 0.0;
  for (double l : lambda_samples) sum += std::exp(-gamma * l);
  return sum / static_cast<double>(lambda_samples.size());
}

std::size_t min_samples_for(double epsilon) { return static_cast<std::size_t>(std::ceil(50.0 / epsilon - 1e-9)); }

QuantileEstimate quantile_threshold(std::span<const double> samples, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  const std::size_t n = samples.size();
  if (n < min_samples_for(epsilon))
    throw Error(ErrorCode::SampleSize, "need at least " + std::to_string(min_samples_for(epsilon)) +
                                           " samples for epsilon=" + std::to_string(epsilon) + ", got " +
                                           std::to_string(n));
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto at = [&](double p) {
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(n - 1);
    return sorted[static_cast<std::size_t>(std::floor(pos))];
  };
  const double half = 1.96 * std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(n));
  return {at(epsilon), at(epsilon - half), at(epsilon + half), n};
}

double invert_coverage(const std::function<double(double)>& coverage, double target, double initial_hi) {
  if (!(target > 0.0 && target < 1.0)) throw Error(ErrorCode::InvalidParameter, "target must lie in (0, 1)");
  double lo = 0.0;
  double hi = initial_hi > 0.0 ? initial_hi : 1.0;
  for (int i = 0; i < 400 && coverage(hi) > target; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  // Geometric bisection once the bracket is positive; the threshold spans decades.
  for (int i = 0; i < 200; ++i) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    if (coverage(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cellfree
