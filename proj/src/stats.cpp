#include "cellfree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "cellfree/error.hpp"

namespace cellfree::stats {

void Accumulator::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double Accumulator::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double Accumulator::std_error() const noexcept {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * x * x);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::SampleSize, "KS test needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  const double sqrt_n = std::sqrt(n);
  const double p = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return {d, p, samples.size()};
}

double chi_square_survival(double statistic, double dof) {
  if (dof <= 0.0) throw Error(ErrorCode::InvalidParameter, "chi-square needs positive dof");
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double poisson_dispersion_p_value(std::span<const double> counts) {
  if (counts.size() < 2) throw Error(ErrorCode::SampleSize, "dispersion test needs two counts");
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
  if (mean <= 0.0) throw Error(ErrorCode::SampleSize, "dispersion test needs a positive mean");
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - mean) * (c - mean) / mean;
  return chi_square_survival(chi2, static_cast<double>(counts.size() - 1));
}

}  // namespace cellfree::stats
