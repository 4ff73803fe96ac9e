#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cellfree::stats {

/// Running mean/variance (Welford).
class Accumulator {
 public:
  void add(double x) noexcept;
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;
  double std_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

/// Survival function of the limiting Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
/// uses the asymptotic law with Stephens' finite-sample correction.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

double chi_square_survival(double statistic, double dof);

/// Dispersion test for Poisson counts: sum (n_i - mean)^2 / mean against
/// chi-square with k-1 degrees of freedom.
double poisson_dispersion_p_value(std::span<const double> counts);

}  // namespace cellfree::stats
