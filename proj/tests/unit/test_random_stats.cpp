#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellfree/error.hpp"
#include "cellfree/random.hpp"
#include "cellfree/stats.hpp"

using namespace cellfree;

TEST_CASE("streams with equal keys repeat, distinct keys differ") {
  RandomStream a(42, StreamPurpose::SmallScale, 7);
  RandomStream b(42, StreamPurpose::SmallScale, 7);
  RandomStream c(42, StreamPurpose::SmallScale, 8);
  RandomStream d(42, StreamPurpose::Shadow, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs_c |= x != c.uniform();
    differs_d |= x != d.uniform();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("complex normal has the requested variance and zero mean") {
  RandomStream rng(3);
  stats::Accumulator power, re;
  for (int i = 0; i < 200000; ++i) {
    const auto z = rng.complex_normal(2.5);
    power.add(std::norm(z));
    re.add(z.real());
  }
  CHECK(power.mean() == doctest::Approx(2.5).epsilon(3 * power.std_error() / 2.5));
  CHECK(std::abs(re.mean()) < 3 * re.std_error());
}

TEST_CASE("accumulator matches two-pass moments") {
  stats::Accumulator acc;
  const std::vector<double> xs{1.0, 4.0, 9.0, 16.0, 25.0};
  for (double x : xs) acc.add(x);
  CHECK(acc.count() == 5);
  CHECK(acc.mean() == doctest::Approx(11.0));
  CHECK(acc.variance() == doctest::Approx(93.5));
  CHECK(acc.std_error() == doctest::Approx(std::sqrt(93.5 / 5)));
}

TEST_CASE("Kolmogorov survival function at known points") {
  // Reference values of the asymptotic Kolmogorov distribution.
  CHECK(stats::kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
  CHECK(stats::kolmogorov_survival(1.63) == doctest::Approx(0.0098).epsilon(0.02));
  CHECK(stats::kolmogorov_survival(0.0) == 1.0);
}

TEST_CASE("KS test accepts a uniform sample and rejects a shifted one") {
  RandomStream rng(11);
  std::vector<double> u(20000);
  for (double& x : u) x = rng.uniform();
  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(stats::ks_test(u, uniform_cdf).p_value > 0.01);
  for (double& x : u) x = std::min(1.0, x + 0.05);
  CHECK(stats::ks_test(u, uniform_cdf).p_value < 1e-6);
  CHECK_THROWS_AS(stats::ks_test({}, uniform_cdf), Error);
}

TEST_CASE("chi-square survival") {
  CHECK(stats::chi_square_survival(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(stats::chi_square_survival(0.0, 4.0) == 1.0);
  CHECK_THROWS_AS(stats::chi_square_survival(1.0, 0.0), Error);
}
