#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/error.hpp"
#include "cellfree/stats.hpp"

using namespace cellfree;

TEST_CASE("effective channel covariance and mean") {
  RandomStream rng(1);
  const std::vector<double> bb{1.0, 1.0};
  stats::Accumulator p0, p1, cross_re, mean_re;
  for (int i = 0; i < 100000; ++i) {
    const auto ch = draw_effective_channel(bb, rng);
    p0.add(std::norm(ch.h(0)));
    p1.add(std::norm(ch.h(1)));
    cross_re.add((ch.h(0) * std::conj(ch.h(1))).real());
    mean_re.add(ch.h(0).real());
  }
  CHECK(std::abs(p0.mean() - 1.0) < 3 * p0.std_error());
  CHECK(std::abs(p1.mean() - 1.0) < 3 * p1.std_error());
  CHECK(std::abs(cross_re.mean()) < 3 * cross_re.std_error());
  CHECK(std::abs(mean_re.mean()) < 3 * mean_re.std_error());
  CHECK_THROWS_AS(draw_effective_channel(std::vector<double>{1.0, 0.0}, rng), Error);
}

TEST_CASE("summing per-antenna channels matches the group law") {
  RandomStream rng(2);
  const std::vector<double> beta{0.5, 1.5, 2.0};
  const Grouping g{{0, 0, 0}, 1};
  std::vector<double> energy;
  for (int i = 0; i < 100000; ++i) energy.push_back(std::norm(draw_effective_channel_from_antennas(beta, g, rng).h(0)));
  const auto ks = stats::ks_test(energy, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x / 4.0); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("pilot blocks are orthogonal") {
  const auto one = make_pilot_block(1, 1, 1.0);
  CHECK(one.pilots(0, 0) == Complex(1, 0));
  for (auto [tp, ng] : std::vector<std::pair<int, int>>{{2, 2}, {4, 2}, {4, 4}, {7, 3}, {10, 1}}) {
    const auto p = make_pilot_block(tp, ng, 2.0);
    const CMatrix gram = p.pilots.adjoint() * p.pilots;
    CHECK((gram - tp * CMatrix::Identity(ng, ng)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(make_pilot_block(1, 2, 1.0), Error);
  CHECK_THROWS_AS(make_pilot_block(2, 2, 0.0), Error);
}

TEST_CASE("LS estimate: near-noiseless pilots recover h") {
  RandomStream rng(3);
  const std::vector<double> bb{1.0, 0.5};
  const auto ch = draw_effective_channel(bb, rng);
  const auto pilot = make_pilot_block(2, 2, 5e11);
  const auto est = ls_estimate(ch.h, pilot, bb, rng);
  CHECK((est.h_hat - ch.h).norm() < 1e-4);
}

TEST_CASE("LS estimate equals h plus the projected noise") {
  RandomStream rng(4);
  const std::vector<double> bb{1.0, 2.0, 0.3};
  const auto pilot = make_pilot_block(5, 3, 0.7);
  const auto ch = draw_effective_channel(bb, rng);
  CVector w(5);
  for (int t = 0; t < 5; ++t) w(t) = rng.complex_normal(1.0);
  const CVector y = std::sqrt(0.7) * pilot.pilots * ch.h + w;
  const CVector expected = ch.h + pilot.pilots.adjoint() * w / (std::sqrt(0.7) * 5.0);
  CHECK((ls_from_observation(y, pilot) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conditional statistics for one group") {
  const double b = 2.0, e = 3.0;
  CVector hh(1);
  hh(0) = Complex(0.3, -0.1);
  const auto est = ChannelEstimate::from_estimate(hh, std::vector<double>{b}, e);
  CHECK(est.u_cond(0) == doctest::Approx(1.0 / (1.0 + e * b)));
  CHECK(est.c_cond(0) == doctest::Approx(b / (1.0 + e * b)));
  CHECK(est.error_var(0) == doctest::Approx(1.0 / e));
}

TEST_CASE("conditional statistics agree with the matrix definitions") {
  const std::vector<double> bb{0.2, 1.0, 7.0, 3.3};
  const double e = 1.7;
  const auto est = ChannelEstimate::from_estimate(CVector::Zero(4), bb, e);
  Eigen::MatrixXd ce = Eigen::MatrixXd::Identity(4, 4) / e;
  Eigen::MatrixXd ch = Eigen::VectorXd::Map(bb.data(), 4).asDiagonal();
  const Eigen::MatrixXd u = ce * (ce + ch).inverse();
  const Eigen::MatrixXd c = (ce.inverse() + ch.inverse()).inverse();
  CHECK((u.diagonal() - est.u_cond).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c.diagonal() - est.c_cond).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 0; k < 4; ++k) {
    CHECK(est.u_cond(k) > 0.0);
    CHECK(est.u_cond(k) < 1.0);
  }
}

TEST_CASE("error regression on the estimate recovers U_cond and C_cond") {
  RandomStream rng(5);
  const double b = 1.5, rho_p = 0.8;
  const std::vector<double> bb{b};
  const auto pilot = make_pilot_block(1, 1, rho_p);
  double sxy = 0, sxx = 0;
  std::vector<std::pair<Complex, Complex>> pairs;
  stats::Accumulator hh_power;
  for (int i = 0; i < 100000; ++i) {
    const auto ch = draw_effective_channel(bb, rng);
    const auto est = ls_estimate(ch.h, pilot, bb, rng);
    const Complex e = est.h_hat(0) - ch.h(0);
    pairs.emplace_back(est.h_hat(0), e);
    sxy += (std::conj(est.h_hat(0)) * e).real();
    sxx += std::norm(est.h_hat(0));
    hh_power.add(std::norm(est.h_hat(0)));
  }
  const double slope = sxy / sxx;
  const double u = 1.0 / (1.0 + rho_p * b);
  CHECK(std::abs(slope / u - 1.0) < 0.02);
  stats::Accumulator resid;
  for (auto [h, e] : pairs) resid.add(std::norm(e - slope * h));
  CHECK(resid.mean() == doctest::Approx(b / (1.0 + rho_p * b)).epsilon(0.02));
  // Marginal covariance C_h + C_e.
  CHECK(std::abs(hh_power.mean() - (b + 1.0 / rho_p)) < 3 * hh_power.std_error());
}

TEST_CASE("estimate energy law") {
  const auto pilot = make_pilot_block(1, 1, 1.0);
  CHECK(estimate_energy_law(std::vector<double>{1.0}, pilot) == doctest::Approx(0.5));
  const auto strong = make_pilot_block(1, 1, 1e9);
  CHECK(estimate_energy_law(std::vector<double>{4.0}, strong) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK_THROWS_AS(estimate_energy_law(std::vector<double>{1.0, 1.0}, make_pilot_block(2, 2, 1.0)), Error);

  RandomStream rng(6);
  const std::vector<double> bb{0.7};
  const auto p = make_pilot_block(3, 1, 0.4);
  const double rate = estimate_energy_law(bb, p);
  std::vector<double> energy;
  for (int i = 0; i < 100000; ++i) energy.push_back(std::norm(ls_estimate(draw_effective_channel(bb, rng).h, p, bb, rng).h_hat(0)));
  CHECK(stats::ks_test(energy, [rate](double x) { return x <= 0 ? 0.0 : -std::expm1(-rate * x); }).p_value > 0.01);
}
