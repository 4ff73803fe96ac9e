#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/linklevel.hpp"
#include "cellfree/metrics.hpp"
#include "cellfree/snr.hpp"
#include "cellfree/stats.hpp"

using namespace cellfree;
using namespace cellfree::linklevel;

namespace {

ChannelEstimate estimate_for(const std::vector<double>& bb, double e, RandomStream& rng) {
  CVector hh(static_cast<Eigen::Index>(bb.size()));
  for (Eigen::Index k = 0; k < hh.size(); ++k) hh(k) = rng.complex_normal(bb[static_cast<std::size_t>(k)] + 1.0 / e);
  return ChannelEstimate::from_estimate(hh, bb, e);
}

}  // namespace

TEST_CASE("noiseless perfect-CSI trial returns the symbols") {
  RandomStream rng(1);
  for (const auto& code : {OstbcCode::single(), OstbcCode::alamouti(), OstbcCode::rate_three_quarter()}) {
    CVector h(code.n_groups());
    for (int k = 0; k < h.size(); ++k) h(k) = rng.complex_normal(1.0);
    const LinkPowers p{1.0, 2.0, code.n_groups(), 1.0};
    const auto rec = run_trial(code, h, p, rng, {true, true});
    const CVector ratio = rec.processed / (std::sqrt(2.0) * h.squaredNorm());
    CHECK((ratio - rec.symbols).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("processed symbols decompose exactly") {
  RandomStream rng(2);
  const auto code = OstbcCode::rate_three_quarter();
  const LargeScale ls{{0.3, 0.2, 0.5, 0.1, 0.4}, {}};
  const Grouping g{{0, 1, 2, 3, 0}, 4};
  for (int i = 0; i < 200; ++i) {
    const auto rec = run_trial(code, g, ls, {0.7, 1.3, 4, 1.0}, rng);
    CHECK(rec.reconstruction_error() < 1e-10);
  }
}

TEST_CASE("OSTBC detection decouples under perfect CSI") {
  RandomStream rng(3);
  const auto code = OstbcCode::rate_three_quarter();
  CVector h(4);
  for (int k = 0; k < 4; ++k) h(k) = rng.complex_normal(1.0);
  CVector s = draw_symbols(3, 1.0, rng);
  CVector w(4);
  for (int t = 0; t < 4; ++t) w(t) = rng.complex_normal(1.0);
  const CVector base = detect(code, h, code.build(s) * h + w);
  for (int trial = 0; trial < 50; ++trial) {
    CVector t = draw_symbols(3, 1.0, rng);
    t(1) = s(1);
    const CVector other = detect(code, h, code.build(t) * h + w);
    CHECK(std::abs(other(1) - base(1)) < 1e-10);
  }
}

TEST_CASE("conditional moments: no estimation error") {
  RandomStream rng(4);
  const std::vector<double> bb{1.0, 0.5};
  CVector hh(2);
  hh << Complex(0.5, 0.1), Complex(-0.2, 0.7);
  const auto est = ChannelEstimate::from_estimate(hh, bb, std::numeric_limits<double>::infinity());
  const auto m = conditional_moments(OstbcCode::alamouti(), 0, est, {1.0, 2.0, 2, 1.0}, 2000, rng);
  CHECK(std::abs(m.c_re.mean) < 1e-12);
  CHECK(std::abs(m.eta_power.mean) < 1e-12);
  CHECK(std::abs(m.z_power.mean - hh.squaredNorm()) < 3 * m.z_power.std_error);
}

TEST_CASE("conditional moments: single group matches the closed form") {
  RandomStream rng(5);
  const double b = 0.9, e = 2.0, rho_d = 1.7;
  const std::vector<double> bb{b};
  const auto est = estimate_for(bb, e, rng);
  const auto m = conditional_moments(OstbcCode::single(), 0, est, {e, rho_d, 1, 1.0}, 100000, rng);
  const double h2 = est.h_hat.squaredNorm();
  const double c = -std::sqrt(rho_d) * h2 / (1.0 + e * b);
  CHECK(std::abs(m.c_re.mean - c) < 3 * m.c_re.std_error);
  const auto t = conditional_snr_terms(OstbcCode::single(), 0, est, rho_d, 1.0);
  CHECK(std::abs(m.eta_power.mean - t.eta_power) < 3 * m.eta_power.std_error);
  CHECK(std::abs(m.z_power.mean - t.z_power) < 3 * m.z_power.std_error);
}

TEST_CASE("conditional moments: Alamouti imaginary cross term and eta power") {
  RandomStream rng(6);
  const std::vector<double> bb{1.2, 0.4};
  const double e = 1.5, rho_d = 2.5;
  const auto est = estimate_for(bb, e, rng);
  const auto code = OstbcCode::alamouti();
  for (int n = 0; n < 2; ++n) {
    const auto t = conditional_snr_terms(code, n, est, rho_d, 1.0);
    const auto m = conditional_moments(code, n, est, {e / 2, rho_d, 2, 1.0}, 100000, rng);
    CHECK(std::abs(m.c_im.mean - t.c_n.imag()) < 3 * m.c_im.std_error);
    CHECK(std::abs(m.c_re.mean - t.c_n.real()) < 3 * m.c_re.std_error);
    CHECK(std::abs(m.eta_power.mean - t.eta_power) < 3 * m.eta_power.std_error);
    CHECK(std::abs(m.z_power.mean - t.z_power) < 3 * m.z_power.std_error);
  }
}

TEST_CASE("empirical SNR laws") {
  RandomStream rng(7);
  const std::vector<double> bb{0.6};
  const LinkPowers p{1.5, 2.0, 2, 1.0};
  const auto ls = empirical_snr_cdf(OstbcCode::single(), bb, p, CsiMode::LeastSquares, 100000, rng);
  const double lambda = lambda_ls(0.6, 1.5, 2, 2.0, 1.0);
  CHECK(stats::ks_test(ls.samples(), [lambda](double x) { return x <= 0 ? 0.0 : -std::expm1(-lambda * x); }).p_value >
        0.01);
  // Coverage at threshold zero.
  CHECK(1.0 - ls.cdf(0.0) == 1.0);

  const std::vector<double> three{1.0, 0.5, 0.2, 0.1};
  const auto perfect = empirical_snr_cdf(OstbcCode::rate_three_quarter(), three, p, CsiMode::Perfect, 100000, rng);
  const auto lambdas = lambda_perfect(three, 2.0, 1.0);
  CHECK(stats::ks_test(perfect.samples(), [&](double x) { return 1.0 - coverage_perfect(x, lambdas); }).p_value >
        0.01);
  CHECK(perfect.size() == 100000);
  CHECK(perfect.quantile(0.0) == perfect.samples().front());
}

TEST_CASE("LS coverage over large-scale draws matches simulation") {
  RandomStream rng(8);
  const LinkPowers p{1.0, 1.0, 1, 1.0};
  std::vector<double> lambdas, pooled;
  for (double b : {0.3, 0.8, 2.0, 5.0}) {
    const std::vector<double> bb{b};
    lambdas.push_back(lambda_ls(b, 1.0, 1, 1.0, 1.0));
    const auto cdf = empirical_snr_cdf(OstbcCode::single(), bb, p, CsiMode::LeastSquares, 25000, rng);
    pooled.insert(pooled.end(), cdf.samples().begin(), cdf.samples().end());
  }
  const EmpiricalCdf all(pooled);
  for (double gamma : {0.05, 0.3, 1.0, 3.0}) {
    const double analytic = coverage_ls_single(gamma, lambdas);
    const double empirical = 1.0 - all.cdf(gamma);
    const double se = std::sqrt(analytic * (1 - analytic) / static_cast<double>(pooled.size()));
    CHECK(std::abs(analytic - empirical) < 3 * se + 1e-12);
  }
}

TEST_CASE("MRC: single group attains the sum of branch SNRs") {
  RandomStream rng(9);
  const auto code = OstbcCode::single();
  const double e = 1.3, rho_d = 1.8;
  const LinkPowers p{e, rho_d, 1, 1.0};
  for (int cfg = 0; cfg < 3; ++cfg) {
    std::vector<ChannelEstimate> branches;
    std::vector<Complex> weights;
    std::vector<SnrSample> snrs;
    for (int r = 0; r < 2; ++r) {
      const std::vector<double> bb{std::pow(10.0, rng.uniform(-0.5, 0.5))};
      branches.push_back(estimate_for(bb, e, rng));
      const auto t = conditional_snr_terms(code, 0, branches.back(), rho_d, 1.0);
      const Complex g = std::sqrt(rho_d) * t.z_power + t.c_n;
      const double noise = t.eta_power + t.z_power - std::norm(t.c_n);
      weights.push_back(std::conj(g) / noise);
      snrs.push_back(snr_ls(code, 0, branches.back(), rho_d, 1.0));
    }
    const auto combined = conditional_mrc_sinr(code, 0, branches, weights, p, 100000, rng);
    const double sum = snr_mrc(snrs).value;
    CHECK(std::abs(combined.sinr - sum) < 3 * combined.std_error);
  }
}

TEST_CASE("MRC: Alamouti stays close to the sum of branch SNRs") {
  // Branches share the code matrix, so their effective noises are correlated
  // through the symbols; the sum is an approximation here.
  RandomStream rng(10);
  const auto code = OstbcCode::alamouti();
  const double e = 2.0, rho_d = 1.5;
  const LinkPowers p{e / 2, rho_d, 2, 1.0};
  for (int cfg = 0; cfg < 3; ++cfg) {
    std::vector<ChannelEstimate> branches;
    std::vector<Complex> weights;
    std::vector<SnrSample> snrs;
    for (int r = 0; r < 2; ++r) {
      const std::vector<double> bb{std::pow(10.0, rng.uniform(-0.5, 0.5)), std::pow(10.0, rng.uniform(-0.5, 0.5))};
      branches.push_back(estimate_for(bb, e, rng));
      const auto t = conditional_snr_terms(code, 0, branches.back(), rho_d, 1.0);
      const Complex g = std::sqrt(rho_d) * t.z_power + t.c_n;
      weights.push_back(std::conj(g) / (t.eta_power + t.z_power - std::norm(t.c_n)));
      snrs.push_back(snr_ls(code, 0, branches.back(), rho_d, 1.0));
    }
    const auto combined = conditional_mrc_sinr(code, 0, branches, weights, p, 100000, rng);
    const double sum = snr_mrc(snrs).value;
    CHECK(std::abs(combined.sinr / sum - 1.0) < 0.10);
  }
}
