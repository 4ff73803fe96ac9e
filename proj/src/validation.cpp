#include "cellfree/validation.hpp"

#include <cmath>
#include <sstream>

#include "cellfree/error.hpp"
#include "cellfree/harness.hpp"
#include "cellfree/linklevel.hpp"
#include "cellfree/metrics.hpp"
#include "cellfree/stats.hpp"

namespace cellfree::validation {

CheckReport check_single_group_law(std::uint64_t seed, const SingleGroupLawOptions& options) {
  const double rho = normalized_power(ScenarioConfig{});
  const double beta = db_to_linear(-path_loss_db(options.distance_km, PathLossParams{}));
  const std::vector<double> beta_bar{beta};
  const linklevel::LinkPowers powers{rho, rho, options.tau_p, 1.0};
  RandomStream rng(seed, StreamPurpose::Oracle, 1);
  const auto cdf = linklevel::empirical_snr_cdf(OstbcCode::single(), beta_bar, powers, CsiMode::LeastSquares,
                                                options.n_samples, rng);
  const double lambda = lambda_ls(beta, rho, options.tau_p, rho, 1.0);
  const auto ks = stats::ks_test(cdf.samples(), [lambda](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-lambda * x); });
  std::ostringstream os;
  os << "single-group-law seed=" << seed << " n=" << ks.n << " rho_beta=" << rho * beta << " lambda=" << lambda
     << " ks_statistic=" << ks.statistic << " p_value=" << ks.p_value;
  return {ks.p_value > options.p_threshold, os.str()};
}

CheckReport check_conditional_moments(std::uint64_t seed, const ConditionalMomentsOptions& options) {
  std::ostringstream os;
  bool all_ok = true;
  int code_index = 0;
  for (const OstbcCode& code : {OstbcCode::alamouti(), OstbcCode::rate_three_quarter()}) {
    RandomStream rng(seed, StreamPurpose::Oracle, 100 + static_cast<std::uint64_t>(code_index++));
    const int ng = code.n_groups();
    int passing = 0;
    double worst_z = 0.0;
    for (int cfg = 0; cfg < options.n_configs; ++cfg) {
      std::vector<double> beta_bar(static_cast<std::size_t>(ng));
      for (double& b : beta_bar) b = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const double rho_p = std::pow(10.0, rng.uniform(-1.0, 1.5));
      const double rho_d = std::pow(10.0, rng.uniform(-1.0, 1.5));
      const int tau_p = ng;
      CVector h_hat(ng);
      for (int k = 0; k < ng; ++k)
        h_hat(k) = rng.complex_normal(beta_bar[static_cast<std::size_t>(k)] + 1.0 / (rho_p * tau_p));
      const ChannelEstimate est = ChannelEstimate::from_estimate(h_hat, beta_bar, rho_p * tau_p);
      const int n = cfg % code.n_symbols();
      const ConditionalSnrTerms t = conditional_snr_terms(code, n, est, rho_d, 1.0);
      const linklevel::LinkPowers powers{rho_p, rho_d, tau_p, 1.0};
      const auto m = linklevel::conditional_moments(code, n, est, powers, options.n_draws, rng);
      const double z_re = std::abs(m.c_re.mean - t.c_n.real()) / m.c_re.std_error;
      const double z_im = std::abs(m.c_im.mean - t.c_n.imag()) / m.c_im.std_error;
      const double z_eta = std::abs(m.eta_power.mean - t.eta_power) / m.eta_power.std_error;
      const double z = std::max({z_re, z_im, z_eta});
      worst_z = std::max(worst_z, z);
      if (z <= options.z_limit) ++passing;
    }
    const bool ok = passing >= options.min_passing;
    all_ok = all_ok && ok;
    os << "conditional-moments seed=" << seed << " code=" << code.name() << " passing=" << passing << "/" << options.n_configs
       << " worst_z=" << worst_z << (ok ? " PASS" : " FAIL") << '\n';
  }
  std::string detail = os.str();
  if (!detail.empty()) detail.pop_back();
  return {all_ok, detail};
}

CheckReport check_hyperexponential(std::uint64_t seed, const HyperexpOptions& options) {
  const std::vector<double> beta_bar{1.0, 0.6, 0.35, 0.2};
  const double rho = 2.0;
  const std::vector<double> lambdas = lambda_perfect(beta_bar, rho, 1.0);
  const OstbcCode code = OstbcCode::rate_three_quarter();
  const linklevel::LinkPowers powers{rho, rho, code.n_groups(), 1.0};
  RandomStream rng(seed, StreamPurpose::Oracle, 200);
  const auto cdf =
      linklevel::empirical_snr_cdf(code, beta_bar, powers, CsiMode::Perfect, options.n_samples, rng);
  const double n = static_cast<double>(cdf.size());
  int within = 0;
  double worst_z = 0.0;
  for (int g = 0; g < options.n_grid; ++g) {
    const double level = 0.02 + 0.96 * g / (options.n_grid - 1);
    const double gamma = invert_coverage([&](double x) { return coverage_perfect(x, lambdas); }, level, 1.0);
    const double analytic = coverage_perfect(gamma, lambdas);
    const double empirical = 1.0 - cdf.cdf(gamma);
    const double se = std::sqrt(analytic * (1.0 - analytic) / n);
    const double z = std::abs(empirical - analytic) / se;
    worst_z = std::max(worst_z, z);
    if (z <= options.z_limit) ++within;
  }
  const auto ks = stats::ks_test(cdf.samples(), [&](double x) { return 1.0 - coverage_perfect(x, lambdas); });
  std::ostringstream os;
  os << "hyperexp seed=" << seed << " n=" << cdf.size() << " grid_within=" << within << "/" << options.n_grid
     << " worst_z=" << worst_z << " ks_statistic=" << ks.statistic << " p_value=" << ks.p_value;
  return {within == options.n_grid, os.str()};
}

}  // namespace cellfree::validation
