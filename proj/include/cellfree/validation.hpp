#pragma once

#include <cstdint>
#include <string>

/// Statistical cross-checks of the closed forms against the symbol-level
/// simulation.
namespace cellfree::validation {

struct CheckReport {
  bool passed = false;
  /// One line per sub-check with the statistics behind the verdict.
  std::string detail;
};

struct SingleGroupLawOptions {
  std::size_t n_samples = 100000;
  /// Per-AP distance (km) setting the fixed beta_bar from the path-loss model.
  double distance_km = 0.1;
  int tau_p = 1;
  double p_threshold = 0.01;
};

/// KS test of single-group LS SNR samples (pilot observation, LS estimate,
/// closed-form SNR) against Exp(lambda_ls) at the default powers.
CheckReport check_single_group_law(std::uint64_t seed, const SingleGroupLawOptions& options = {});

struct ConditionalMomentsOptions {
  int n_configs = 20;
  std::size_t n_draws = 100000;
  double z_limit = 3.0;
  int min_passing = 19;
};

/// For the Alamouti and rate-3/4 codes: random (beta_bar, h_hat, powers)
/// configurations, conditional Monte-Carlo moments against c_n and
/// E[|eta_n|^2 | h_hat]. Passes when at least min_passing configurations per
/// code agree within z_limit standard errors on every moment.
CheckReport check_conditional_moments(std::uint64_t seed, const ConditionalMomentsOptions& options = {});

struct HyperexpOptions {
  std::size_t n_samples = 100000;
  int n_grid = 20;
  double z_limit = 3.0;
};

/// Empirical coverage of perfect-CSI SNR draws against the hyperexponential
/// formula on a grid of thresholds (four groups, distinct variances).
CheckReport check_hyperexponential(std::uint64_t seed, const HyperexpOptions& options = {});

}  // namespace cellfree::validation
