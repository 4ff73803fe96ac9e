#pragma once

#include <span>
#include <vector>

#include "cellfree/grouping.hpp"
#include "cellfree/ostbc.hpp"
#include "cellfree/random.hpp"

namespace cellfree {

/// Per-group aggregate channel h with h_k ~ CN(0, beta_bar_k), independent.
struct EffectiveChannel {
  CVector h;
  std::vector<double> cov_diag;
};

EffectiveChannel draw_effective_channel(std::span<const double> beta_bar, RandomStream& rng);

/// Draws one CN(0, beta_m) coefficient per antenna and sums them by group.
EffectiveChannel draw_effective_channel_from_antennas(std::span<const double> beta, const Grouping& grouping,
                                                      RandomStream& rng);

/// tau_p x N_g pilot matrix with X_p^H X_p = tau_p I.
struct PilotBlock {
  CMatrix pilots;
  double pilot_power = 0.0;

  int tau_p() const noexcept { return static_cast<int>(pilots.rows()); }
  int n_groups() const noexcept { return static_cast<int>(pilots.cols()); }
};

/// First N_g columns of the tau_p-point DFT matrix (unit-modulus entries).
PilotBlock make_pilot_block(int tau_p, int n_groups, double pilot_power);

/// y_p = sqrt(rho_p) X_p h + w with w ~ CN(0, I).
CVector observe_pilots(const CVector& h, const PilotBlock& pilot, RandomStream& rng);

/// LS estimate X_p^H y_p / (sqrt(rho_p) tau_p).
CVector ls_from_observation(const CVector& y_p, const PilotBlock& pilot);

/// LS estimate together with the law of the error e = h_hat - h given h_hat:
/// e | h_hat ~ CN(U h_hat, C). All matrices are diagonal and stored as
/// their diagonals.
struct ChannelEstimate {
  CVector h_hat;
  /// Diagonal of C_e = I / (rho_p tau_p).
  Eigen::VectorXd error_var;
  /// Diagonal of U = C_e (C_e + C_h)^-1.
  Eigen::VectorXd u_cond;
  /// Diagonal of C = (C_e^-1 + C_h^-1)^-1.
  Eigen::VectorXd c_cond;

  int n_groups() const noexcept { return static_cast<int>(h_hat.size()); }

  /// Builds the conditional statistics for a given estimate. An infinite
  /// rho_p tau_p yields a perfect estimate (U = C = 0).
  static ChannelEstimate from_estimate(CVector h_hat, std::span<const double> beta_bar, double rho_p_tau_p);
};

/// Full pilot phase: observe, estimate, attach conditional statistics.
ChannelEstimate ls_estimate(const CVector& h, const PilotBlock& pilot, std::span<const double> beta_bar,
                            RandomStream& rng);

/// Rate of the exponential law of |h_hat|^2 when N_g = 1:
/// rho_p tau_p / (rho_p tau_p beta_bar + 1).
double estimate_energy_law(std::span<const double> beta_bar, const PilotBlock& pilot);

}  // namespace cellfree
