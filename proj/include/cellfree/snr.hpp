#pragma once

#include <span>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/ostbc.hpp"

namespace cellfree {

enum class CsiMode { Perfect, LeastSquares };

struct SnrSample {
  double value = 0.0;
  CsiMode csi_mode = CsiMode::Perfect;
  /// Channel (perfect CSI) or estimate (LS) the value was computed from.
  CVector conditioning;
};

/// rho E_s ||h||^2.
SnrSample snr_perfect(const CVector& h, double rho, double symbol_energy);

/// Moments of the processed symbol s_hat_n = sqrt(rho_d)||h_hat||^2 s_n + eta_n + z_n
/// given the estimate.
struct ConditionalSnrTerms {
  /// E[s_n^* eta_n | h_hat] / E_s.
  Complex c_n;
  /// E[|z_n|^2 | h_hat] = ||h_hat||^2.
  double z_power = 0.0;
  /// E[|eta_n|^2 | h_hat].
  double eta_power = 0.0;
  /// E[e e^H | h_hat] = U h_hat h_hat^H U^H + C.
  CMatrix q1;
  /// E[e e^T | h_hat] = U h_hat h_hat^T U^T.
  CMatrix q2;
};

/// psi(C, Q) = Re(h^H C^H (sum_k A_k Q A_k^H + B_k Q B_k^H) C h).
double psi(const OstbcCode& code, const CMatrix& c, const CMatrix& q, const CVector& h_hat);
/// psi_bar(C, Q) = Re(h^H C^H (sum_k A_k Q A_k^T - B_k Q B_k^T) C^* h^*).
double psi_bar(const OstbcCode& code, const CMatrix& c, const CMatrix& q, const CVector& h_hat);

ConditionalSnrTerms conditional_snr_terms(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate,
                               double rho_d, double symbol_energy);

/// E_s |sqrt(rho_d)||h_hat||^2 + c_n|^2 / (E|eta_n|^2 + E|z_n|^2 - E_s |c_n|^2).
SnrSample snr_ls(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate, double rho_d,
                 double symbol_energy);

/// Smallest per-symbol LS SNR of the block. The symbols of the rate-3/4 code
/// see slightly different estimation-noise powers.
SnrSample snr_ls_block(const OstbcCode& code, const ChannelEstimate& estimate, double rho_d, double symbol_energy);

/// Exponential rate of the single-group LS SNR:
/// (1 + b (rho_p tau_p + rho_d E_s)) / (rho_d E_s rho_p tau_p b^2).
double lambda_ls(double beta_bar, double rho_p, double tau_p, double rho_d, double symbol_energy);

/// Exponential rate 1 / (rho E_s beta_bar_n) of one perfect-CSI SNR term.
double lambda_perfect(double beta_bar, double rho, double symbol_energy);
std::vector<double> lambda_perfect(std::span<const double> beta_bar, double rho, double symbol_energy);

/// Maximum-ratio combining over receive antennas: the branch SNRs add.
SnrSample snr_mrc(std::span<const SnrSample> branches);

}  // namespace cellfree
