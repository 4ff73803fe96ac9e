#pragma once

#include <span>
#include <vector>

#include "cellfree/channel.hpp"
#include "cellfree/grouping.hpp"
#include "cellfree/ostbc.hpp"
#include "cellfree/propagation.hpp"
#include "cellfree/random.hpp"
#include "cellfree/snr.hpp"

/// Symbol-level simulation of pilot and OSTBC data transmission. Used to
/// check the closed-form SNR expressions; not needed by the fast paths.
namespace cellfree::linklevel {

struct LinkPowers {
  double rho_p = 1.0;
  double rho_d = 1.0;
  int tau_p = 1;
  double symbol_energy = 1.0;
};

struct TrialOptions {
  /// Detect with the true channel instead of the LS estimate.
  bool perfect_csi = false;
  /// Drop receiver noise in both the pilot and data phase.
  bool noiseless = false;
};

/// One pilot + data block. For every symbol n the processed symbol splits as
/// processed_n = gain * s_n + eta_n + z_n with gain = sqrt(rho_d)||h_hat||^2.
struct TrialRecord {
  CVector h;
  CVector h_hat;
  CVector symbols;
  CVector processed;
  CVector eta;
  CVector z;
  double gain = 0.0;

  /// max_n |processed_n - (gain s_n + eta_n + z_n)|.
  double reconstruction_error() const;
};

/// y = sqrt(rho_d) X h + w over the block_len channel uses.
CVector receive(const CMatrix& x, const CVector& h, double rho_d, RandomStream& rng, bool noiseless = false);

/// s_hat_n = Re(h_hat^H A_n^H y) + i Im(h_hat^H B_n^H y) for every symbol.
CVector detect(const OstbcCode& code, const CVector& h_hat, const CVector& y);

/// Forward simulation: per-antenna channels summed by group, pilot phase, LS
/// estimate, symbols, code matrix, reception and detection.
TrialRecord run_trial(const OstbcCode& code, const Grouping& grouping, const LargeScale& large_scale,
                      const LinkPowers& powers, RandomStream& rng, const TrialOptions& options = {});

/// Same, starting from an already drawn effective channel.
TrialRecord run_trial(const OstbcCode& code, const CVector& h, const LinkPowers& powers,
                      RandomStream& rng, const TrialOptions& options = {});

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Conditional moments given h_hat, estimated by drawing symbols, receiver
/// noise and the error e ~ CN(U h_hat, C).
struct MomentEstimates {
  /// E[s_n^* eta_n | h_hat] / E_s, real and imaginary part.
  Estimate c_re;
  Estimate c_im;
  /// E[|eta_n|^2 | h_hat].
  Estimate eta_power;
  /// E[|z_n|^2 | h_hat].
  Estimate z_power;
  std::size_t n_draws = 0;
};

MomentEstimates conditional_moments(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate,
                                    const LinkPowers& powers, std::size_t n_draws, RandomStream& rng);

/// Sorted per-symbol SNR samples.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);
  const std::vector<double>& samples() const noexcept { return samples_; }
  /// P(SNR <= x).
  double cdf(double x) const;
  /// Lower-interpolated p-quantile.
  double quantile(double p) const;
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

/// Effective SNR of symbol 0 over n_trials independent blocks on a fixed
/// per-group variance profile: the closed form evaluated on a simulated
/// estimate (LS) or channel (perfect CSI).
EmpiricalCdf empirical_snr_cdf(const OstbcCode& code, std::span<const double> beta_bar, const LinkPowers& powers,
                               CsiMode csi, std::size_t n_trials, RandomStream& rng);

/// Symbol-level SINR after combining branches with the given weights. One
/// estimate per receive antenna; the code matrix is shared.
struct CombinedSinr {
  Estimate signal_gain;
  double sinr = 0.0;
  /// Batch-means standard error of the SINR.
  double std_error = 0.0;
};

CombinedSinr conditional_mrc_sinr(const OstbcCode& code, int symbol_index,
                                  std::span<const ChannelEstimate> branches, std::span<const Complex> weights,
                                  const LinkPowers& powers, std::size_t n_draws, RandomStream& rng);

}  // namespace cellfree::linklevel
