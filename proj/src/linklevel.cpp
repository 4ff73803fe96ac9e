#include "cellfree/linklevel.hpp"

#include <algorithm>
#include <cmath>

#include "cellfree/error.hpp"
#include "cellfree/stats.hpp"

namespace cellfree::linklevel {

namespace {

struct Decomposition {
  CVector eta;
  CVector z;
};

// eta_n = -sqrt(rho_d)(Re(h^H A_n^H X e) + i Im(h^H B_n^H X e)), z_n likewise with w.
Decomposition decompose(const OstbcCode& code, const CVector& h_hat, const CMatrix& x, const CVector& e,
                        const CVector& w, double rho_d) {
  const int ns = code.n_symbols();
  Decomposition d{CVector(ns), CVector(ns)};
  const CVector xe = x * e;
  const double sq = std::sqrt(rho_d);
  for (int n = 0; n < ns; ++n) {
    const CVector ah = code.a(n) * h_hat;
    const CVector bh = code.b(n) * h_hat;
    d.eta(n) = -sq * Complex(ah.dot(xe).real(), bh.dot(xe).imag());
    d.z(n) = Complex(ah.dot(w).real(), bh.dot(w).imag());
  }
  return d;
}

CVector noise_vector(Eigen::Index n, RandomStream& rng) {
  CVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.complex_normal(1.0);
  return w;
}

CVector draw_conditional_error(const ChannelEstimate& est, RandomStream& rng) {
  CVector e(est.h_hat.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    e(k) = est.u_cond(k) * est.h_hat(k) + rng.complex_normal(est.c_cond(k));
  }
  return e;
}

Estimate to_estimate(const stats::Accumulator& acc) { return {acc.mean(), acc.std_error()}; }

}  // namespace

double TrialRecord::reconstruction_error() const {
  double worst = 0.0;
  for (Eigen::Index n = 0; n < symbols.size(); ++n) {
    worst = std::max(worst, std::abs(processed(n) - (gain * symbols(n) + eta(n) + z(n))));
  }
  return worst;
}

CVector receive(const CMatrix& x, const CVector& h, double rho_d, RandomStream& rng, bool noiseless) {
  if (x.cols() != h.size()) throw Error(ErrorCode::Dimension, "code matrix and channel disagree on N_g");
  CVector y = std::sqrt(rho_d) * (x * h);
  if (!noiseless) y += noise_vector(y.size(), rng);
  return y;
}

CVector detect(const OstbcCode& code, const CVector& h_hat, const CVector& y) {
  if (y.size() != code.block_len() || h_hat.size() != code.n_groups())
    throw Error(ErrorCode::Dimension, "detector input sizes do not match the code");
  CVector s(code.n_symbols());
  for (int n = 0; n < code.n_symbols(); ++n) {
    const Complex re = (code.a(n) * h_hat).dot(y);
    const Complex im = (code.b(n) * h_hat).dot(y);
    s(n) = Complex(re.real(), im.imag());
  }
  return s;
}

TrialRecord run_trial(const OstbcCode& code, const CVector& h, const LinkPowers& powers,
                      RandomStream& rng, const TrialOptions& options) {
  if (h.size() != code.n_groups()) throw Error(ErrorCode::Dimension, "channel length must equal N_g");
  TrialRecord rec;
  rec.h = h;
  if (options.perfect_csi) {
    rec.h_hat = h;
  } else {
    const PilotBlock pilot = make_pilot_block(powers.tau_p, code.n_groups(), powers.rho_p);
    CVector y_p = std::sqrt(pilot.pilot_power) * (pilot.pilots * h);
    if (!options.noiseless) y_p += noise_vector(y_p.size(), rng);
    rec.h_hat = ls_from_observation(y_p, pilot);
  }
  rec.symbols = draw_symbols(code.n_symbols(), powers.symbol_energy, rng);
  const CMatrix x = code.build(rec.symbols);
  CVector w = options.noiseless ? CVector::Zero(code.block_len()) : noise_vector(code.block_len(), rng);
  const CVector y = std::sqrt(powers.rho_d) * (x * h) + w;
  rec.processed = detect(code, rec.h_hat, y);
  const CVector e = rec.h_hat - h;
  Decomposition d = decompose(code, rec.h_hat, x, e, w, powers.rho_d);
  rec.eta = std::move(d.eta);
  rec.z = std::move(d.z);
  rec.gain = std::sqrt(powers.rho_d) * rec.h_hat.squaredNorm();
  return rec;
}

TrialRecord run_trial(const OstbcCode& code, const Grouping& grouping, const LargeScale& large_scale,
                      const LinkPowers& powers, RandomStream& rng, const TrialOptions& options) {
  if (grouping.n_groups != code.n_groups()) throw Error(ErrorCode::Dimension, "grouping and code disagree on N_g");
  const EffectiveChannel ch = draw_effective_channel_from_antennas(large_scale.beta, grouping, rng);
  return run_trial(code, ch.h, powers, rng, options);
}

MomentEstimates conditional_moments(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate,
                                    const LinkPowers& powers, std::size_t n_draws, RandomStream& rng) {
  if (symbol_index < 0 || symbol_index >= code.n_symbols())
    throw Error(ErrorCode::Dimension, "symbol index out of range");
  if (estimate.n_groups() != code.n_groups()) throw Error(ErrorCode::Dimension, "estimate and code disagree on N_g");
  stats::Accumulator c_re, c_im, eta_pow, z_pow;
  const double es = powers.symbol_energy;
  for (std::size_t i = 0; i < n_draws; ++i) {
    const CVector s = draw_symbols(code.n_symbols(), es, rng);
    const CMatrix x = code.build(s);
    const CVector e = draw_conditional_error(estimate, rng);
    const CVector w = noise_vector(code.block_len(), rng);
    const Decomposition d = decompose(code, estimate.h_hat, x, e, w, powers.rho_d);
    const Complex se = std::conj(s(symbol_index)) * d.eta(symbol_index) / es;
    c_re.add(se.real());
    c_im.add(se.imag());
    eta_pow.add(std::norm(d.eta(symbol_index)));
    z_pow.add(std::norm(d.z(symbol_index)));
  }
  return {to_estimate(c_re), to_estimate(c_im), to_estimate(eta_pow), to_estimate(z_pow), n_draws};
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::cdf(double x) const {
  if (samples_.empty()) return 0.0;
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (samples_.empty()) throw Error(ErrorCode::SampleSize, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidParameter, "quantile level must lie in [0, 1]");
  const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(samples_.size() - 1)));
  return samples_[idx];
}

EmpiricalCdf empirical_snr_cdf(const OstbcCode& code, std::span<const double> beta_bar, const LinkPowers& powers,
                               CsiMode csi, std::size_t n_trials, RandomStream& rng) {
  if (static_cast<int>(beta_bar.size()) != code.n_groups())
    throw Error(ErrorCode::Dimension, "one variance per group required");
  std::vector<double> out;
  out.reserve(n_trials);
  const PilotBlock pilot = make_pilot_block(std::max(powers.tau_p, code.n_groups()), code.n_groups(), powers.rho_p);
  for (std::size_t t = 0; t < n_trials; ++t) {
    const EffectiveChannel ch = draw_effective_channel(beta_bar, rng);
    if (csi == CsiMode::Perfect) {
      out.push_back(snr_perfect(ch.h, powers.rho_d, powers.symbol_energy).value);
    } else {
      const ChannelEstimate est = ls_estimate(ch.h, pilot, beta_bar, rng);
      out.push_back(snr_ls(code, 0, est, powers.rho_d, powers.symbol_energy).value);
    }
  }
  return EmpiricalCdf(std::move(out));
}

CombinedSinr conditional_mrc_sinr(const OstbcCode& code, int symbol_index,
                                  std::span<const ChannelEstimate> branches, std::span<const Complex> weights,
                                  const LinkPowers& powers, std::size_t n_draws, RandomStream& rng) {
  if (branches.empty() || branches.size() != weights.size())
    throw Error(ErrorCode::InvalidParameter, "one weight per branch required");
  if (symbol_index < 0 || symbol_index >= code.n_symbols())
    throw Error(ErrorCode::Dimension, "symbol index out of range");
  constexpr std::size_t kBatches = 20;
  const std::size_t per_batch = std::max<std::size_t>(1, n_draws / kBatches);
  const double es = powers.symbol_energy;
  const double sq = std::sqrt(powers.rho_d);

  struct Sums {
    Complex cross{0.0, 0.0};
    double power = 0.0;
    std::size_t n = 0;
  };
  auto sinr_of = [es](const Sums& s) {
    const Complex a = s.cross / static_cast<double>(s.n);
    const double p = s.power / static_cast<double>(s.n);
    const double signal = es * std::norm(a);
    return signal / (p - signal);
  };

  Sums total;
  stats::Accumulator batch_sinr;
  stats::Accumulator gain;
  for (std::size_t b = 0; b < kBatches; ++b) {
    Sums batch;
    for (std::size_t i = 0; i < per_batch; ++i) {
      const CVector s = draw_symbols(code.n_symbols(), es, rng);
      const CMatrix x = code.build(s);
      Complex combined{0.0, 0.0};
      for (std::size_t r = 0; r < branches.size(); ++r) {
        const ChannelEstimate& est = branches[r];
        const CVector e = draw_conditional_error(est, rng);
        const CVector w = noise_vector(code.block_len(), rng);
        const Decomposition d = decompose(code, est.h_hat, x, e, w, powers.rho_d);
        const Complex processed =
            sq * est.h_hat.squaredNorm() * s(symbol_index) + d.eta(symbol_index) + d.z(symbol_index);
        combined += weights[r] * processed;
      }
      const Complex cross = std::conj(s(symbol_index)) * combined / es;
      gain.add(std::abs(cross));
      batch.cross += cross;
      batch.power += std::norm(combined);
      ++batch.n;
    }
    batch_sinr.add(sinr_of(batch));
    total.cross += batch.cross;
    total.power += batch.power;
    total.n += batch.n;
  }
  CombinedSinr out;
  out.signal_gain = to_estimate(gain);
  out.sinr = sinr_of(total);
  out.std_error = batch_sinr.std_error();
  return out;
}

}  // namespace cellfree::linklevel
