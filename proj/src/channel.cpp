#include "cellfree/channel.hpp"

#include <cmath>
#include <numbers>

#include "cellfree/error.hpp"

namespace cellfree {

EffectiveChannel draw_effective_channel(std::span<const double> beta_bar, RandomStream& rng) {
  EffectiveChannel out;
  out.h.resize(static_cast<Eigen::Index>(beta_bar.size()));
  out.cov_diag.assign(beta_bar.begin(), beta_bar.end());
  for (std::size_t k = 0; k < beta_bar.size(); ++k) {
    if (!(beta_bar[k] > 0.0)) throw Error(ErrorCode::InvalidParameter, "group channel variance must be positive");
    out.h(static_cast<Eigen::Index>(k)) = rng.complex_normal(beta_bar[k]);
  }
  return out;
}

EffectiveChannel draw_effective_channel_from_antennas(std::span<const double> beta, const Grouping& grouping,
                                                      RandomStream& rng) {
  if (beta.size() != grouping.assignment.size())
    throw Error(ErrorCode::Dimension, "one coefficient per antenna required");
  EffectiveChannel out;
  out.h = CVector::Zero(grouping.n_groups);
  out.cov_diag = group_large_scale(beta, grouping);
  for (std::size_t m = 0; m < beta.size(); ++m) {
    out.h(grouping.assignment[m]) += rng.complex_normal(beta[m]);
  }
  for (double v : out.cov_diag)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidParameter, "every group needs positive channel variance");
  return out;
}

PilotBlock make_pilot_block(int tau_p, int n_groups, double pilot_power) {
  if (n_groups < 1) throw Error(ErrorCode::InvalidParameter, "at least one group required");
  if (tau_p < n_groups)
    throw Error(ErrorCode::Infeasible, "need tau_p >= N_g for orthogonal pilots (tau_p=" + std::to_string(tau_p) +
                                           ", N_g=" + std::to_string(n_groups) + ")");
  if (!(pilot_power > 0.0)) throw Error(ErrorCode::InvalidParameter, "pilot power must be positive");
  PilotBlock out;
  out.pilot_power = pilot_power;
  out.pilots.resize(tau_p, n_groups);
  for (int t = 0; t < tau_p; ++t) {
    for (int k = 0; k < n_groups; ++k) {
      // Reduce t*k mod tau_p first so the phase stays exact for the common small cases.
      const int idx = (t * k) % tau_p;
      if (idx == 0) {
        out.pilots(t, k) = 1.0;
      } else if (2 * idx == tau_p) {
        out.pilots(t, k) = -1.0;
      } else if (4 * idx == tau_p) {
        out.pilots(t, k) = Complex(0.0, -1.0);
      } else if (4 * idx == 3 * tau_p) {
        out.pilots(t, k) = Complex(0.0, 1.0);
      } else {
        out.pilots(t, k) = std::polar(1.0, -2.0 * std::numbers::pi * idx / tau_p);
      }
    }
  }
  return out;
}

CVector observe_pilots(const CVector& h, const PilotBlock& pilot, RandomStream& rng) {
  if (h.size() != pilot.n_groups()) throw Error(ErrorCode::Dimension, "channel and pilot block disagree on N_g");
  CVector y = std::sqrt(pilot.pilot_power) * (pilot.pilots * h);
  for (Eigen::Index t = 0; t < y.size(); ++t) y(t) += rng.complex_normal(1.0);
  return y;
}

CVector ls_from_observation(const CVector& y_p, const PilotBlock& pilot) {
  if (y_p.size() != pilot.tau_p()) throw Error(ErrorCode::Dimension, "observation length must equal tau_p");
  return pilot.pilots.adjoint() * y_p / (std::sqrt(pilot.pilot_power) * pilot.tau_p());
}

ChannelEstimate ChannelEstimate::from_estimate(CVector h_hat, std::span<const double> beta_bar, double rho_p_tau_p) {
  const auto n = static_cast<Eigen::Index>(beta_bar.size());
  if (h_hat.size() != n) throw Error(ErrorCode::Dimension, "estimate and beta_bar disagree on N_g");
  if (!(rho_p_tau_p > 0.0)) throw Error(ErrorCode::InvalidParameter, "pilot energy must be positive");
  ChannelEstimate est;
  est.h_hat = std::move(h_hat);
  est.error_var.resize(n);
  est.u_cond.resize(n);
  est.c_cond.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double b = beta_bar[static_cast<std::size_t>(k)];
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidParameter, "beta_bar must be positive");
    if (std::isinf(rho_p_tau_p)) {
      est.error_var(k) = 0.0;
      est.u_cond(k) = 0.0;
      est.c_cond(k) = 0.0;
      continue;
    }
    const double ce = 1.0 / rho_p_tau_p;
    est.error_var(k) = ce;
    est.u_cond(k) = ce / (ce + b);
    est.c_cond(k) = 1.0 / (1.0 / ce + 1.0 / b);
  }
  return est;
}

ChannelEstimate ls_estimate(const CVector& h, const PilotBlock& pilot, std::span<const double> beta_bar,
                            RandomStream& rng) {
  if (!(pilot.pilot_power > 0.0)) throw Error(ErrorCode::InvalidParameter, "pilot power must be positive");
  const CVector y = observe_pilots(h, pilot, rng);
  return ChannelEstimate::from_estimate(ls_from_observation(y, pilot), beta_bar,
                                        pilot.pilot_power * pilot.tau_p());
}

double estimate_energy_law(std::span<const double> beta_bar, const PilotBlock& pilot) {
  if (beta_bar.size() != 1 || pilot.n_groups() != 1)
    throw Error(ErrorCode::Unsupported, "the estimate-energy law is only available for a single group");
  const double e = pilot.pilot_power * pilot.tau_p();
  return e / (e * beta_bar[0] + 1.0);
}

}  // namespace cellfree
