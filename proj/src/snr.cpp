#include "cellfree/snr.hpp"

#include <algorithm>
#include <cmath>

#include "cellfree/error.hpp"

namespace cellfree {

SnrSample snr_perfect(const CVector& h, double rho, double symbol_energy) {
  if (!(rho > 0.0) || !(symbol_energy > 0.0))
    throw Error(ErrorCode::InvalidParameter, "power and symbol energy must be positive");
  return {rho * symbol_energy * h.squaredNorm(), CsiMode::Perfect, h};
}

double psi(const OstbcCode& code, const CMatrix& c, const CMatrix& q, const CVector& h_hat) {
  CMatrix inner = CMatrix::Zero(code.block_len(), code.block_len());
  for (int k = 0; k < code.n_symbols(); ++k) {
    inner += code.a(k) * q * code.a(k).adjoint() + code.b(k) * q * code.b(k).adjoint();
  }
  const CVector ch = c * h_hat;
  return ch.dot(inner * ch).real();
}

double psi_bar(const OstbcCode& code, const CMatrix& c, const CMatrix& q, const CVector& h_hat) {
  CMatrix inner = CMatrix::Zero(code.block_len(), code.block_len());
  for (int k = 0; k < code.n_symbols(); ++k) {
    inner += code.a(k) * q * code.a(k).transpose() - code.b(k) * q * code.b(k).transpose();
  }
  const CVector left = c * h_hat;
  const CVector right = c.conjugate() * h_hat.conjugate();
  return left.dot(inner * right).real();
}

ConditionalSnrTerms conditional_snr_terms(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate,
                               double rho_d, double symbol_energy) {
  if (symbol_index < 0 || symbol_index >= code.n_symbols())
    throw Error(ErrorCode::Dimension, "symbol index out of range");
  if (estimate.n_groups() != code.n_groups())
    throw Error(ErrorCode::Dimension, "estimate has " + std::to_string(estimate.n_groups()) +
                                          " groups, code expects " + std::to_string(code.n_groups()));
  const CVector& hh = estimate.h_hat;
  const CMatrix u = estimate.u_cond.cast<Complex>().asDiagonal();
  const CMatrix cc = estimate.c_cond.cast<Complex>().asDiagonal();
  const CMatrix& an = code.a(symbol_index);
  const CMatrix& bn = code.b(symbol_index);

  ConditionalSnrTerms t;
  const CVector uh = u * hh;
  const Complex quad = hh.dot(uh);
  const Complex cross = hh.dot(an.adjoint() * bn * uh);
  t.c_n = -std::sqrt(rho_d) * Complex(quad.real(), cross.imag());
  t.z_power = hh.squaredNorm();
  t.q1 = uh * uh.adjoint() + cc;
  t.q2 = uh * uh.transpose();
  t.eta_power = rho_d * symbol_energy / 4.0 *
                (psi(code, an, t.q1, hh) + psi_bar(code, an, t.q2, hh) + psi(code, bn, t.q1, hh) -
                 psi_bar(code, bn, t.q2, hh));
  return t;
}

SnrSample snr_ls(const OstbcCode& code, int symbol_index, const ChannelEstimate& estimate, double rho_d,
                 double symbol_energy) {
  const ConditionalSnrTerms t = conditional_snr_terms(code, symbol_index, estimate, rho_d, symbol_energy);
  const double num = symbol_energy * std::norm(std::sqrt(rho_d) * t.z_power + t.c_n);
  const double den = t.eta_power + t.z_power - symbol_energy * std::norm(t.c_n);
  if (!(den > 0.0)) {
    if (t.z_power == 0.0) return {0.0, CsiMode::LeastSquares, estimate.h_hat};
    throw Error(ErrorCode::NumericalDegeneracy, "non-positive LS noise power");
  }
  return {num / den, CsiMode::LeastSquares, estimate.h_hat};
}

SnrSample snr_ls_block(const OstbcCode& code, const ChannelEstimate& estimate, double rho_d, double symbol_energy) {
  SnrSample worst = snr_ls(code, 0, estimate, rho_d, symbol_energy);
  for (int n = 1; n < code.n_symbols(); ++n) {
    SnrSample s = snr_ls(code, n, estimate, rho_d, symbol_energy);
    if (s.value < worst.value) worst = std::move(s);
  }
  return worst;
}

double lambda_ls(double beta_bar, double rho_p, double tau_p, double rho_d, double symbol_energy) {
  if (!(beta_bar > 0.0) || !(rho_p > 0.0) || !(tau_p > 0.0) || !(rho_d > 0.0) || !(symbol_energy > 0.0))
    throw Error(ErrorCode::InvalidParameter, "lambda_ls arguments must be positive");
  const double pilot = rho_p * tau_p;
  const double data = rho_d * symbol_energy;
  return (1.0 + beta_bar * (pilot + data)) / (data * pilot * beta_bar * beta_bar);
}

double lambda_perfect(double beta_bar, double rho, double symbol_energy) {
  if (!(beta_bar > 0.0) || !(rho > 0.0) || !(symbol_energy > 0.0))
    throw Error(ErrorCode::InvalidParameter, "lambda_perfect arguments must be positive");
  return 1.0 / (rho * symbol_energy * beta_bar);
}

std::vector<double> lambda_perfect(std::span<const double> beta_bar, double rho, double symbol_energy) {
  std::vector<double> out;
  out.reserve(beta_bar.size());
  for (double b : beta_bar) out.push_back(lambda_perfect(b, rho, symbol_energy));
  return out;
}

SnrSample snr_mrc(std::span<const SnrSample> branches) {
  if (branches.empty()) throw Error(ErrorCode::InvalidParameter, "MRC needs at least one branch");
  SnrSample out = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i) {
    if (branches[i].csi_mode != out.csi_mode)
      throw Error(ErrorCode::InvalidParameter, "MRC branches must share a CSI mode");
    out.value += branches[i].value;
  }
  return out;
}

}  // namespace cellfree
