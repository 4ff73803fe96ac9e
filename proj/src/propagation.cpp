#include "cellfree/propagation.hpp"

#include <cmath>

#include "cellfree/error.hpp"

namespace cellfree {

void PathLossParams::validate() const {
  if (!(carrier_mhz > 0.0 && ap_height_m > 0.0 && terminal_height_m > 0.0 && reference_km > 0.0))
    throw Error(ErrorCode::InvalidParameter, "path-loss frequency, heights and reference distance must be positive");
  if (!(inner_km > 0.0 && inner_km < outer_km))
    throw Error(ErrorCode::InvalidParameter, "path-loss break points must satisfy 0 < d_i < d_o");
}

double PathLossParams::reference_loss_db() const {
  const double lf = std::log10(carrier_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height_m) - (1.1 * lf - 0.7) * terminal_height_m +
         1.56 * lf - 0.8;
}

double path_loss_db(double distance_km, const PathLossParams& p) {
  const double l = p.reference_loss_db();
  if (distance_km <= p.inner_km)
    return l + 15.0 * std::log10(p.outer_km / p.reference_km) + 20.0 * std::log10(p.inner_km / p.reference_km);
  if (distance_km <= p.outer_km)
    return l + 15.0 * std::log10(p.outer_km / p.reference_km) + 20.0 * std::log10(distance_km / p.reference_km);
  return l + 35.0 * std::log10(distance_km / p.reference_km);
}

void ShadowParams::validate() const {
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db))
    throw Error(ErrorCode::InvalidParameter, "shadow sigma must be non-negative");
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidParameter, "shadow delta must lie in [0, 1]");
  if (mode == ShadowMode::Correlated && !(decorrelation_km > 0.0))
    throw Error(ErrorCode::InvalidParameter, "decorrelation distance must be positive");
}

Eigen::MatrixXd shadow_correlation(std::span<const Point> positions, double decorrelation_km) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = distance(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(j)]);
      r(i, j) = r(j, i) = std::exp2(-d / decorrelation_km);
    }
  }
  return r;
}

namespace {

Eigen::MatrixXd factorize(Eigen::MatrixXd r) {
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Coincident or nearly coincident APs make the matrix singular.
  r.diagonal().array() += 1e-10;
  llt.compute(r);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::CovarianceFactorization, "shadow covariance is not positive definite after jitter");
  return llt.matrixL();
}

}  // namespace

ShadowFieldSampler::ShadowFieldSampler(const NetworkLayout& layout, const ShadowParams& params)
    : params_(params), ap_count_(layout.ap_count()) {
  params_.validate();
  if (params_.mode == ShadowMode::Correlated && ap_count_ > 0)
    factor_ = factorize(shadow_correlation(layout.positions, params_.decorrelation_km));
}

std::vector<double> ShadowFieldSampler::sample(RandomStream& rng) const {
  if (params_.mode != ShadowMode::Correlated) return sample(rng, 0.0);
  const double a = params_.sigma_db * rng.normal();
  return sample(rng, a);
}

std::vector<double> ShadowFieldSampler::sample(RandomStream& rng, double terminal_component) const {
  std::vector<double> v(ap_count_, 0.0);
  switch (params_.mode) {
    case ShadowMode::None:
      break;
    case ShadowMode::Uncorrelated:
      for (auto& x : v) x = params_.sigma_db * rng.normal();
      break;
    case ShadowMode::Correlated: {
      Eigen::VectorXd z(static_cast<Eigen::Index>(ap_count_));
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
      const Eigen::VectorXd b = (factor_.triangularView<Eigen::Lower>() * z) * params_.sigma_db;
      const double wa = std::sqrt(params_.delta);
      const double wb = std::sqrt(1.0 - params_.delta);
      for (std::size_t m = 0; m < ap_count_; ++m) v[m] = wa * terminal_component + wb * b(static_cast<Eigen::Index>(m));
      break;
    }
  }
  return v;
}

std::vector<double> shadow_field(const NetworkLayout& layout, Point /*terminal*/, const ShadowParams& params,
                                 RandomStream& rng) {
  return ShadowFieldSampler(layout, params).sample(rng);
}

std::vector<double> terminal_shadow_components(std::span<const Point> terminals, const ShadowParams& params,
                                               RandomStream& rng) {
  params.validate();
  std::vector<double> out(terminals.size(), 0.0);
  if (terminals.empty()) return out;
  const Eigen::MatrixXd l = factorize(shadow_correlation(terminals, params.decorrelation_km));
  Eigen::VectorXd z(static_cast<Eigen::Index>(terminals.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  const Eigen::VectorXd a = (l.triangularView<Eigen::Lower>() * z) * params.sigma_db;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a(static_cast<Eigen::Index>(k));
  return out;
}

std::vector<double> antenna_betas(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                                  std::span<const double> shadow_db) {
  if (shadow_db.size() != layout.ap_count())
    throw Error(ErrorCode::Dimension, "one shadow value per AP is required");
  std::vector<double> beta;
  beta.reserve(layout.antenna_count());
  for (std::size_t i = 0; i < layout.ap_count(); ++i) {
    const double loss = path_loss_db(distance(layout.positions[i], terminal), path_loss) + shadow_db[i];
    const double b = std::pow(10.0, -loss / 10.0);
    for (int j = 0; j < layout.antennas_per_ap; ++j) beta.push_back(b);
  }
  return beta;
}

LargeScale large_scale(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                       std::span<const double> shadow_db, const Grouping& grouping) {
  if (grouping.assignment.size() != layout.antenna_count())
    throw Error(ErrorCode::Dimension, "grouping must cover every antenna");
  LargeScale out;
  out.beta = antenna_betas(layout, terminal, path_loss, shadow_db);
  out.beta_bar = group_large_scale(out.beta, grouping);
  return out;
}

LargeScale large_scale(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                       const ShadowParams& shadow, const Grouping& grouping, RandomStream& rng) {
  path_loss.validate();
  const auto v = shadow_field(layout, terminal, shadow, rng);
  return large_scale(layout, terminal, path_loss, v, grouping);
}

}  // namespace cellfree
