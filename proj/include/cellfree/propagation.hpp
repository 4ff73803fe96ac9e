#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cellfree/deployment.hpp"
#include "cellfree/grouping.hpp"
#include "cellfree/random.hpp"

namespace cellfree {

/// Three-slope COST-Hata parameters. Frequencies in MHz, heights in m,
/// distances in km.
struct PathLossParams {
  double carrier_mhz = 1900.0;
  double ap_height_m = 15.0;
  double terminal_height_m = 1.5;
  double reference_km = 1.0;
  double inner_km = 0.01;
  double outer_km = 0.05;

  void validate() const;
  /// COST-Hata loss at the reference distance.
  double reference_loss_db() const;
};

/// Path loss in dB; flat below inner_km, slope 20 dB/decade up to outer_km
/// and 35 dB/decade beyond.
double path_loss_db(double distance_km, const PathLossParams& params);

enum class ShadowMode { None, Uncorrelated, Correlated };

struct ShadowParams {
  ShadowMode mode = ShadowMode::None;
  double sigma_db = 8.0;
  /// Weight of the terminal-side component in the correlated model.
  double delta = 0.5;
  double decorrelation_km = 0.2;

  void validate() const;
};

/// Correlated shadow losses for one layout. The AP-side covariance
/// sigma^2 * 2^(-d/d_u) is factorized once at construction; sampling is then
/// a matrix-vector product.
class ShadowFieldSampler {
 public:
  ShadowFieldSampler(const NetworkLayout& layout, const ShadowParams& params);

  /// Per-AP losses in dB; draws the terminal component a from rng.
  std::vector<double> sample(RandomStream& rng) const;
  /// Per-AP losses in dB with a caller-supplied terminal component a (dB).
  std::vector<double> sample(RandomStream& rng, double terminal_component) const;

  const ShadowParams& params() const noexcept { return params_; }
  /// Lower Cholesky factor of the AP-side correlation matrix (empty unless
  /// the mode is correlated).
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  ShadowParams params_;
  std::size_t ap_count_ = 0;
  Eigen::MatrixXd factor_;
};

/// AP-side correlation matrix 2^(-d(m,m')/d_u).
Eigen::MatrixXd shadow_correlation(std::span<const Point> positions, double decorrelation_km);

std::vector<double> shadow_field(const NetworkLayout& layout, Point terminal, const ShadowParams& params,
                                 RandomStream& rng);

/// Terminal-side components a_k for several terminals, jointly Gaussian with
/// correlation 2^(-d(k,k')/d_u). Single-terminal runs do not need this.
std::vector<double> terminal_shadow_components(std::span<const Point> terminals, const ShadowParams& params,
                                               RandomStream& rng);

struct LargeScale {
  /// Linear large-scale coefficient per antenna.
  std::vector<double> beta;
  /// Sum of beta over each group.
  std::vector<double> beta_bar;
};

/// Per-antenna coefficients from path loss and per-AP shadow losses (dB).
/// Antennas of one AP share the AP's coefficient.
std::vector<double> antenna_betas(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                                  std::span<const double> shadow_db);

LargeScale large_scale(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                       const ShadowParams& shadow, const Grouping& grouping, RandomStream& rng);

LargeScale large_scale(const NetworkLayout& layout, Point terminal, const PathLossParams& path_loss,
                       std::span<const double> shadow_db, const Grouping& grouping);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace cellfree
