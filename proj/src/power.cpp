#include "cellfree/power.hpp"

#include <cmath>

#include "cellfree/error.hpp"
#include "cellfree/snr.hpp"

namespace cellfree {

namespace {

void check_lengths(int tau_p, int tau_c) {
  if (tau_p <= 0 || tau_p >= tau_c)
    throw Error(ErrorCode::InvalidParameter, "need 0 < tau_p < tau_c (tau_p=" + std::to_string(tau_p) +
                                                 ", tau_c=" + std::to_string(tau_c) + ")");
}

double lambda_for_pilot(double beta, double energy, double rho_p, int tau_p, int tau_c, double es) {
  return lambda_ls(beta, rho_p, tau_p, data_power(energy, rho_p, tau_p, tau_c), es);
}

}  // namespace

double PowerPlan::budget_residual() const noexcept {
  return std::abs(rho_p * tau_p + rho_d * (tau_c - tau_p) - energy);
}

double data_power(double energy, double rho_p, int tau_p, int tau_c) {
  check_lengths(tau_p, tau_c);
  if (!(rho_p > 0.0)) throw Error(ErrorCode::InvalidParameter, "pilot power must be positive");
  const double left = energy - rho_p * tau_p;
  if (!(left > 0.0)) throw Error(ErrorCode::BudgetExhausted, "pilots consume the whole energy budget");
  return left / (tau_c - tau_p);
}

PowerPlan uniform_power_plan(double rho, int tau_p, int tau_c) {
  check_lengths(tau_p, tau_c);
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidParameter, "power must be positive");
  PowerPlan plan;
  plan.rho = rho;
  plan.energy = rho * tau_c;
  plan.tau_p = tau_p;
  plan.tau_c = tau_c;
  plan.rho_p = rho;
  plan.rho_d = rho;
  return plan;
}

// With x = rho_p tau_p, k = E_s / (tau_c - tau_p) and rho_d E_s = k (E - x),
// lambda is proportional to (1 + b k E + b x (1 - k)) / (x (E - x)).
// Setting the derivative to zero gives
//   b (1-k) x^2 + 2 b0 x - b0 E = 0,   b0 = 1 + b k E,
// whose root in (0, E) is x = b0 E / (b0 + sqrt(b0 (b0 + b (1-k) E))).
// b0 + b (1-k) E = 1 + b E, so the discriminant is always positive.
double optimal_pilot_power(double beta, double energy, int tau_p, int tau_c, double symbol_energy) {
  check_lengths(tau_p, tau_c);
  if (!(beta > 0.0) || !(energy > 0.0) || !(symbol_energy > 0.0))
    throw Error(ErrorCode::InvalidParameter, "beta, energy and symbol energy must be positive");
  const double k = symbol_energy / (tau_c - tau_p);
  const double b0 = 1.0 + beta * k * energy;
  const double x = b0 * energy / (b0 + std::sqrt(b0 * (1.0 + beta * energy)));
  if (std::isfinite(x) && x > 0.0 && x < energy) return x / tau_p;
  return golden_section_pilot_power(beta, energy, tau_p, tau_c, symbol_energy);
}

double golden_section_pilot_power(double beta, double energy, int tau_p, int tau_c, double symbol_energy,
                                  double rel_tol) {
  check_lengths(tau_p, tau_c);
  // Search in log(rho_p): lambda spans many decades for large beta * E.
  const double hi_p = energy / tau_p;
  double lo = std::log(hi_p * 1e-15);
  double hi = std::log(hi_p * (1.0 - 1e-12));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return lambda_for_pilot(beta, energy, std::exp(t), tau_p, tau_c, symbol_energy); };
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > rel_tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

PowerPlan optimize_pilot_power_for_beta(double beta, double rho, int tau_p, int tau_c, double symbol_energy) {
  PowerPlan plan = uniform_power_plan(rho, tau_p, tau_c);
  plan.rho_p = optimal_pilot_power(beta, plan.energy, tau_p, tau_c, symbol_energy);
  plan.rho_d = data_power(plan.energy, plan.rho_p, tau_p, tau_c);
  plan.beta_worst = beta;
  return plan;
}

PowerPlan optimize_pilot_power(const NetworkLayout& layout, const PathLossParams& path_loss, double rho, int tau_p,
                               int tau_c, double symbol_energy, const OptimizeOptions& options) {
  if (layout.ap_count() == 0) throw Error(ErrorCode::NoAccessPoints, "cannot optimize power without APs");
  const double res = options.grid_resolution > 0.0 ? options.grid_resolution : nominal_spacing(layout) / 10.0;
  const Point worst = options.search_region ? worst_position(layout, res, *options.search_region)
                                            : worst_position(layout, res);
  double beta = 0.0;
  for (const Point& p : layout.positions) {
    beta += layout.antennas_per_ap * db_to_linear(-path_loss_db(distance(p, worst), path_loss));
  }
  PowerPlan plan = optimize_pilot_power_for_beta(beta, rho, tau_p, tau_c, symbol_energy);
  plan.worst_position = worst;
  return plan;
}

}  // namespace cellfree
