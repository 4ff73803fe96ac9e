#pragma once

#include <optional>

#include "cellfree/deployment.hpp"
#include "cellfree/propagation.hpp"

namespace cellfree {

/// Pilot/data split of one coherence interval's energy budget:
/// rho_p tau_p + rho_d (tau_c - tau_p) = energy.
struct PowerPlan {
  double rho = 0.0;
  double energy = 0.0;
  int tau_p = 0;
  int tau_c = 0;
  double rho_p = 0.0;
  double rho_d = 0.0;
  /// Design point of the optimized plan.
  std::optional<Point> worst_position;
  std::optional<double> beta_worst;

  /// |rho_p tau_p + rho_d (tau_c - tau_p) - energy|.
  double budget_residual() const noexcept;
};

/// (E - rho_p tau_p) / (tau_c - tau_p).
double data_power(double energy, double rho_p, int tau_p, int tau_c);

/// rho_p = rho_d = rho.
PowerPlan uniform_power_plan(double rho, int tau_p, int tau_c);

/// Pilot power minimizing the single-group LS rate lambda_ls for a fixed
/// beta under the budget. Solved in closed form; falls back to a golden
/// section search if the closed form is not finite.
double optimal_pilot_power(double beta, double energy, int tau_p, int tau_c, double symbol_energy = 1.0);

/// Golden-section minimization of lambda_ls over rho_p in (0, E / tau_p).
double golden_section_pilot_power(double beta, double energy, int tau_p, int tau_c, double symbol_energy = 1.0,
                                  double rel_tol = 1e-10);

PowerPlan optimize_pilot_power_for_beta(double beta, double rho, int tau_p, int tau_c, double symbol_energy = 1.0);

struct OptimizeOptions {
  /// Grid step for the worst-position search; <= 0 means a tenth of the
  /// nominal AP spacing.
  double grid_resolution = 0.0;
  /// Region searched for the worst position; the layout's region if empty.
  std::optional<Region> search_region;
};

/// Heuristic plan: find the worst-served grid point, take its path-loss-only
/// beta summed over every antenna, and optimize rho_p for that beta.
PowerPlan optimize_pilot_power(const NetworkLayout& layout, const PathLossParams& path_loss, double rho, int tau_p,
                               int tau_c, double symbol_energy = 1.0, const OptimizeOptions& options = {});

}  // namespace cellfree
