#include <doctest.h>

#include <cmath>

#include "cellfree/deployment.hpp"
#include "cellfree/error.hpp"
#include "cellfree/harness.hpp"
#include "cellfree/power.hpp"
#include "cellfree/propagation.hpp"
#include "cellfree/snr.hpp"

using namespace cellfree;

namespace {

double lambda_at(double beta, double energy, double rho_p, int tau_p, int tau_c) {
  return lambda_ls(beta, rho_p, tau_p, data_power(energy, rho_p, tau_p, tau_c), 1.0);
}

}  // namespace

TEST_CASE("data power arithmetic") {
  const double rho = 2.5;
  CHECK(data_power(300 * rho, rho, 1, 300) == doctest::Approx(rho));
  CHECK(data_power(300 * rho, 100 * rho, 1, 300) == doctest::Approx(200 * rho / 299));
  CHECK(data_power(10.0, 10.0 * (1 - 1e-12), 1, 300) > 0.0);
  CHECK(data_power(10.0, 10.0 * (1 - 1e-9), 1, 300) < 1e-9);
  CHECK_THROWS_AS(data_power(10.0, 10.0, 1, 300), Error);
  CHECK_THROWS_AS(data_power(10.0, 1.0, 300, 300), Error);
}

TEST_CASE("closed-form pilot power matches golden-section search") {
  const double rho = normalized_power(ScenarioConfig{});
  for (double beta_db : {-130.0, -115.0, -105.0, -95.0, -80.0}) {
    for (int tau_p : {1, 2, 4, 10}) {
      const double beta = db_to_linear(beta_db);
      const double energy = rho * 300;
      const double closed = optimal_pilot_power(beta, energy, tau_p, 300);
      const double golden = golden_section_pilot_power(beta, energy, tau_p, 300);
      CHECK(closed == doctest::Approx(golden).epsilon(1e-3));
      CHECK(lambda_at(beta, energy, closed, tau_p, 300) <= lambda_at(beta, energy, rho, tau_p, 300));
    }
  }
}

TEST_CASE("lambda along the budget line is unimodal; grid scan agrees") {
  const double rho = normalized_power(ScenarioConfig{});
  const double beta = db_to_linear(-110.0);
  const double energy = rho * 300;
  const double best = optimal_pilot_power(beta, energy, 1, 300);
  int sign_changes = 0;
  double prev = lambda_at(beta, energy, energy * 1e-6, 1, 300);
  double prev_diff = -1.0;
  double grid_best = 0.0, grid_val = 1e300;
  for (int i = 1; i < 4000; ++i) {
    const double rp = energy * std::pow(10.0, -6.0 + 6.0 * i / 4000.0) * (1 - 1e-9);
    const double v = lambda_at(beta, energy, rp, 1, 300);
    const double diff = v - prev;
    if ((diff > 0) != (prev_diff > 0)) ++sign_changes;
    if (v < grid_val) grid_val = v, grid_best = rp;
    prev = v;
    prev_diff = diff;
  }
  CHECK(sign_changes == 1);
  CHECK(std::abs(std::log(grid_best / best)) < 6.0 * std::log(10.0) / 4000.0 * 1.01);
}

TEST_CASE("optimized plan on the default scenario puts more power into pilots") {
  const ScenarioConfig cfg;
  const double rho = normalized_power(cfg);
  RandomStream rng(1, StreamPurpose::Layout);
  const auto layout = place_ppp(20.0, Region{2.0}, rng);
  const auto plan = optimize_pilot_power(layout, PathLossParams{}, rho, 1, 300, 1.0, {0.0, Region{1.0}});
  CHECK(plan.rho_p > plan.rho_d);
  CHECK(plan.budget_residual() <= 1e-12 * plan.energy);
  REQUIRE(plan.worst_position);
  REQUIRE(plan.beta_worst);
  double beta = 0.0;
  for (auto p : layout.positions) beta += db_to_linear(-path_loss_db(distance(p, *plan.worst_position), PathLossParams{}));
  CHECK(*plan.beta_worst == doctest::Approx(beta));
  const double golden = golden_section_pilot_power(beta, plan.energy, 1, 300);
  CHECK(plan.rho_p == doctest::Approx(golden).epsilon(1e-3));
}

TEST_CASE("budget identity for uniform and optimized plans") {
  const auto u = uniform_power_plan(7.0, 3, 200);
  CHECK(u.budget_residual() == 0.0);
  const auto o = optimize_pilot_power_for_beta(1e-3, 7.0, 3, 200);
  CHECK(o.budget_residual() <= 1e-12 * o.energy);
  CHECK(o.rho_p > 0.0);
  CHECK(o.rho_d > 0.0);
  NetworkLayout empty;
  CHECK_THROWS_AS(optimize_pilot_power(empty, PathLossParams{}, 1.0, 1, 300), Error);
}
