#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellfree/deployment.hpp"
#include "cellfree/grouping.hpp"
#include "cellfree/metrics.hpp"
#include "cellfree/power.hpp"
#include "cellfree/propagation.hpp"
#include "cellfree/snr.hpp"

namespace cellfree {

enum class GroupingStrategy { Random, Neighbor };
enum class PowerStrategy { Uniform, Optimized };
/// Pooled: one outage threshold over every outer and inner draw.
/// PerRealization: one conditional threshold (and rate) per outer draw.
enum class MetricMode { Pooled, PerRealization };

struct ScenarioConfig {
  std::string name = "custom";
  DeploymentKind deployment = DeploymentKind::Ppp;
  /// APs per km^2.
  double density = 20.0;
  double region_half_width = 2.0;
  int antennas_per_ap = 1;
  ShadowMode shadow = ShadowMode::None;
  double shadow_sigma_db = 8.0;
  double shadow_delta = 0.5;
  double shadow_decorrelation_km = 0.2;
  /// "single", "alamouti" or "rate34".
  std::string code = "single";
  GroupingStrategy grouping = GroupingStrategy::Random;
  CsiMode csi = CsiMode::Perfect;
  int tau_c = 300;
  int tau_p = 1;
  PowerStrategy power = PowerStrategy::Uniform;
  int rx_antennas = 1;
  double epsilon = 1e-2;
  std::uint64_t outer = 1000;
  std::uint64_t inner = 100;
  std::uint64_t seed = 1;
  double power_mw = 1.0;
  double bandwidth_hz = 2e5;
  double temperature_k = 300.0;
  double noise_figure_db = 9.0;
  double terminal_x = 0.0;
  double terminal_y = 0.0;
  /// Worst-position search covers this fraction of the region half-width.
  double power_search_fraction = 0.5;
  /// Fixed layout drawn once from this seed instead of once per outer draw.
  std::optional<std::uint64_t> layout_seed;
  /// Fixed layout read from a CSV file; takes precedence over layout_seed.
  std::string layout_file;
  MetricMode metric = MetricMode::Pooled;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// rho = p / (B T k_B F) with p in W and F in dB.
double normalized_power(double power_watt, double bandwidth_hz, double temperature_k, double noise_figure_db);
double normalized_power(const ScenarioConfig& config);

/// Throws InvalidParameter / Infeasible on inconsistent settings.
void validate_scenario(const ScenarioConfig& config);

struct RunOptions {
  /// Worker threads; 0 means all hardware threads.
  unsigned threads = 0;
  /// Keep the grouping of every outer draw in the result.
  bool record_groupings = false;
};

enum class SampleKind { Snr, Rate };

struct RunResult {
  ScenarioConfig config;
  SampleKind kind = SampleKind::Snr;
  /// Pooled: outer-major SNR samples (outer * inner). Per-realization: one
  /// rate per outer draw.
  std::vector<double> samples;
  OutageResult outage;
  /// "analytic-mixture", "empirical" or "per-realization".
  std::string method;
  std::uint64_t config_hash = 0;
  double wall_seconds = 0.0;
  /// One plan per outer draw (a single entry when the layout is fixed).
  std::vector<PowerPlan> plans;
  std::vector<Grouping> groupings;
  /// Conditional thresholds per outer draw (per-realization mode only).
  std::vector<double> conditional_gamma;
};

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Layout and grouping used by outer draw `outer_index` of a scenario.
struct Realization {
  NetworkLayout layout;
  Grouping grouping;
};
Realization draw_realization(const ScenarioConfig& config, std::uint64_t outer_index);

/// FNV-1a over the canonical config text.
std::uint64_t config_hash(const ScenarioConfig& config);

struct Experiment {
  std::string name;
  std::string description;
  std::vector<ScenarioConfig> variants;
};

/// Presets for every experiment, in a fixed order.
const std::vector<Experiment>& experiment_catalog();
/// Throws InvalidParameter for unknown names.
const Experiment& experiment(const std::string& name);
std::vector<std::string> experiment_names();

}  // namespace cellfree
