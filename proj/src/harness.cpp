#include "cellfree/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "cellfree/channel.hpp"
#include "cellfree/config.hpp"
#include "cellfree/error.hpp"
#include "cellfree/layout_io.hpp"
#include "cellfree/ostbc.hpp"
#include "cellfree/stats.hpp"

namespace cellfree {

namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kSymbolEnergy = 1.0;
constexpr double kZ95 = 1.959963984540054;

// Everything that stays fixed across outer draws when the layout is fixed.
struct FixedLayout {
  NetworkLayout layout;
  std::optional<Grouping> neighbor;
  std::optional<PowerPlan> plan;
  std::unique_ptr<ShadowFieldSampler> sampler;
};

struct OuterOutcome {
  std::vector<double> samples;
  /// Rates of the conditional exponential / hyperexponential law.
  std::vector<double> lambdas;
  bool analytic = false;
  bool no_service = false;
  PowerPlan plan;
  Grouping grouping;
};

bool fast_path(const ScenarioConfig& c, int n_groups) {
  return c.rx_antennas == 1 && (c.csi == CsiMode::Perfect || n_groups == 1);
}

Region region_of(const ScenarioConfig& c) { return Region{c.region_half_width}; }

NetworkLayout draw_layout(const ScenarioConfig& c, RandomStream& rng) {
  if (c.deployment == DeploymentKind::Hexagonal) {
    return place_hex(c.density, region_of(c), random_hex_phase(c.density, rng), c.antennas_per_ap);
  }
  return place_ppp(c.density, region_of(c), rng, c.antennas_per_ap);
}

PowerPlan perfect_csi_plan(double rho, int tau_c) {
  PowerPlan plan;
  plan.rho = rho;
  plan.energy = rho * tau_c;
  plan.tau_p = 0;
  plan.tau_c = tau_c;
  plan.rho_p = 0.0;
  plan.rho_d = rho;
  return plan;
}

PowerPlan make_plan(const ScenarioConfig& c, const NetworkLayout& layout, double rho, const PathLossParams& pl) {
  if (c.csi == CsiMode::Perfect) return perfect_csi_plan(rho, c.tau_c);
  if (c.power == PowerStrategy::Uniform) return uniform_power_plan(rho, c.tau_p, c.tau_c);
  OptimizeOptions opt;
  opt.search_region = Region{c.region_half_width * c.power_search_fraction};
  return optimize_pilot_power(layout, pl, rho, c.tau_p, c.tau_c, kSymbolEnergy, opt);
}

double lower_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::floor(std::clamp(p, 0.0, 1.0) * static_cast<double>(v.size() - 1)));
  return v[idx];
}

double conditional_coverage(const OuterOutcome& o, double gamma) {
  if (gamma <= 0.0) return 1.0;
  if (o.no_service) return 0.0;
  if (o.analytic) return coverage_perfect(gamma, o.lambdas);
  std::size_t above = 0;
  for (double s : o.samples) above += s >= gamma ? 1 : 0;
  return static_cast<double>(above) / static_cast<double>(o.samples.size());
}

OuterOutcome run_outer(const ScenarioConfig& c, const OstbcCode& code, const PathLossParams& pl, double rho,
                       const FixedLayout* fixed, std::uint64_t i) {
  RandomStream layout_rng(c.seed, StreamPurpose::Layout, i);
  RandomStream group_rng(c.seed, StreamPurpose::Grouping, i);
  RandomStream shadow_rng(c.seed, StreamPurpose::Shadow, i);
  RandomStream small_rng(c.seed, StreamPurpose::SmallScale, i);
  const int ng = code.n_groups();

  OuterOutcome out;
  NetworkLayout drawn;
  if (!fixed) drawn = draw_layout(c, layout_rng);
  const NetworkLayout& layout = fixed ? fixed->layout : drawn;

  if (layout.antenna_count() < static_cast<std::size_t>(ng) || layout.ap_count() == 0) {
    out.no_service = true;
    out.plan = c.csi == CsiMode::Perfect ? perfect_csi_plan(rho, c.tau_c) : uniform_power_plan(rho, c.tau_p, c.tau_c);
    out.samples.assign(c.inner, 0.0);
    return out;
  }

  if (ng == 1) {
    out.grouping = single_group(layout.antenna_count());
  } else if (c.grouping == GroupingStrategy::Neighbor) {
    out.grouping = fixed ? *fixed->neighbor : neighbor_grouping(layout, ng);
  } else {
    out.grouping = random_grouping(layout.antenna_count(), ng, group_rng);
  }

  out.plan = (fixed && fixed->plan) ? *fixed->plan : make_plan(c, layout, rho, pl);

  std::vector<double> shadow_db(layout.ap_count(), 0.0);
  if (c.shadow != ShadowMode::None) {
    if (fixed) {
      shadow_db = fixed->sampler->sample(shadow_rng);
    } else {
      const ShadowParams sp{c.shadow, c.shadow_sigma_db, c.shadow_delta, c.shadow_decorrelation_km};
      shadow_db = ShadowFieldSampler(layout, sp).sample(shadow_rng);
    }
  }
  const LargeScale ls = large_scale(layout, Point{c.terminal_x, c.terminal_y}, pl, shadow_db, out.grouping);
  const std::vector<double>& beta_bar = ls.beta_bar;

  const double rho_d = out.plan.rho_d;
  std::optional<PilotBlock> pilot;
  if (c.csi == CsiMode::LeastSquares) pilot = make_pilot_block(c.tau_p, ng, out.plan.rho_p);

  out.samples.reserve(c.inner);
  for (std::uint64_t j = 0; j < c.inner; ++j) {
    double total = 0.0;
    for (int r = 0; r < c.rx_antennas; ++r) {
      const EffectiveChannel ch = draw_effective_channel(beta_bar, small_rng);
      if (c.csi == CsiMode::Perfect) {
        total += snr_perfect(ch.h, rho_d, kSymbolEnergy).value;
      } else {
        const ChannelEstimate est = ls_estimate(ch.h, *pilot, beta_bar, small_rng);
        total += snr_ls_block(code, est, rho_d, kSymbolEnergy).value;
      }
    }
    out.samples.push_back(total);
  }

  if (fast_path(c, ng)) {
    if (c.csi == CsiMode::Perfect) {
      out.lambdas = lambda_perfect(beta_bar, rho_d, kSymbolEnergy);
      try {
        (void)coverage_perfect(1.0, out.lambdas);
        out.analytic = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateRates) throw;
        out.analytic = false;
      }
    } else {
      out.lambdas = {lambda_ls(beta_bar[0], out.plan.rho_p, c.tau_p, rho_d, kSymbolEnergy)};
      out.analytic = true;
    }
  }
  return out;
}

std::vector<OuterOutcome> run_outer_loop(const ScenarioConfig& c, const OstbcCode& code, const PathLossParams& pl,
                                         double rho, const FixedLayout* fixed, unsigned threads) {
  std::vector<OuterOutcome> outcomes(c.outer);
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, c.outer));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= c.outer) return;
      try {
        outcomes[i] = run_outer(c, code, pl, rho, fixed, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(c.outer);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

double effective_tau_p(const ScenarioConfig& c) { return c.csi == CsiMode::Perfect ? 0 : c.tau_p; }

void summarize_pooled(const ScenarioConfig& c, const OstbcCode& code, const std::vector<OuterOutcome>& outcomes,
                      RunResult& result) {
  const int tau_p = static_cast<int>(effective_tau_p(c));
  const double target = 1.0 - c.epsilon;
  OutageResult& o = result.outage;
  o.epsilon = c.epsilon;

  if (fast_path(c, code.n_groups())) {
    result.method = "analytic-mixture";
    const double n = static_cast<double>(outcomes.size());
    o.n_trials = outcomes.size();
    const auto dark = std::count_if(outcomes.begin(), outcomes.end(), [](const OuterOutcome& oc) { return oc.no_service; });
    if (static_cast<double>(dark) >= c.epsilon * n) {
      // P(SNR = 0) already reaches epsilon.
      o.gamma_eps = 0.0;
      o.rate_bpcu = 0.0;
      o.ci_halfwidth = 0.0;
      return;
    }
    auto mean_cov = [&](double g) {
      double s = 0.0;
      for (const auto& oc : outcomes) s += conditional_coverage(oc, g);
      return s / n;
    };
    auto banded = [&](double g, double sign) {
      stats::Accumulator acc;
      for (const auto& oc : outcomes) acc.add(conditional_coverage(oc, g));
      return acc.mean() + sign * kZ95 * acc.std_error();
    };
    double guess = 0.0;
    for (const auto& oc : outcomes) guess = std::max(guess, oc.samples.empty() ? 0.0 : oc.samples.front());
    guess = guess > 0.0 ? guess : 1.0;
    o.gamma_eps = invert_coverage(mean_cov, target, guess);
    const double g_lo = invert_coverage([&](double g) { return banded(g, -1.0); }, target, guess);
    const double g_hi = invert_coverage([&](double g) { return banded(g, +1.0); }, target, guess);
    o.n_trials = outcomes.size();
    o.rate_bpcu = outage_rate(o.gamma_eps, tau_p, c.tau_c, code);
    o.ci_halfwidth =
        0.5 * (outage_rate(g_hi, tau_p, c.tau_c, code) - outage_rate(g_lo, tau_p, c.tau_c, code));
    return;
  }

  result.method = "empirical";
  const QuantileEstimate q = quantile_threshold(result.samples, c.epsilon);
  o.gamma_eps = q.value;
  o.n_trials = q.n;
  o.rate_bpcu = outage_rate(q.value, tau_p, c.tau_c, code);
  o.ci_halfwidth = 0.5 * (outage_rate(q.upper, tau_p, c.tau_c, code) - outage_rate(q.lower, tau_p, c.tau_c, code));
}

void summarize_per_realization(const ScenarioConfig& c, const OstbcCode& code,
                               const std::vector<OuterOutcome>& outcomes, RunResult& result) {
  const int tau_p = static_cast<int>(effective_tau_p(c));
  const double target = 1.0 - c.epsilon;
  result.method = "per-realization";
  result.kind = SampleKind::Rate;
  result.samples.clear();
  for (const auto& oc : outcomes) {
    double gamma = 0.0;
    if (oc.no_service) {
      gamma = 0.0;
    } else if (oc.analytic && oc.lambdas.size() == 1) {
      gamma = -std::log(target) / oc.lambdas[0];
    } else if (oc.analytic) {
      gamma = invert_coverage([&](double g) { return coverage_perfect(g, oc.lambdas); }, target,
                              1.0 / *std::max_element(oc.lambdas.begin(), oc.lambdas.end()));
    } else {
      gamma = lower_quantile(oc.samples, c.epsilon);
    }
    result.conditional_gamma.push_back(gamma);
    result.samples.push_back(outage_rate(gamma, tau_p, c.tau_c, code));
  }
  OutageResult& o = result.outage;
  o.epsilon = c.epsilon;
  o.n_trials = outcomes.size();
  o.gamma_eps = lower_quantile(result.conditional_gamma, 0.5);
  o.rate_bpcu = outage_rate(o.gamma_eps, tau_p, c.tau_c, code);
  const double half = kZ95 * std::sqrt(0.25 / static_cast<double>(outcomes.size()));
  o.ci_halfwidth = 0.5 * (lower_quantile(result.samples, 0.5 + half) - lower_quantile(result.samples, 0.5 - half));
}

}  // namespace

double normalized_power(double power_watt, double bandwidth_hz, double temperature_k, double noise_figure_db) {
  if (!(power_watt > 0.0) || !(bandwidth_hz > 0.0) || !(temperature_k > 0.0))
    throw Error(ErrorCode::InvalidParameter, "power, bandwidth and temperature must be positive");
  return power_watt / (bandwidth_hz * temperature_k * kBoltzmann * db_to_linear(noise_figure_db));
}

double normalized_power(const ScenarioConfig& c) {
  return normalized_power(c.power_mw * 1e-3, c.bandwidth_hz, c.temperature_k, c.noise_figure_db);
}

void validate_scenario(const ScenarioConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (c.name.empty()) fail("scenario name must not be empty");
  if (c.name.find_first_of(", \t\r\n#\"") != std::string::npos)
    fail("scenario name must not contain commas, quotes, '#' or whitespace");
  if (c.deployment == DeploymentKind::Hexagonal ? !(c.density > 0.0) : !(c.density >= 0.0))
    fail("density must be positive (hexagonal) or non-negative (ppp)");
  if (!(c.region_half_width > 0.0)) fail("region_half_width must be positive");
  if (c.antennas_per_ap < 1) fail("antennas_per_ap must be at least 1");
  ShadowParams{c.shadow, c.shadow_sigma_db, c.shadow_delta, c.shadow_decorrelation_km}.validate();
  const OstbcCode code = OstbcCode::from_name(c.code);
  if (c.tau_c < 2) fail("tau_c must be at least 2");
  if (c.csi == CsiMode::LeastSquares) {
    if (c.tau_p < code.n_groups())
      throw Error(ErrorCode::Infeasible, "tau_p must be at least the number of groups (" +
                                             std::to_string(code.n_groups()) + ") with LS estimation");
    if (c.tau_p >= c.tau_c) fail("tau_p must be smaller than tau_c");
  } else if (c.power == PowerStrategy::Optimized) {
    fail("optimized pilot power needs csi=ls");
  }
  if (c.rx_antennas < 1) fail("rx_antennas must be at least 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (c.outer < 1 || c.inner < 1) fail("outer and inner must be at least 1");
  if (c.metric == MetricMode::Pooled) {
    if (c.outer * c.inner < min_samples_for(c.epsilon))
      throw Error(ErrorCode::SampleSize, "outer*inner must be at least " +
                                             std::to_string(min_samples_for(c.epsilon)) + " for epsilon=" +
                                             std::to_string(c.epsilon));
  } else if (!fast_path(c, code.n_groups()) && c.inner < min_samples_for(c.epsilon)) {
    throw Error(ErrorCode::SampleSize, "per-realization thresholds need inner >= " +
                                           std::to_string(min_samples_for(c.epsilon)));
  }
  if (!(c.power_mw > 0.0) || !(c.bandwidth_hz > 0.0) || !(c.temperature_k > 0.0))
    fail("power, bandwidth and temperature must be positive");
  if (!std::isfinite(c.noise_figure_db)) fail("noise figure must be finite");
  if (!(c.power_search_fraction > 0.0 && c.power_search_fraction <= 1.0))
    fail("power_search_fraction must lie in (0, 1]");
  if (!region_of(c).contains(Point{c.terminal_x, c.terminal_y})) fail("terminal must lie inside the region");
}

Realization draw_realization(const ScenarioConfig& config, std::uint64_t outer_index) {
  validate_scenario(config);
  const OstbcCode code = OstbcCode::from_name(config.code);
  const int ng = code.n_groups();
  Realization r;
  if (!config.layout_file.empty()) {
    r.layout = load_layout_csv(config.layout_file, region_of(config));
  } else if (config.layout_seed) {
    RandomStream rng(*config.layout_seed, StreamPurpose::Layout, 0);
    r.layout = draw_layout(config, rng);
  } else {
    RandomStream rng(config.seed, StreamPurpose::Layout, outer_index);
    r.layout = draw_layout(config, rng);
  }
  if (r.layout.antenna_count() < static_cast<std::size_t>(ng) || r.layout.ap_count() == 0) {
    r.grouping = Grouping{std::vector<int>(r.layout.antenna_count(), 0), ng};
    return r;
  }
  RandomStream group_rng(config.seed, StreamPurpose::Grouping, outer_index);
  if (ng == 1) {
    r.grouping = single_group(r.layout.antenna_count());
  } else if (config.grouping == GroupingStrategy::Neighbor) {
    r.grouping = neighbor_grouping(r.layout, ng);
  } else {
    r.grouping = random_grouping(r.layout.antenna_count(), ng, group_rng);
  }
  return r;
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  validate_scenario(config);
  const auto start = std::chrono::steady_clock::now();
  const OstbcCode code = OstbcCode::from_name(config.code);
  const PathLossParams pl{};
  const double rho = normalized_power(config);

  std::unique_ptr<FixedLayout> fixed;
  if (!config.layout_file.empty() || config.layout_seed) {
    fixed = std::make_unique<FixedLayout>();
    if (!config.layout_file.empty()) {
      fixed->layout = load_layout_csv(config.layout_file, region_of(config));
      if (fixed->layout.antennas_per_ap != config.antennas_per_ap)
        throw Error(ErrorCode::InvalidParameter, "layout file antenna count differs from antennas_per_ap");
    } else {
      RandomStream rng(*config.layout_seed, StreamPurpose::Layout, 0);
      fixed->layout = draw_layout(config, rng);
    }
    fixed->layout.kind = config.deployment;
    const int ng = code.n_groups();
    const bool servable = fixed->layout.ap_count() > 0 && fixed->layout.antenna_count() >= static_cast<std::size_t>(ng);
    if (servable) {
      if (ng > 1 && config.grouping == GroupingStrategy::Neighbor)
        fixed->neighbor = neighbor_grouping(fixed->layout, ng);
      fixed->plan = make_plan(config, fixed->layout, rho, pl);
      if (config.shadow != ShadowMode::None) {
        fixed->sampler = std::make_unique<ShadowFieldSampler>(
            fixed->layout,
            ShadowParams{config.shadow, config.shadow_sigma_db, config.shadow_delta, config.shadow_decorrelation_km});
      }
    }
  }

  std::vector<OuterOutcome> outcomes = run_outer_loop(config, code, pl, rho, fixed.get(), options.threads);

  RunResult result;
  result.config = config;
  result.config_hash = config_hash(config);
  result.samples.reserve(config.outer * config.inner);
  for (const auto& oc : outcomes) result.samples.insert(result.samples.end(), oc.samples.begin(), oc.samples.end());

  if (config.metric == MetricMode::Pooled) {
    summarize_pooled(config, code, outcomes, result);
  } else {
    summarize_per_realization(config, code, outcomes, result);
  }

  if (fixed && fixed->plan) {
    result.plans.push_back(*fixed->plan);
  } else {
    result.plans.reserve(outcomes.size());
    for (const auto& oc : outcomes) result.plans.push_back(oc.plan);
  }
  if (options.record_groupings) {
    result.groupings.reserve(outcomes.size());
    for (auto& oc : outcomes) result.groupings.push_back(std::move(oc.grouping));
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cellfree
