#include "cellfree/result_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>

#include "cellfree/error.hpp"

namespace cellfree {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string describe_power(const RunResult& run) {
  const ScenarioConfig& c = run.config;
  std::string s = "power_plan";
  if (run.plans.empty()) return s + " none";
  const PowerPlan& first = run.plans.front();
  s += " strategy=";
  s += c.csi == CsiMode::Perfect ? "perfect-csi" : (c.power == PowerStrategy::Optimized ? "optimized" : "uniform");
  s += " rho=" + format_double(first.rho) + " energy=" + format_double(first.energy) +
       " tau_p=" + std::to_string(first.tau_p) + " tau_c=" + std::to_string(first.tau_c);
  if (run.plans.size() == 1) {
    s += " rho_p=" + format_double(first.rho_p) + " rho_d=" + format_double(first.rho_d);
    if (first.worst_position)
      s += " worst_x=" + format_double(first.worst_position->x) + " worst_y=" + format_double(first.worst_position->y);
    if (first.beta_worst) s += " beta_worst=" + format_double(*first.beta_worst);
    return s;
  }
  double p_sum = 0.0, d_sum = 0.0;
  double p_min = first.rho_p, p_max = first.rho_p;
  for (const PowerPlan& p : run.plans) {
    p_sum += p.rho_p;
    d_sum += p.rho_d;
    p_min = std::min(p_min, p.rho_p);
    p_max = std::max(p_max, p.rho_p);
  }
  const double n = static_cast<double>(run.plans.size());
  s += " plans=" + std::to_string(run.plans.size()) + " rho_p_mean=" + format_double(p_sum / n) +
       " rho_p_min=" + format_double(p_min) + " rho_p_max=" + format_double(p_max) +
       " rho_d_mean=" + format_double(d_sum / n);
  return s;
}

void write_result_csv(std::ostream& out, std::span<const RunResult> runs) {
  if (runs.empty()) throw Error(ErrorCode::InvalidParameter, "no runs to write");
  const SampleKind kind = runs.front().kind;
  for (const RunResult& r : runs) {
    if (r.kind != kind) throw Error(ErrorCode::InvalidParameter, "runs mix SNR and rate samples");
  }
  for (const RunResult& r : runs) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
    out << "# scenario=" << r.config.name << " seed=" << r.config.seed << " config_hash=" << hash
        << " method=" << r.method << '\n';
    out << "# " << describe_power(r) << '\n';
  }
  out << "scenario,seed,trial,"
      << (kind == SampleKind::Snr ? "snr_linear" : "rate_bpcu") << '\n';
  for (const RunResult& r : runs) {
    const std::string prefix = r.config.name + "," + std::to_string(r.config.seed) + ",";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      out << prefix << i << ',' << format_double(r.samples[i]) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing result CSV");
}

void write_summary_csv(std::ostream& out, std::span<const RunResult> runs) {
  out << "scenario,epsilon,gamma_eps,rate_bpcu,ci_halfwidth,n_trials\n";
  for (const RunResult& r : runs) {
    out << r.config.name << ',' << format_double(r.outage.epsilon) << ',' << format_double(r.outage.gamma_eps) << ','
        << format_double(r.outage.rate_bpcu) << ',' << format_double(r.outage.ci_halfwidth) << ','
        << r.outage.n_trials << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing summary CSV");
}

}  // namespace cellfree
