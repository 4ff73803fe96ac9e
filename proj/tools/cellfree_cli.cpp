// cellfree: run coverage experiments, validate configs, run oracle checks.
//
// Exit codes: 0 success, 1 validation/oracle failure, 2 bad arguments,
// unknown scenario, malformed config or unwritable output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellfree/config.hpp"
#include "cellfree/error.hpp"
#include "cellfree/harness.hpp"
#include "cellfree/layout_io.hpp"
#include "cellfree/result_io.hpp"
#ifdef CELLFREE_HAVE_LINKLEVEL
#include "cellfree/validation.hpp"
#endif

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadArgs = 2;

using cellfree::ErrorCode;
using cellfree::ScenarioConfig;

struct UsageError {
  std::string message;
};

std::vector<ScenarioConfig> resolve_scenario(const std::string& name_or_file) {
  for (const auto& e : cellfree::experiment_catalog()) {
    if (e.name == name_or_file) return e.variants;
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_file, ec)) {
    try {
      return {cellfree::load_config(name_or_file)};
    } catch (const cellfree::Error& e) {
      throw UsageError{"malformed config '" + name_or_file + "': " + e.what()};
    }
  }
  throw UsageError{"unknown scenario '" + name_or_file + "' (not a preset name or a readable config file)"};
}

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("CELLFREE_SEED");
  if (!env || !*env) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError{std::string("CELLFREE_SEED is not an unsigned integer: '") + env + "'"};
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError{"cannot write output file '" + path + "'"};
  return out;
}

std::string default_summary_path(const std::string& out) {
  std::filesystem::path p(out);
  const std::string stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + "_summary.csv")).string();
}

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> outer;
  std::optional<std::uint64_t> inner;
  std::string out;
  std::string summary;
  unsigned threads = 0;
  bool quiet = false;
};

int cmd_run(const RunArgs& args) {
  std::vector<ScenarioConfig> variants = resolve_scenario(args.scenario);
  std::optional<std::uint64_t> seed = args.seed;
  if (auto env = seed_from_env()) seed = env;
  for (auto& v : variants) {
    if (seed) v.seed = *seed;
    if (args.outer) v.outer = *args.outer;
    if (args.inner) v.inner = *args.inner;
    try {
      cellfree::validate_scenario(v);
    } catch (const cellfree::Error& e) {
      throw UsageError{"invalid configuration for " + v.name + ": " + e.what()};
    }
  }
  const std::string summary_path = args.summary.empty() ? default_summary_path(args.out) : args.summary;
  std::ofstream out = open_output(args.out);
  std::ofstream summary = open_output(summary_path);

  std::vector<cellfree::RunResult> results;
  for (const auto& v : variants) {
    cellfree::RunOptions opts;
    opts.threads = args.threads;
    results.push_back(cellfree::run_scenario(v, opts));
    const auto& r = results.back();
    if (!args.quiet) {
      std::cerr << std::left << std::setw(32) << v.name << " gamma_eps=" << std::setw(12) << r.outage.gamma_eps
                << " rate_bpcu=" << std::setw(12) << r.outage.rate_bpcu << " ci=" << std::setw(12)
                << r.outage.ci_halfwidth << " n=" << r.outage.n_trials << " [" << r.method << ", "
                << std::setprecision(3) << r.wall_seconds << " s]" << std::setprecision(6) << '\n';
    }
  }
  cellfree::write_result_csv(out, results);
  cellfree::write_summary_csv(summary, results);
  out.close();
  summary.close();
  if (!out || !summary) throw UsageError{"failed writing output files"};
  cellfree::write_summary_csv(std::cout, results);
  return kOk;
}

int cmd_list() {
  for (const auto& e : cellfree::experiment_catalog()) {
    std::cout << e.name << '\t' << e.variants.size() << " variant(s)\t" << e.description << '\n';
  }
  return kOk;
}

int cmd_validate(const std::string& path) {
  ScenarioConfig config;
  try {
    config = cellfree::load_config(path);
  } catch (const cellfree::Error& e) {
    throw UsageError{"malformed config '" + path + "': " + e.what()};
  }
  try {
    cellfree::validate_scenario(config);
  } catch (const cellfree::Error& e) {
    std::cout << "INVALID " << path << ": " << e.what() << '\n';
    return kFailed;
  }
  std::cout << "OK " << path << " (" << config.name << ")\n";
  return kOk;
}

int cmd_show(const std::string& name_or_file) {
  bool first = true;
  for (const auto& v : resolve_scenario(name_or_file)) {
    if (!first) std::cout << '\n';
    first = false;
    std::cout << "# " << v.name << '\n' << cellfree::serialize_config(v);
  }
  return kOk;
}

int cmd_layout(const std::string& name_or_file, std::uint64_t trial, const std::string& out_path,
               std::optional<std::uint64_t> seed) {
  ScenarioConfig config = resolve_scenario(name_or_file).front();
  if (auto env = seed_from_env()) seed = env;
  if (seed) config.seed = *seed;
  std::ofstream out = open_output(out_path);
  const auto real = cellfree::draw_realization(config, trial);
  cellfree::write_layout_csv(out, real.layout, &real.grouping);
  return out ? kOk : kBadArgs;
}

int cmd_oracle(const std::string& check, std::uint64_t seed) {
#ifdef CELLFREE_HAVE_LINKLEVEL
  if (auto env = seed_from_env()) seed = *env;
  cellfree::validation::CheckReport report;
  if (check == "theorem1") {
    report = cellfree::validation::check_conditional_moments(seed);
  } else if (check == "corollary1") {
    report = cellfree::validation::check_single_group_law(seed);
  } else if (check == "hyperexp") {
    report = cellfree::validation::check_hyperexponential(seed);
  } else {
    throw UsageError{"unknown check '" + check + "'"};
  }
  std::cout << report.detail << '\n' << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? kOk : kFailed;
#else
  (void)check;
  (void)seed;
  throw UsageError{"this build has no link-level oracle (CELLFREE_ENABLE_LINKLEVEL=OFF)"};
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO system-information coverage simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t seed_value = 1;
  auto* run = app.add_subcommand("run", "Run a preset experiment or a scenario config file");
  run->add_option("--scenario", run_args.scenario, "Preset name (see list-scenarios) or config file path")->required();
  auto* seed_opt = run->add_option("--seed", seed_value, "Master seed (CELLFREE_SEED overrides)");
  run->add_option("--outer", run_args.outer, "Outer (network) draws per variant");
  run->add_option("--inner", run_args.inner, "Inner (small-scale) draws per outer draw");
  run->add_option("--out", run_args.out, "Result CSV path")->required();
  run->add_option("--summary", run_args.summary, "Summary CSV path (default: <out>_summary.csv)");
  run->add_option("--threads", run_args.threads, "Worker threads (0 = all cores)");
  run->add_flag("--quiet", run_args.quiet, "No per-variant progress on stderr");

  app.add_subcommand("list-scenarios", "List preset experiments");

  std::string config_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario config file");
  validate->add_option("--config", config_path, "Config file path")->required();

  std::string show_name;
  auto* show = app.add_subcommand("show-config", "Print the canonical config of every variant of a scenario");
  show->add_option("--scenario", show_name, "Preset name or config file path")->required();

  std::string layout_name, layout_out;
  std::uint64_t layout_trial = 0, layout_seed = 1;
  auto* layout = app.add_subcommand("export-layout", "Write the AP layout and grouping of one outer draw as CSV");
  layout->add_option("--scenario", layout_name, "Preset name (first variant) or config file path")->required();
  layout->add_option("--trial", layout_trial, "Outer draw index");
  auto* layout_seed_opt = layout->add_option("--seed", layout_seed, "Master seed (CELLFREE_SEED overrides)");
  layout->add_option("--out", layout_out, "Layout CSV path")->required();

  std::string check;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "Run a link-level validation check");
  oracle->add_option("--check", check, "theorem1 | corollary1 | hyperexp")
      ->required()
      ->check(CLI::IsMember({"theorem1", "corollary1", "hyperexp"}));
  oracle->add_option("--seed", oracle_seed, "Seed (CELLFREE_SEED overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (*run) {
      if (*seed_opt) run_args.seed = seed_value;
      return cmd_run(run_args);
    }
    if (app.got_subcommand("list-scenarios")) return cmd_list();
    if (*validate) return cmd_validate(config_path);
    if (*show) return cmd_show(show_name);
    if (*layout) {
      return cmd_layout(layout_name, layout_trial, layout_out,
                        *layout_seed_opt ? std::optional<std::uint64_t>(layout_seed) : std::nullopt);
    }
    if (*oracle) return cmd_oracle(check, oracle_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kBadArgs;
  } catch (const cellfree::Error& e) {
    std::cerr << "error (" << cellfree::to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::Io || e.code() == ErrorCode::Config || e.code() == ErrorCode::InvalidParameter
               ? kBadArgs
               : kFailed;
  }
  return kBadArgs;
}
