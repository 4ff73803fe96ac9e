#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cellfree/harness.hpp"

namespace cellfree {

/// Comment lines (one block per run) describing the config hash, method and
/// power plan, then `scenario,seed,trial,snr_linear` (or `rate_bpcu` when the
/// runs report rates) and one row per sample. Runs must share a sample kind.
void write_result_csv(std::ostream& out, std::span<const RunResult> runs);

/// `scenario,epsilon,gamma_eps,rate_bpcu,ci_halfwidth,n_trials`, one row per run.
void write_summary_csv(std::ostream& out, std::span<const RunResult> runs);

/// Human-readable power plan line, as used in the CSV comments.
std::string describe_power(const RunResult& run);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace cellfree
