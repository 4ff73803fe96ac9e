#pragma once

#include <string>
#include <string_view>

#include "cellfree/harness.hpp"

namespace cellfree {

/// Canonical key=value text: every key, one per line, in a fixed order.
std::string serialize_config(const ScenarioConfig& config);

/// Parses key=value lines. Blank lines and lines starting with '#' are
/// skipped; " #" starts a trailing comment. Keys not given keep their
/// defaults. Unknown or repeated keys and malformed values throw Config.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::string& path);

}  // namespace cellfree
