#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cellfree/deployment.hpp"
#include "cellfree/grouping.hpp"

namespace cellfree {

/// Writes `x_km,y_km,antennas` (one row per AP). With a grouping, a `group`
/// column is appended holding the AP's per-antenna group indices joined by
/// ';'.
void write_layout_csv(std::ostream& out, const NetworkLayout& layout, const Grouping* grouping = nullptr);

/// Reads the format above. The group column, if present, is ignored. All
/// rows must carry the same antenna count. The region is the one given, or
/// the smallest square containing every AP when absent.
NetworkLayout read_layout_csv(std::istream& in, std::optional<Region> region = std::nullopt);

NetworkLayout load_layout_csv(const std::string& path, std::optional<Region> region = std::nullopt);

}  // namespace cellfree
