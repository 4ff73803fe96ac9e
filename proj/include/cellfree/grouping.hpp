#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cellfree/deployment.hpp"
#include "cellfree/random.hpp"

namespace cellfree {

/// Assignment of every antenna to one of n_groups code groups.
struct Grouping {
  std::vector<int> assignment;
  int n_groups = 1;

  std::vector<std::size_t> group_sizes() const;
  /// Every antenna assigned exactly once to a group in [0, n_groups).
  bool is_disjoint_cover() const;
};

Grouping single_group(std::size_t n_antennas);

/// Balanced random partition: shuffle, then deal antennas round-robin.
Grouping random_grouping(std::size_t n_antennas, int n_groups, RandomStream& rng);

/// Chain heuristic that keeps nearby antennas in different groups:
/// start at the lower-index end of the closest pair, then keep hopping from
/// the last assigned antenna to its nearest unassigned one, assigning groups
/// cyclically. Distance ties go to the lower index. Co-located antennas of a
/// multi-antenna AP are at distance zero from each other, so they are
/// visited back to back and cover all groups when M >= n_groups.
Grouping neighbor_grouping(std::span<const Point> antenna_positions, int n_groups);
Grouping neighbor_grouping(const NetworkLayout& layout, int n_groups);

/// Per-group sums of the per-antenna coefficients.
std::vector<double> group_large_scale(std::span<const double> beta, const Grouping& grouping);

}  // namespace cellfree
