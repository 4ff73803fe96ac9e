#include "cellfree/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cellfree/error.hpp"

namespace cellfree {

std::vector<std::size_t> Grouping::group_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(n_groups, 0)), 0);
  for (int g : assignment)
    if (g >= 0 && g < n_groups) ++sizes[static_cast<std::size_t>(g)];
  return sizes;
}

bool Grouping::is_disjoint_cover() const {
  if (n_groups < 1) return false;
  return std::all_of(assignment.begin(), assignment.end(), [this](int g) { return g >= 0 && g < n_groups; });
}

namespace {

void check_feasible(std::size_t n_antennas, int n_groups) {
  if (n_groups < 1) throw Error(ErrorCode::InvalidParameter, "number of groups must be at least 1");
  if (n_antennas < static_cast<std::size_t>(n_groups))
    throw Error(ErrorCode::Infeasible, "fewer antennas than groups");
}

}  // namespace

Grouping single_group(std::size_t n_antennas) { return Grouping{std::vector<int>(n_antennas, 0), 1}; }

Grouping random_grouping(std::size_t n_antennas, int n_groups, RandomStream& rng) {
  check_feasible(n_antennas, n_groups);
  std::vector<std::size_t> order(n_antennas);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  // Labels are shuffled too, so the larger groups are not always the low-numbered ones.
  std::vector<int> labels(static_cast<std::size_t>(n_groups));
  std::iota(labels.begin(), labels.end(), 0);
  std::shuffle(labels.begin(), labels.end(), rng.engine());
  Grouping out{std::vector<int>(n_antennas, 0), n_groups};
  for (std::size_t i = 0; i < n_antennas; ++i)
    out.assignment[order[i]] = labels[i % static_cast<std::size_t>(n_groups)];
  return out;
}

Grouping neighbor_grouping(std::span<const Point> positions, int n_groups) {
  const std::size_t n = positions.size();
  check_feasible(n, n_groups);
  for (const auto& p : positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::InvalidParameter, "antenna positions must be finite");

  Grouping out{std::vector<int>(n, -1), n_groups};
  if (n == 1) {
    out.assignment[0] = 0;
    return out;
  }

  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n && best > 0.0; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(positions[i], positions[j]);
      if (d < best) {
        best = d;
        start = i;
        if (d == 0.0) break;
      }
    }
  }

  std::vector<bool> assigned(n, false);
  std::size_t previous = start;
  assigned[start] = true;
  out.assignment[start] = 0;
  for (std::size_t n_assigned = 1; n_assigned < n; ++n_assigned) {
    std::size_t next = n;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (assigned[j]) continue;
      const double d = distance(positions[previous], positions[j]);
      if (d < nearest) {
        nearest = d;
        next = j;
        if (d == 0.0) break;
      }
    }
    assigned[next] = true;
    out.assignment[next] = static_cast<int>(n_assigned % static_cast<std::size_t>(n_groups));
    previous = next;
  }
  return out;
}

Grouping neighbor_grouping(const NetworkLayout& layout, int n_groups) {
  const auto positions = layout.antenna_positions();
  return neighbor_grouping(positions, n_groups);
}

std::vector<double> group_large_scale(std::span<const double> beta, const Grouping& grouping) {
  if (beta.size() != grouping.assignment.size())
    throw Error(ErrorCode::Dimension, "beta and grouping lengths differ");
  std::vector<double> out(static_cast<std::size_t>(grouping.n_groups), 0.0);
  for (std::size_t m = 0; m < beta.size(); ++m) {
    const int g = grouping.assignment[m];
    if (g < 0 || g >= grouping.n_groups) throw Error(ErrorCode::Dimension, "group index out of range");
    out[static_cast<std::size_t>(g)] += beta[m];
  }
  return out;
}

}  // namespace cellfree
