#include "cellfree/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cellfree/error.hpp"

namespace cellfree {

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

bool Region::contains(Point p) const noexcept {
  return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width;
}

void Region::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorCode::InvalidParameter, "region half-width must be positive");
}

std::vector<Point> NetworkLayout::antenna_positions() const {
  std::vector<Point> out;
  out.reserve(antenna_count());
  for (const auto& p : positions)
    for (int j = 0; j < antennas_per_ap; ++j) out.push_back(p);
  return out;
}

namespace {

void check_antennas(int antennas_per_ap) {
  if (antennas_per_ap < 1)
    throw Error(ErrorCode::InvalidParameter, "antennas per AP must be at least 1");
}

/// Uniform bucket grid over the region for nearest-AP queries.
class NearestApIndex {
 public:
  NearestApIndex(const std::vector<Point>& points, Region region, double cell)
      : points_(points), half_width_(region.half_width), cell_(cell) {
    cells_ = std::max<int>(1, static_cast<int>(std::ceil(2.0 * half_width_ / cell_)));
    buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto [cx, cy] = cell_of(points_[i]);
      buckets_[static_cast<std::size_t>(cy) * cells_ + cx].push_back(i);
    }
  }

  double nearest(Point q) const {
    const auto [cx, cy] = cell_of(q);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= cells_; ++ring) {
      for (int dy = -ring; dy <= ring; ++dy) {
        const int y = cy + dy;
        if (y < 0 || y >= cells_) continue;
        const bool edge_row = (dy == -ring || dy == ring);
        for (int dx = -ring; dx <= ring; dx += edge_row ? 1 : 2 * std::max(ring, 1)) {
          const int x = cx + dx;
          if (x >= 0 && x < cells_) {
            for (std::size_t i : buckets_[static_cast<std::size_t>(y) * cells_ + x])
              best = std::min(best, distance(points_[i], q));
          }
          if (ring == 0) break;
        }
      }
      // Anything outside this ring is at least ring * cell away.
      if (best <= ring * cell_) break;
    }
    return best;
  }

 private:
  std::pair<int, int> cell_of(Point p) const {
    const auto clampi = [this](double v) {
      return std::clamp(static_cast<int>(std::floor((v + half_width_) / cell_)), 0, cells_ - 1);
    };
    return {clampi(p.x), clampi(p.y)};
  }

  const std::vector<Point>& points_;
  double half_width_;
  double cell_;
  int cells_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

NetworkLayout place_ppp(double density, Region region, RandomStream& rng, int antennas_per_ap) {
  if (!(density >= 0.0) || !std::isfinite(density))
    throw Error(ErrorCode::InvalidParameter, "PPP density must be non-negative");
  region.validate();
  check_antennas(antennas_per_ap);
  NetworkLayout layout;
  layout.kind = DeploymentKind::Ppp;
  layout.region = region;
  layout.antennas_per_ap = antennas_per_ap;
  const auto count = rng.poisson(density * region.area());
  layout.positions.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = rng.uniform(-region.half_width, region.half_width);
    const double y = rng.uniform(-region.half_width, region.half_width);
    layout.positions.push_back({x, y});
  }
  return layout;
}

double hex_spacing(double density) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw Error(ErrorCode::InvalidParameter, "hexagonal density must be positive");
  return std::sqrt(2.0 / (std::numbers::sqrt3 * density));
}

Point hex_default_phase(double density) {
  const double s = hex_spacing(density);
  // (a1 + a2) / 2 with a1 = (s, 0), a2 = (s/2, s*sqrt(3)/2).
  return {0.75 * s, std::numbers::sqrt3 * s / 4.0};
}

Point random_hex_phase(double density, RandomStream& rng) {
  const double s = hex_spacing(density);
  const double u = rng.uniform();
  const double v = rng.uniform();
  return {u * s + v * 0.5 * s, v * std::numbers::sqrt3 * 0.5 * s};
}

NetworkLayout place_hex(double density, Region region, int antennas_per_ap) {
  return place_hex(density, region, hex_default_phase(density), antennas_per_ap);
}

NetworkLayout place_hex(double density, Region region, Point phase, int antennas_per_ap) {
  const double s = hex_spacing(density);
  region.validate();
  check_antennas(antennas_per_ap);
  NetworkLayout layout;
  layout.kind = DeploymentKind::Hexagonal;
  layout.region = region;
  layout.antennas_per_ap = antennas_per_ap;

  const double row_step = std::numbers::sqrt3 * 0.5 * s;
  const double hw = region.half_width;
  const auto j_lo = static_cast<long>(std::ceil((-hw - phase.y) / row_step));
  const auto j_hi = static_cast<long>(std::floor((hw - phase.y) / row_step));
  for (long j = j_lo; j <= j_hi; ++j) {
    const double y = phase.y + static_cast<double>(j) * row_step;
    const double shift = phase.x + static_cast<double>(j) * 0.5 * s;
    const auto i_lo = static_cast<long>(std::ceil((-hw - shift) / s));
    const auto i_hi = static_cast<long>(std::floor((hw - shift) / s));
    for (long i = i_lo; i <= i_hi; ++i) {
      const Point p{shift + static_cast<double>(i) * s, y};
      if (region.contains(p)) layout.positions.push_back(p);
    }
  }
  return layout;
}

double nominal_spacing(const NetworkLayout& layout) {
  if (layout.positions.empty()) throw Error(ErrorCode::NoAccessPoints, "layout has no APs");
  return hex_spacing(static_cast<double>(layout.positions.size()) / layout.region.area());
}

double min_distance(const NetworkLayout& layout, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : layout.positions) best = std::min(best, distance(p, q));
  return best;
}

Point worst_position(const NetworkLayout& layout, double grid_resolution) {
  return worst_position(layout, grid_resolution, layout.region);
}

Point worst_position(const NetworkLayout& layout, double grid_resolution, Region search) {
  if (layout.positions.empty()) throw Error(ErrorCode::NoAccessPoints, "worst position needs at least one AP");
  if (!(grid_resolution > 0.0)) throw Error(ErrorCode::InvalidParameter, "grid resolution must be positive");
  search.validate();

  const Region index_region{std::max(search.half_width, layout.region.half_width)};
  const double cell = std::max(nominal_spacing(layout), 2.0 * index_region.half_width / 512.0);
  const NearestApIndex index(layout.positions, index_region, cell);

  const double hw = search.half_width;
  const auto steps = static_cast<long>(std::floor(2.0 * hw / grid_resolution + 1e-9));
  Point best{-hw, -hw};
  double best_distance = -1.0;
  for (long iy = 0; iy <= steps; ++iy) {
    const double y = -hw + static_cast<double>(iy) * grid_resolution;
    for (long ix = 0; ix <= steps; ++ix) {
      const Point p{-hw + static_cast<double>(ix) * grid_resolution, y};
      const double d = index.nearest(p);
      if (d > best_distance) {
        best_distance = d;
        best = p;
      }
    }
  }
  return best;
}

}  // namespace cellfree
