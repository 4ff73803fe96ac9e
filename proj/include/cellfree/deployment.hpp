#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cellfree/random.hpp"

namespace cellfree {

/// A position in the plane, in km.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b) noexcept;

/// Square region centred at the origin with side 2 * half_width (km).
struct Region {
  double half_width = 5.0;

  double area() const noexcept { return 4.0 * half_width * half_width; }
  bool contains(Point p) const noexcept;
  void validate() const;
};

enum class DeploymentKind { Ppp, Hexagonal };

/// AP positions plus the antenna count shared by every AP. Antenna j of AP i
/// has the flat index i * antennas_per_ap + j.
struct NetworkLayout {
  std::vector<Point> positions;
  int antennas_per_ap = 1;
  DeploymentKind kind = DeploymentKind::Ppp;
  Region region{};

  std::size_t ap_count() const noexcept { return positions.size(); }
  std::size_t antenna_count() const noexcept {
    return positions.size() * static_cast<std::size_t>(antennas_per_ap);
  }
  std::size_t ap_of_antenna(std::size_t antenna) const noexcept {
    return antenna / static_cast<std::size_t>(antennas_per_ap);
  }
  std::vector<Point> antenna_positions() const;
};

NetworkLayout place_ppp(double density, Region region, RandomStream& rng, int antennas_per_ap = 1);

/// Nearest-neighbour spacing of a triangular lattice with the given density
/// (APs per km^2).
double hex_spacing(double density);

/// Lattice phase used when none is given: the lattice point at the origin
/// shifted by half a cell, so the origin sits midway between two APs.
Point hex_default_phase(double density);

/// Phase drawn uniformly over one lattice cell. Averaging over it is the same
/// as placing the terminal uniformly relative to the lattice.
Point random_hex_phase(double density, RandomStream& rng);

NetworkLayout place_hex(double density, Region region, int antennas_per_ap = 1);
NetworkLayout place_hex(double density, Region region, Point phase, int antennas_per_ap = 1);

/// Hexagonal-equivalent spacing for the layout's AP density.
double nominal_spacing(const NetworkLayout& layout);

/// Distance from p to the closest AP (brute force).
double min_distance(const NetworkLayout& layout, Point p);

/// Grid search for the point with the largest distance to its closest AP.
/// The grid starts at the lower-left corner of the search region and is
/// scanned row by row; ties keep the first point found.
Point worst_position(const NetworkLayout& layout, double grid_resolution);
Point worst_position(const NetworkLayout& layout, double grid_resolution, Region search);

}  // namespace cellfree
