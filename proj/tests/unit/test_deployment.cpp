#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cellfree/deployment.hpp"
#include "cellfree/error.hpp"
#include "cellfree/stats.hpp"

using namespace cellfree;

namespace {

double nearest_neighbor(const NetworkLayout& l, std::size_t i) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < l.positions.size(); ++j)
    if (j != i) best = std::min(best, distance(l.positions[i], l.positions[j]));
  return best;
}

}  // namespace

TEST_CASE("ppp with zero density is empty") {
  RandomStream rng(1);
  CHECK(place_ppp(0.0, Region{1.0}, rng).ap_count() == 0);
  CHECK_THROWS_AS(place_ppp(-1.0, Region{1.0}, rng), Error);
}

TEST_CASE("ppp mean count over 1000 draws") {
  stats::Accumulator count;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RandomStream rng(s, StreamPurpose::Layout);
    const auto l = place_ppp(20.0, Region{5.0}, rng);
    count.add(static_cast<double>(l.ap_count()));
    if (s == 0) {
      for (auto p : l.positions) CHECK(Region{5.0}.contains(p));
    }
  }
  CHECK(std::abs(count.mean() - 2000.0) < 3.0 * std::sqrt(2000.0));
}

TEST_CASE("ppp quadrat counts look Poisson") {
  int passes = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    RandomStream rng(s, StreamPurpose::Layout);
    const auto l = place_ppp(20.0, Region{5.0}, rng);
    std::vector<double> counts(100, 0.0);
    for (auto p : l.positions) {
      const int cx = std::min(9, static_cast<int>((p.x + 5.0)));
      const int cy = std::min(9, static_cast<int>((p.y + 5.0)));
      counts[static_cast<std::size_t>(cy * 10 + cx)] += 1.0;
    }
    passes += stats::poisson_dispersion_p_value(counts) > 0.01;
  }
  CHECK(passes >= 4);
}

TEST_CASE("hex spacing at 20 APs per km2") {
  CHECK(hex_spacing(20.0) == doctest::Approx(0.2403).epsilon(1e-3));
  CHECK_THROWS_AS(hex_spacing(0.0), Error);
  CHECK_THROWS_AS(place_hex(-1.0, Region{1.0}), Error);
}

TEST_CASE("hex lattice: equal neighbor distances, count, determinism") {
  const Region region{2.0};
  const auto l = place_hex(20.0, region);
  const double s = hex_spacing(20.0);
  for (std::size_t i = 0; i < l.positions.size(); ++i) {
    const auto p = l.positions[i];
    if (std::abs(p.x) < 1.5 && std::abs(p.y) < 1.5) CHECK(std::abs(nearest_neighbor(l, i) - s) < 1e-12);
    CHECK(region.contains(p));
  }
  // One boundary ring: perimeter / spacing.
  const double expected = 20.0 * region.area();
  CHECK(std::abs(static_cast<double>(l.ap_count()) - expected) < 8.0 * region.half_width / s);
  const auto again = place_hex(20.0, region);
  CHECK(again.positions == l.positions);
}

TEST_CASE("hex interior AP has six equidistant neighbors") {
  const auto l = place_hex(20.0, Region{2.0});
  const double s = hex_spacing(20.0);
  std::size_t center = 0;
  double best = 1e9;
  for (std::size_t i = 0; i < l.positions.size(); ++i) {
    const double r = std::hypot(l.positions[i].x, l.positions[i].y);
    if (r < best) best = r, center = i;
  }
  int n = 0;
  for (std::size_t j = 0; j < l.positions.size(); ++j)
    if (j != center && std::abs(distance(l.positions[j], l.positions[center]) - s) < 1e-9) ++n;
  CHECK(n == 6);
}

TEST_CASE("worst position: single AP goes to a corner") {
  NetworkLayout l;
  l.region = Region{1.0};
  l.positions = {{0.0, 0.0}};
  const auto p = worst_position(l, 0.1);
  CHECK(std::abs(std::abs(p.x) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(p.y) - 1.0) < 1e-12);
}

TEST_CASE("worst position on a hex lattice sits at a triangle circumcenter") {
  const double s = hex_spacing(20.0);
  const auto l = place_hex(20.0, Region{1.0});
  const auto p = worst_position(l, s / 50.0, Region{0.5});
  CHECK(min_distance(l, p) == doctest::Approx(s / std::numbers::sqrt3).epsilon(0.02));
}

TEST_CASE("worst position beats every grid point and avoids APs") {
  RandomStream rng(5, StreamPurpose::Layout);
  const auto l = place_ppp(10.0, Region{1.0}, rng);
  REQUIRE(l.ap_count() > 0);
  const double res = 0.1;
  const auto w = worst_position(l, res);
  const double dw = min_distance(l, w);
  CHECK(dw > 0.0);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) CHECK(min_distance(l, {-1.0 + i * res, -1.0 + j * res}) <= dw + 1e-12);
  NetworkLayout empty;
  CHECK_THROWS_AS(worst_position(empty, 0.1), Error);
}

TEST_CASE("antenna positions repeat each AP M times") {
  const auto l = place_hex(10.0, Region{0.5}, 3);
  CHECK(l.antenna_count() == 3 * l.ap_count());
  const auto pos = l.antenna_positions();
  CHECK(pos[4] == l.positions[1]);
  CHECK(l.ap_of_antenna(4) == 1);
}
