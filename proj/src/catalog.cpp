#include <algorithm>
#include <cmath>
#include <limits>

#include "cellfree/error.hpp"
#include "cellfree/harness.hpp"

namespace cellfree {

namespace {

constexpr double kHalfWidth = 2.0;
constexpr std::uint64_t kFig7LayoutSeed = 7;
constexpr double kFig7HalfWidth = 0.5;

ScenarioConfig base(std::string name) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.region_half_width = kHalfWidth;
  c.epsilon = 1e-2;
  return c;
}

std::string density_tag(double d) { return std::to_string(static_cast<int>(std::lround(d))); }

Experiment fig3() {
  Experiment e{"fig3", "hexagonal lattice vs PPP at 10/20/40 APs per km^2; perfect CSI, no shadowing, one group", {}};
  for (DeploymentKind kind : {DeploymentKind::Hexagonal, DeploymentKind::Ppp}) {
    for (double d : {10.0, 20.0, 40.0}) {
      ScenarioConfig c = base(std::string("fig3/") + (kind == DeploymentKind::Hexagonal ? "hex" : "ppp") + "_d" +
                              density_tag(d));
      c.deployment = kind;
      c.density = d;
      c.outer = 2000;
      c.inner = 10;
      e.variants.push_back(c);
    }
  }
  return e;
}

Experiment fig4() {
  Experiment e{"fig4", "large-scale fading models at 20 APs per km^2: path loss only, uncorrelated and correlated shadowing",
               {}};
  for (auto [mode, tag] : {std::pair{ShadowMode::None, "none"}, std::pair{ShadowMode::Uncorrelated, "uncorrelated"},
                           std::pair{ShadowMode::Correlated, "correlated"}}) {
    ScenarioConfig c = base(std::string("fig4/shadow_") + tag);
    c.shadow = mode;
    c.outer = 2000;
    c.inner = 10;
    e.variants.push_back(c);
  }
  return e;
}

Experiment fig5() {
  Experiment e{"fig5",
               "LS estimation with equal pilot/data power over tau_p, the optimized single-pilot plan and perfect CSI",
               {}};
  auto ls = [](std::string name) {
    ScenarioConfig c = base(std::move(name));
    c.shadow = ShadowMode::Correlated;
    c.csi = CsiMode::LeastSquares;
    c.outer = 2000;
    c.inner = 10;
    return c;
  };
  for (int tp : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 50}) {
    ScenarioConfig c = ls("fig5/uniform_tp" + std::to_string(tp));
    c.tau_p = tp;
    e.variants.push_back(c);
  }
  ScenarioConfig opt = ls("fig5/optimized_tp1");
  opt.power = PowerStrategy::Optimized;
  e.variants.push_back(opt);
  ScenarioConfig perfect = ls("fig5/perfect");
  perfect.csi = CsiMode::Perfect;
  e.variants.push_back(perfect);
  return e;
}

ScenarioConfig diversity(std::string name, const std::string& code, PowerStrategy power, int rx) {
  ScenarioConfig c = base(std::move(name));
  c.shadow = ShadowMode::Correlated;
  c.csi = CsiMode::LeastSquares;
  c.code = code;
  c.tau_p = code == "rate34" ? 4 : (code == "alamouti" ? 2 : 1);
  c.power = power;
  c.rx_antennas = rx;
  c.grouping = GroupingStrategy::Random;
  c.outer = 1000;
  c.inner = 100;
  return c;
}

Experiment fig6() {
  Experiment e{"fig6", "transmit diversity: nominal, optimized pilot power, Alamouti and rate-3/4 with random grouping", {}};
  e.variants.push_back(diversity("fig6/nominal", "single", PowerStrategy::Uniform, 1));
  e.variants.push_back(diversity("fig6/single_optimized", "single", PowerStrategy::Optimized, 1));
  e.variants.push_back(diversity("fig6/alamouti_optimized", "alamouti", PowerStrategy::Optimized, 1));
  e.variants.push_back(diversity("fig6/rate34_optimized", "rate34", PowerStrategy::Optimized, 1));
  return e;
}

struct Fig7Terminals {
  Point between_pair;
  Point near_ap;
  Point worst;
};

Fig7Terminals fig7_terminals() {
  const Region region{kFig7HalfWidth};
  RandomStream rng(kFig7LayoutSeed, StreamPurpose::Layout, 0);
  const NetworkLayout layout = place_ppp(20.0, region, rng, 1);
  const auto& p = layout.positions;
  const double interior = 0.6 * kFig7HalfWidth;
  auto inside = [&](Point q) { return std::abs(q.x) <= interior && std::abs(q.y) <= interior; };

  Fig7Terminals t{};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (!inside(p[i]) || !inside(p[j])) continue;
      const double d = distance(p[i], p[j]);
      if (d < best) {
        best = d;
        t.between_pair = Point{0.5 * (p[i].x + p[j].x), 0.5 * (p[i].y + p[j].y)};
      }
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::Infeasible, "fig7 layout has no interior AP pair");

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (distance(p[i], Point{}) < distance(p[nearest], Point{})) nearest = i;
  }
  const double dx = p[nearest].x > 0.0 ? -0.03 : 0.03;
  t.near_ap = Point{p[nearest].x + dx, p[nearest].y};
  t.worst = worst_position(layout, nominal_spacing(layout) / 10.0, Region{interior});
  return t;
}

Experiment fig7() {
  Experiment e{"fig7_positions",
               "fixed layout, three terminals (between the closest AP pair, next to one AP, worst position); "
               "Alamouti, perfect CSI, no shadowing; rates per random grouping, plus neighbor grouping",
               {}};
  const Fig7Terminals t = fig7_terminals();
  const std::pair<const char*, Point> terminals[] = {{"pair", t.between_pair}, {"near", t.near_ap}, {"worst", t.worst}};
  for (auto strategy : {GroupingStrategy::Random, GroupingStrategy::Neighbor}) {
    for (const auto& [tag, pos] : terminals) {
      ScenarioConfig c = base(std::string("fig7_positions/") + tag +
                              (strategy == GroupingStrategy::Random ? "_random" : "_neighbor"));
      c.region_half_width = kFig7HalfWidth;
      c.layout_seed = kFig7LayoutSeed;
      c.code = "alamouti";
      c.grouping = strategy;
      c.terminal_x = pos.x;
      c.terminal_y = pos.y;
      c.metric = MetricMode::PerRealization;
      c.outer = strategy == GroupingStrategy::Random ? 1000 : 1;
      c.inner = 100;
      e.variants.push_back(c);
    }
  }
  return e;
}

Experiment fig8() {
  Experiment e{"fig8", "receive diversity: one and two terminal antennas for N_g = 1, 2, 4 (optimized pilot power)", {}};
  for (int rx : {1, 2}) {
    for (const char* code : {"single", "alamouti", "rate34"}) {
      e.variants.push_back(diversity("fig8/" + std::string(code) + "_rx" + std::to_string(rx), code,
                                     PowerStrategy::Optimized, rx));
    }
  }
  return e;
}

Experiment fig9() {
  Experiment e{"fig9",
               "1000 antennas per km^2: cellular (hexagonal, 100 antennas per site) vs cell-free (PPP, single-antenna "
               "APs); Alamouti, LS, optimized pilot power, random grouping",
               {}};
  ScenarioConfig cellular = diversity("fig9/cellular", "alamouti", PowerStrategy::Optimized, 1);
  cellular.deployment = DeploymentKind::Hexagonal;
  cellular.density = 10.0;
  cellular.antennas_per_ap = 100;
  cellular.region_half_width = 1.0;
  cellular.outer = 300;
  ScenarioConfig cellfree = diversity("fig9/cellfree", "alamouti", PowerStrategy::Optimized, 1);
  cellfree.density = 1000.0;
  cellfree.region_half_width = 0.5;
  cellfree.outer = 300;
  e.variants.push_back(cellular);
  e.variants.push_back(cellfree);
  return e;
}

}  // namespace

const std::vector<Experiment>& experiment_catalog() {
  static const std::vector<Experiment> catalog = {fig3(), fig4(), fig5(), fig6(), fig7(), fig8(), fig9()};
  return catalog;
}

const Experiment& experiment(const std::string& name) {
  for (const Experiment& e : experiment_catalog()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scenario '" + name + "'");
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const Experiment& e : experiment_catalog()) out.push_back(e.name);
  return out;
}

}  // namespace cellfree
