#include "cellfree/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "cellfree/error.hpp"

namespace cellfree {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::Config,
              "bad value '" + std::string(value) + "' for " + std::string(key) + " (expected " + std::string(expected) + ")");
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, std::string_view)> set;
};

template <typename E>
Field enum_field(const char* key, E ScenarioConfig::*member, std::vector<std::pair<E, const char*>> names) {
  std::string expected;
  for (const auto& [e, n] : names) expected += (expected.empty() ? "" : "|") + std::string(n);
  return {key,
          [member, names](const ScenarioConfig& c) {
            for (const auto& [e, n] : names)
              if (c.*member == e) return std::string(n);
            return std::string("?");
          },
          [key, member, names, expected](ScenarioConfig& c, std::string_view v) {
            for (const auto& [e, n] : names) {
              if (v == n) {
                c.*member = e;
                return;
              }
            }
            bad_value(key, v, expected);
          }};
}

Field double_field(const char* key, double ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return fmt(c.*member); },
          [key, member](ScenarioConfig& c, std::string_view v) { c.*member = parse_double(key, v); }};
}

template <typename T>
Field int_field(const char* key, T ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return fmt_int(c.*member); },
          [key, member](ScenarioConfig& c, std::string_view v) { c.*member = parse_integer<T>(key, v); }};
}

Field string_field(const char* key, std::string ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return c.*member; },
          [member](ScenarioConfig& c, std::string_view v) { c.*member = std::string(v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    f.push_back(string_field("name", &ScenarioConfig::name));
    f.push_back(enum_field("deployment", &ScenarioConfig::deployment,
                           {{DeploymentKind::Ppp, "ppp"}, {DeploymentKind::Hexagonal, "hex"}}));
    f.push_back(double_field("density", &ScenarioConfig::density));
    f.push_back(double_field("region_half_width", &ScenarioConfig::region_half_width));
    f.push_back(int_field("antennas_per_ap", &ScenarioConfig::antennas_per_ap));
    f.push_back(enum_field("shadow", &ScenarioConfig::shadow,
                           {{ShadowMode::None, "none"},
                            {ShadowMode::Uncorrelated, "uncorrelated"},
                            {ShadowMode::Correlated, "correlated"}}));
    f.push_back(double_field("shadow_sigma_db", &ScenarioConfig::shadow_sigma_db));
    f.push_back(double_field("shadow_delta", &ScenarioConfig::shadow_delta));
    f.push_back(double_field("shadow_decorrelation_km", &ScenarioConfig::shadow_decorrelation_km));
    f.push_back({"code", [](const ScenarioConfig& c) { return c.code; },
                 [](ScenarioConfig& c, std::string_view v) {
                   if (v != "single" && v != "alamouti" && v != "rate34") bad_value("code", v, "single|alamouti|rate34");
                   c.code = std::string(v);
                 }});
    f.push_back(enum_field("grouping", &ScenarioConfig::grouping,
                           {{GroupingStrategy::Random, "random"}, {GroupingStrategy::Neighbor, "neighbor"}}));
    f.push_back(enum_field("csi", &ScenarioConfig::csi, {{CsiMode::Perfect, "perfect"}, {CsiMode::LeastSquares, "ls"}}));
    f.push_back(int_field("tau_c", &ScenarioConfig::tau_c));
    f.push_back(int_field("tau_p", &ScenarioConfig::tau_p));
    f.push_back(enum_field("power", &ScenarioConfig::power,
                           {{PowerStrategy::Uniform, "uniform"}, {PowerStrategy::Optimized, "optimized"}}));
    f.push_back(int_field("rx_antennas", &ScenarioConfig::rx_antennas));
    f.push_back(double_field("epsilon", &ScenarioConfig::epsilon));
    f.push_back(int_field("outer", &ScenarioConfig::outer));
    f.push_back(int_field("inner", &ScenarioConfig::inner));
    f.push_back(int_field("seed", &ScenarioConfig::seed));
    f.push_back(double_field("power_mw", &ScenarioConfig::power_mw));
    f.push_back(double_field("bandwidth_hz", &ScenarioConfig::bandwidth_hz));
    f.push_back(double_field("temperature_k", &ScenarioConfig::temperature_k));
    f.push_back(double_field("noise_figure_db", &ScenarioConfig::noise_figure_db));
    f.push_back(double_field("terminal_x", &ScenarioConfig::terminal_x));
    f.push_back(double_field("terminal_y", &ScenarioConfig::terminal_y));
    f.push_back(double_field("power_search_fraction", &ScenarioConfig::power_search_fraction));
    f.push_back({"layout_seed",
                 [](const ScenarioConfig& c) { return c.layout_seed ? fmt_int(*c.layout_seed) : std::string("none"); },
                 [](ScenarioConfig& c, std::string_view v) {
                   if (v == "none") {
                     c.layout_seed.reset();
                   } else {
                     c.layout_seed = parse_integer<std::uint64_t>("layout_seed", v);
                   }
                 }});
    f.push_back(string_field("layout_file", &ScenarioConfig::layout_file));
    f.push_back(enum_field("metric", &ScenarioConfig::metric,
                           {{MetricMode::Pooled, "pooled"}, {MetricMode::PerRealization, "per_realization"}}));
    return f;
  }();
  return all;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += '=';
    out += f.get(config);
    out += '\n';
  }
  return out;
}

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string_view, const Field*> by_key;
  for (const Field& f : fields()) by_key.emplace(f.key, &f);
  ScenarioConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find(" #"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end())
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second)
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'");
    try {
      it->second->set(config, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cellfree
