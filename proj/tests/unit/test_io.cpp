#include <doctest.h>

#include <sstream>

#include "cellfree/config.hpp"
#include "cellfree/error.hpp"
#include "cellfree/harness.hpp"
#include "cellfree/layout_io.hpp"
#include "cellfree/result_io.hpp"

using namespace cellfree;

namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config unexpectedly parsed");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("config round trip") {
  ScenarioConfig c;
  c.name = "trip";
  c.deployment = DeploymentKind::Hexagonal;
  c.density = 12.5;
  c.shadow = ShadowMode::Correlated;
  c.code = "rate34";
  c.csi = CsiMode::LeastSquares;
  c.tau_p = 4;
  c.epsilon = 1e-3;
  c.terminal_x = 0.1 + 0.2;  // not exactly representable in short decimal
  c.layout_seed = 99;
  c.metric = MetricMode::PerRealization;
  const std::string text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
  CHECK(parse_config(serialize_config(ScenarioConfig{})) == ScenarioConfig{});
}

TEST_CASE("config comments, blanks and partial files") {
  const auto c = parse_config("# header\n\nname=abc   # trailing\n  density = 7\ncode=alamouti\n");
  CHECK(c.name == "abc");
  CHECK(c.density == 7.0);
  CHECK(c.code == "alamouti");
  CHECK(c.tau_c == ScenarioConfig{}.tau_c);
  CHECK(parse_config("").name == "custom");
  CHECK(parse_config("seed=5").seed == 5);
}

TEST_CASE("config errors") {
  CHECK(parse_error("bogus=1\n") == ErrorCode::Config);
  CHECK(parse_error("seed=1\nseed=2\n") == ErrorCode::Config);
  CHECK(parse_error("density=lots\n") == ErrorCode::Config);
  CHECK(parse_error("csi=mmse\n") == ErrorCode::Config);
  CHECK(parse_error("code=golden\n") == ErrorCode::Config);
  CHECK(parse_error("outer=-3\n") == ErrorCode::Config);
  CHECK(parse_error("just words\n") == ErrorCode::Config);
  try {
    parse_config("name=x\nbogus=1\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), Error);
}

TEST_CASE("scenario names that would break CSV rows are rejected") {
  ScenarioConfig c;
  c.name = "a,b";
  CHECK_THROWS_AS(validate_scenario(c), Error);
  c.name = "a b";
  CHECK_THROWS_AS(validate_scenario(c), Error);
}

TEST_CASE("layout CSV round trip with grouping column") {
  NetworkLayout l;
  l.region = Region{1.0};
  l.antennas_per_ap = 2;
  l.positions = {{0.1, -0.2}, {0.3333333333333333, 0.9}};
  const Grouping g{{0, 1, 1, 0}, 2};
  std::stringstream ss;
  write_layout_csv(ss, l, &g);
  const std::string text = ss.str();
  CHECK(text.rfind("x_km,y_km,antennas,group\n", 0) == 0);
  CHECK(text.find("0.1,-0.2,2,0;1\n") != std::string::npos);
  const auto back = read_layout_csv(ss, Region{1.0});
  CHECK(back.positions == l.positions);
  CHECK(back.antennas_per_ap == 2);
  const Grouping wrong = single_group(3);
  CHECK_THROWS_AS(write_layout_csv(ss, l, &wrong), Error);
}

TEST_CASE("layout CSV errors") {
  std::istringstream wrong_header("x,y,m\n0,0,1\n");
  CHECK_THROWS_AS(read_layout_csv(wrong_header), Error);
  std::istringstream bad_number("x_km,y_km,antennas\n0,zero,1\n");
  CHECK_THROWS_AS(read_layout_csv(bad_number), Error);
  std::istringstream mixed("x_km,y_km,antennas\n0,0,1\n0.1,0,2\n");
  CHECK_THROWS_AS(read_layout_csv(mixed), Error);
  std::istringstream outside("x_km,y_km,antennas\n3,0,1\n");
  CHECK_THROWS_AS(read_layout_csv(outside, Region{1.0}), Error);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_layout_csv(empty), Error);
}

TEST_CASE("result and summary CSV layout") {
  ScenarioConfig c;
  c.name = "csvcheck";
  c.region_half_width = 1.0;
  c.outer = 50;
  c.inner = 100;
  c.csi = CsiMode::LeastSquares;
  c.power = PowerStrategy::Optimized;
  const auto r = run_scenario(c);
  std::ostringstream out;
  const std::vector<RunResult> runs{r};
  write_result_csv(out, runs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# scenario=csvcheck seed=1 config_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("# power_plan strategy=optimized rho=", 0) == 0);
  CHECK(line.find("rho_p_mean=") != std::string::npos);
  std::getline(in, line);
  CHECK(line == "scenario,seed,trial,snr_linear");
  std::getline(in, line);
  CHECK(line.rfind("csvcheck,1,0,", 0) == 0);
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == c.outer * c.inner);

  std::ostringstream summary;
  write_summary_csv(summary, runs);
  std::istringstream s(summary.str());
  std::getline(s, line);
  CHECK(line == "scenario,epsilon,gamma_eps,rate_bpcu,ci_halfwidth,n_trials");
  std::getline(s, line);
  CHECK(line.rfind("csvcheck,0.01,", 0) == 0);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}
