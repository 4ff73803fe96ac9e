#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cellfree/config.hpp"
#include "cellfree/deployment.hpp"
#include "cellfree/error.hpp"
#include "cellfree/grouping.hpp"
#include "cellfree/harness.hpp"
#include "cellfree/metrics.hpp"
#include "cellfree/ostbc.hpp"
#include "cellfree/power.hpp"
#include "cellfree/propagation.hpp"
#include "cellfree/result_io.hpp"
#include "cellfree/snr.hpp"

namespace py = pybind11;
using namespace cellfree;

namespace {

py::array_t<double> points_to_array(const std::vector<Point>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v(static_cast<py::ssize_t>(i), 0) = pts[i].x;
    v(static_cast<py::ssize_t>(i), 1) = pts[i].y;
  }
  return out;
}

std::vector<Point> array_to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw Error(ErrorCode::Dimension, "positions must have shape (n, 2)");
  auto v = a.unchecked<2>();
  std::vector<Point> pts;
  for (py::ssize_t i = 0; i < a.shape(0); ++i) pts.push_back({v(i, 0), v(i, 1)});
  return pts;
}

py::array_t<double> to_array(const std::vector<double>& xs) { return py::array_t<double>(xs.size(), xs.data()); }

ScenarioConfig resolve(const std::string& name_or_text) {
  if (name_or_text.find('=') != std::string::npos) return parse_config(name_or_text);
  for (const auto& e : experiment_catalog())
    for (const auto& v : e.variants)
      if (v.name == name_or_text) return v;
  throw Error(ErrorCode::InvalidParameter, "unknown variant '" + name_or_text + "'");
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["scenario"] = r.config.name;
  d["epsilon"] = r.outage.epsilon;
  d["gamma_eps"] = r.outage.gamma_eps;
  d["rate_bpcu"] = r.outage.rate_bpcu;
  d["ci_halfwidth"] = r.outage.ci_halfwidth;
  d["n_trials"] = r.outage.n_trials;
  d["method"] = r.method;
  d["sample_kind"] = r.kind == SampleKind::Snr ? "snr_linear" : "rate_bpcu";
  d["samples"] = to_array(r.samples);
  d["power_plan"] = describe_power(r);
  d["config_hash"] = r.config_hash;
  d["wall_seconds"] = r.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the cellfree coverage simulator";

  static py::exception<Error> error_type(m, "CellfreeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  m.def(
      "path_loss_db", [](double d) { return path_loss_db(d, PathLossParams{}); }, py::arg("distance_km"),
      "Three-slope path loss in dB with the default parameters.");
  m.def(
      "normalized_power",
      [](double power_mw, double bandwidth_hz, double temperature_k, double noise_figure_db) {
        return normalized_power(power_mw * 1e-3, bandwidth_hz, temperature_k, noise_figure_db);
      },
      py::arg("power_mw") = 1.0, py::arg("bandwidth_hz") = 2e5, py::arg("temperature_k") = 300.0,
      py::arg("noise_figure_db") = 9.0);

  m.def(
      "lambda_ls",
      [](double beta_bar, double rho_p, double tau_p, double rho_d, double es) {
        return lambda_ls(beta_bar, rho_p, tau_p, rho_d, es);
      },
      py::arg("beta_bar"), py::arg("rho_p"), py::arg("tau_p"), py::arg("rho_d"), py::arg("symbol_energy") = 1.0);
  m.def(
      "lambda_perfect", [](double beta_bar, double rho, double es) { return lambda_perfect(beta_bar, rho, es); },
      py::arg("beta_bar"), py::arg("rho"), py::arg("symbol_energy") = 1.0);
  m.def(
      "coverage_perfect", [](double gamma, const std::vector<double>& lambdas) { return coverage_perfect(gamma, lambdas); },
      py::arg("gamma"), py::arg("lambdas"), "P(SNR > gamma) for a sum of independent exponentials.");
  m.def(
      "outage_rate",
      [](double gamma, int tau_p, int tau_c, const std::string& code) {
        return outage_rate(gamma, tau_p, tau_c, OstbcCode::from_name(code));
      },
      py::arg("gamma_eps"), py::arg("tau_p"), py::arg("tau_c"), py::arg("code") = "single");

  py::class_<OstbcCode>(m, "OstbcCode")
      .def(py::init([](const std::string& name) { return OstbcCode::from_name(name); }), py::arg("name"))
      .def_property_readonly("name", &OstbcCode::name)
      .def_property_readonly("n_groups", &OstbcCode::n_groups)
      .def_property_readonly("n_symbols", &OstbcCode::n_symbols)
      .def_property_readonly("block_len", &OstbcCode::block_len)
      .def_property_readonly("rate", &OstbcCode::rate)
      .def(
          "build", [](const OstbcCode& c, const CVector& s) { return CMatrix(c.build(s)); }, py::arg("symbols"),
          "Code matrix (block_len x n_groups) for one symbol vector.")
      .def(
          "orthogonality_defect", [](const OstbcCode& c, const CVector& s) { return orthogonality_defect(c, s); },
          py::arg("symbols"));

  m.def(
      "place_ppp",
      [](double density, double half_width, std::uint64_t seed) {
        RandomStream rng(seed, StreamPurpose::Layout);
        return points_to_array(place_ppp(density, Region{half_width}, rng).positions);
      },
      py::arg("density"), py::arg("half_width"), py::arg("seed") = 1);
  m.def(
      "place_hex",
      [](double density, double half_width) { return points_to_array(place_hex(density, Region{half_width}).positions); },
      py::arg("density"), py::arg("half_width"));
  m.def("hex_spacing", &hex_spacing, py::arg("density"));

  m.def(
      "neighbor_grouping",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& positions, int n_groups) {
        return neighbor_grouping(array_to_points(positions), n_groups).assignment;
      },
      py::arg("positions"), py::arg("n_groups"));
  m.def(
      "random_grouping",
      [](std::size_t n, int n_groups, std::uint64_t seed) {
        RandomStream rng(seed, StreamPurpose::Grouping);
        return random_grouping(n, n_groups, rng).assignment;
      },
      py::arg("n_antennas"), py::arg("n_groups"), py::arg("seed") = 1);

  m.def("data_power", &data_power, py::arg("energy"), py::arg("rho_p"), py::arg("tau_p"), py::arg("tau_c"));
  m.def("optimal_pilot_power", &optimal_pilot_power, py::arg("beta"), py::arg("energy"), py::arg("tau_p"),
        py::arg("tau_c"), py::arg("symbol_energy") = 1.0);

  m.def("experiment_names", &experiment_names);
  m.def(
      "experiment_config",
      [](const std::string& name) {
        std::vector<std::string> out;
        for (const auto& v : experiment(name).variants) out.push_back(serialize_config(v));
        return out;
      },
      py::arg("name"), "Canonical config text of every variant of a preset experiment.");
  m.def(
      "parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); }, py::arg("text"),
      "Parse and re-serialize a key=value config.");
  m.def(
      "validate_config", [](const std::string& text) { validate_scenario(parse_config(text)); }, py::arg("text"));
  m.def(
      "run_scenario",
      [](const std::string& name_or_text, unsigned threads, std::optional<std::uint64_t> outer,
         std::optional<std::uint64_t> inner, std::optional<std::uint64_t> seed) {
        ScenarioConfig c = resolve(name_or_text);
        if (outer) c.outer = *outer;
        if (inner) c.inner = *inner;
        if (seed) c.seed = *seed;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(c, RunOptions{threads, false});
        }
        return result_dict(r);
      },
      py::arg("scenario"), py::arg("threads") = 0, py::arg("outer") = py::none(), py::arg("inner") = py::none(),
      py::arg("seed") = py::none(),
      "Run a preset variant (e.g. 'fig6/nominal') or a config text; returns the summary and samples.");
}
