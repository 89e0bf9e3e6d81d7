#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "dynstab/dgfamily.hpp"
#include "dynstab/greenpot.hpp"
#include "dynstab/mapparse.hpp"
#include "dynstab/slicemass.hpp"

namespace py = pybind11;
using namespace dynstab;

namespace {

Limits make_limits(int degree_cap, int conductor_cap) { return Limits{degree_cap, conductor_cap}; }

NormalizedLift lift_for(const std::string& t, const std::string& map) {
  if (map.empty() == t.empty()) throw DomainError("give exactly one of t or map");
  if (!map.empty()) return NormalizedLift(parse_map_float(map));
  return NormalizedLift(dg_build(parse_parameter(t)).lift);
}

}  // namespace

PYBIND11_MODULE(_dynstab, m) {
  m.doc() = "Exact degree sequences, stability checks and Green potentials for polynomial self-maps of P^2";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<CrossCheckFailure>(m, "CrossCheckFailure", PyExc_RuntimeError);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "degree_report_json",
      [](const std::string& t, int count, int degree_cap, int conductor_cap) {
        const auto lim = make_limits(degree_cap, conductor_cap);
        const Parameter p = parse_parameter(t);
        if (!std::holds_alternative<Rational>(p)) throw DomainError("exact parameter p/q required");
        py::gil_scoped_release release;
        return degree_sequence(*dg_build(std::get<Rational>(p), lim).exact_lift, count, lim).to_json();
      },
      py::arg("t"), py::arg("N"), py::arg("degree_cap") = 64, py::arg("conductor_cap") = kDefaultConductorCap);

  m.def(
      "map_degree_report_json",
      [](const std::string& map, int count, int conductor, int degree_cap) {
        const auto f = parse_map_exact(map, conductor);
        py::gil_scoped_release release;
        return degree_sequence(f, count, make_limits(degree_cap, kDefaultConductorCap)).to_json();
      },
      py::arg("map"), py::arg("N"), py::arg("conductor") = 4, py::arg("degree_cap") = 64);

  m.def(
      "cross_validate_json",
      [](const std::string& t, int count) {
        const Parameter p = parse_parameter(t);
        if (!std::holds_alternative<Rational>(p)) throw DomainError("exact parameter p/q required");
        py::gil_scoped_release release;
        return to_json(dg_cross_validate(std::get<Rational>(p), count));
      },
      py::arg("t"), py::arg("N"));

  m.def(
      "green_value",
      [](const std::vector<Complex>& point, int n, const std::string& t, const std::string& map) {
        return green_value(lift_for(t, map), point, n);
      },
      py::arg("point"), py::arg("n"), py::arg("t") = "", py::arg("map") = "");

  m.def(
      "green_samples",
      [](int count, int n, std::uint64_t seed, const std::string& t, const std::string& map) {
        const auto lift = lift_for(t, map);
        const auto pts = sample_sphere(count, seed, lift.dimension());
        std::vector<double> out(pts.size());
        py::gil_scoped_release release;
        parallel_for(static_cast<int>(pts.size()), [&](int i) { out[i] = green_value(lift, pts[i], n); });
        return out;
      },
      py::arg("count"), py::arg("n"), py::arg("seed") = 0, py::arg("t") = "", py::arg("map") = "");

  m.def("sample_sphere", &sample_sphere, py::arg("count"), py::arg("seed"), py::arg("dimension") = 3);

  m.def(
      "fixed_point",
      [](const std::string& t) {
        const auto z = dg_fixed_point(parse_parameter(t));
        return std::vector<Complex>(z.begin(), z.end());
      },
      py::arg("t"));

  m.def(
      "sweep",
      [](double t_star, const std::vector<double>& offsets, int n, double M, int lines, std::uint64_t seed,
         int resolution) {
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = lemma_sweep([](double t) { return NormalizedLift(dg_build(t).lift); }, t_star, offsets, n, M, lines,
                             seed, resolution);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["t"] = r.t;
          d["offset"] = r.offset;
          d["n"] = r.n;
          d["M"] = r.M;
          d["lines"] = r.lines;
          d["mean_sublevel"] = r.mean_sublevel;
          d["mean_total"] = r.mean_total;
          out.append(d);
        }
        return out;
      },
      py::arg("t_star"), py::arg("offsets"), py::arg("n"), py::arg("M") = 3.0, py::arg("lines") = 16,
      py::arg("seed") = 0, py::arg("resolution") = 512);
}
