#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zslice/cli.hpp"
#include "zslice/dispersion.hpp"
#include "zslice/errors.hpp"
#include "zslice/field_ops.hpp"
#include "zslice/invariants.hpp"
#include "zslice/propagator.hpp"
#include "zslice/transfer_oracle.hpp"

namespace py = pybind11;
using namespace zslice;

namespace {

prop::Method parse_method(const std::string& name) {
    if (name == "zform") return prop::Method::ZForm;
    if (name == "tform") return prop::Method::TForm;
    if (name == "fourd") return prop::Method::FourD;
    throw InvalidInput("method must be zform, tform or fourd");
}

lattice::LatticeSpec4D make_lattice(std::array<int, 4> dims, double m, double delta, double spacing) {
    lattice::LatticeSpec4D s;
    s.n_t = dims[0];
    s.n_x = dims[1];
    s.n_y = dims[2];
    s.n_z = dims[3];
    s.m = m;
    s.delta = delta;
    s.spacing = spacing;
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "z-sliced free scalar field engine";
    m.attr("__version__") = ZSLICE_VERSION;

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<Region>(m, "Region")
        .value("P1", Region::P1)
        .value("P2", Region::P2)
        .value("Boundary", Region::Boundary);

    m.def(
        "omega",
        [](double kx, double ky, double kz, double mass) { return omega({kx, ky, kz}, {mass, 0.0}); },
        py::arg("kx"), py::arg("ky"), py::arg("kz"), py::arg("m"));

    m.def(
        "lambda_of",
        [](double kx, double ky, double kt, double mass, double eps) {
            const auto d = lambda_of({kx, ky, kt}, {mass, eps});
            return py::make_tuple(d.lambda, d.region);
        },
        py::arg("kx"), py::arg("ky"), py::arg("kt"), py::arg("m"), py::arg("eps") = 0.0,
        "Returns (lambda, region).");

    m.def(
        "classify_region",
        [](double kx, double ky, double kt, double mass) { return classify_region({kx, ky, kt}, {mass, 0.0}); },
        py::arg("kx"), py::arg("ky"), py::arg("kt"), py::arg("m"));

    m.def("bracket_closed", &prop::bracket_closed, py::arg("lam"), py::arg("z"));

    m.def(
        "kz_contour_numeric",
        [](complex lam, double z, double cutoff, int nodes) {
            return prop::kz_contour_numeric(lam, z, {cutoff, nodes, 0.5});
        },
        py::arg("lam"), py::arg("z"), py::arg("cutoff") = 200.0, py::arg("nodes") = 200000);

    m.def(
        "propagator",
        [](const std::string& method, std::array<double, 4> p, double mass, double eps, double cutoff, int nodes) {
            py::gil_scoped_release release;
            const auto v = prop::propagator(parse_method(method), {p[0], p[1], p[2], p[3]}, {mass, eps},
                                            {cutoff, nodes, 0.5});
            return std::make_pair(v.value, v.error_estimate);
        },
        py::arg("method"), py::arg("point"), py::arg("m") = 1.0, py::arg("eps") = 0.1, py::arg("cutoff") = 6.0,
        py::arg("nodes") = 32, "Returns (value, error_estimate) at point (x, y, z, t).");

    m.def(
        "momentum_propagator",
        [](double kx, double ky, double kz, double kt, double mass, double eps) {
            return prop::momentum_propagator({kx, ky, kz, kt}, {mass, eps});
        },
        py::arg("kx"), py::arg("ky"), py::arg("kz"), py::arg("kt"), py::arg("m"), py::arg("eps") = 0.0);

    m.def(
        "build_phi_pi_fock",
        [](double w, int dim) {
            const auto f = field::build_phi_pi_fock(w, dim);
            return py::make_tuple(f.phi.entries, f.pi.entries);
        },
        py::arg("omega"), py::arg("dim"));

    m.def(
        "oracle_amplitudes",
        [](std::array<int, 4> dims, double delta, std::uint64_t seed, std::uint64_t index, double mass,
           double spacing) {
            const auto spec = make_lattice(dims, mass, delta, spacing);
            const auto form = lattice::build_action(spec);
            const auto b = lattice::random_boundary(spec, lattice::Axis::T, seed, index);
            return py::make_tuple(lattice::amplitude_direct(form, b).log_value,
                                  lattice::amplitude_sliced(form, b, lattice::Axis::T).log_value,
                                  lattice::amplitude_sliced(form, lattice::reorient(b), lattice::Axis::Z).log_value);
        },
        py::arg("dims"), py::arg("delta") = 0.1, py::arg("seed") = 42, py::arg("index") = 0, py::arg("m") = 1.0,
        py::arg("spacing") = 1.0, "Log amplitudes (direct, t-sliced, z-sliced) for one seeded boundary.");

    m.def(
        "oracle_agreement",
        [](std::array<int, 4> dims, double delta, std::uint64_t seed, int count) {
            const auto a = inv::oracle_agreement(make_lattice(dims, 1.0, delta, 1.0), seed, count);
            return py::dict(py::arg("direct_vs_t") = a.direct_vs_t, py::arg("direct_vs_z") = a.direct_vs_z,
                            py::arg("t_vs_z") = a.t_vs_z);
        },
        py::arg("dims") = std::array<int, 4>{3, 2, 2, 3}, py::arg("delta") = 0.1, py::arg("seed") = 42,
        py::arg("count") = 20);

    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed) {
            inv::SuiteOptions o;
            o.seed = seed;
            const auto rep = inv::run_suite(name, o);
            py::list checks;
            for (const auto& c : rep.checks)
                checks.append(py::dict(py::arg("name") = c.name, py::arg("measured") = c.measured,
                                       py::arg("threshold") = c.threshold,
                                       py::arg("comparison") = inv::to_string(c.comparison),
                                       py::arg("passed") = c.passed));
            return checks;
        },
        py::arg("name"), py::arg("seed") = 42);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Returns (exit_code, stdout, stderr).");
}
