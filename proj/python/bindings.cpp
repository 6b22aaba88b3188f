#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spectre/cli.hpp"
#include "spectre/errors.hpp"
#include "spectre/fourier_transfer.hpp"
#include "spectre/interval_transfer.hpp"
#include "spectre/inverse_problem.hpp"
#include "spectre/spectral.hpp"

namespace py = pybind11;
using namespace spectre;

namespace {

AssemblyMethod method_of(const std::string& name) { return assembly_method_from_string(name); }

}  // namespace

PYBIND11_MODULE(_spectre, m) {
    m.doc() = "Transfer-operator spectra of degree-two Blaschke circle maps";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<StructureError>(m, "StructureError", PyExc_RuntimeError);

    m.def("tau", [](cplx lam, cplx z) { return tau_eval(BlaschkeParam(lam), z); }, py::arg("lam"), py::arg("z"));
    m.def("fixed_point", [](cplx lam) { return fixed_point(BlaschkeParam(lam)); }, py::arg("lam"));
    m.def("lift", [](cplx lam, double x) { return lift(BlaschkeParam(lam), x); }, py::arg("lam"), py::arg("x"));
    m.def(
        "inverse_branches",
        [](cplx lam, cplx w) {
            const auto b = inverse_branches(BlaschkeParam(lam), w);
            return py::make_tuple(b.z1, b.z2);
        },
        py::arg("lam"), py::arg("w"));

    m.def(
        "transfer_matrix",
        [](cplx lam, int N, const std::string& method) { return assemble(BlaschkeParam(lam), N, method_of(method)).dense(); },
        "Fourier-basis matrix, rows and columns indexed -N..N", py::arg("lam"), py::arg("N"),
        py::arg("method") = "quadrature");
    m.def(
        "eigenvalues",
        [](cplx lam, int N, bool extended) {
            const BlaschkeParam p(lam);
            auto ev = extended ? eigenvalues_dense_extended(p, N) : eigenvalues_triangular(assemble(p, N));
            sort_by_modulus(ev);
            return ev;
        },
        py::arg("lam"), py::arg("N"), py::arg("extended") = false);
    m.def(
        "predicted_spectrum",
        [](cplx lam, int n_max) { return predicted_spectrum(BlaschkeParam(lam), n_max).expanded(); },
        py::arg("lam"), py::arg("n_max"));

    m.def("T", [](cplx lam, double x) { return T_eval(IntervalMapContext(BlaschkeParam(lam)), x); }, py::arg("lam"),
          py::arg("x"));
    m.def(
        "interval_branch",
        [](cplx lam, int k, double x) {
            const auto b = interval_branch(IntervalMapContext(BlaschkeParam(lam)), k, x);
            return py::make_tuple(b.value, b.derivative);
        },
        py::arg("lam"), py::arg("k"), py::arg("x"));
    m.def(
        "collocation_eigenvalues",
        [](cplx lam, int M) { return collocation_matrix(IntervalMapContext(BlaschkeParam(lam)), M).eigenvalues; },
        py::arg("lam"), py::arg("M"));
    m.def(
        "interval_spectrum_predicted",
        [](cplx lam, int n_max) {
            return interval_spectrum_predicted(IntervalMapContext(BlaschkeParam(lam)), n_max).expanded();
        },
        py::arg("lam"), py::arg("n_max"));

    m.def(
        "verify_inverse_problem",
        [](double lam, int grid_size) {
            py::list out;
            for (const auto& r : verify_inverse_problem(lam, grid_size)) {
                py::dict d;
                d["equation"] = r.equation;
                d["max_residual"] = r.max_residual;
                d["tolerance"] = r.tolerance;
                d["pass"] = r.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("lam"), py::arg("grid_size") = 257);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line interface in-process; returns (exit code, stdout, stderr)", py::arg("args"));
}
