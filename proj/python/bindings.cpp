#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bflux/study.hpp"

namespace py = pybind11;
using namespace bflux;

namespace {

py::dict row_to_dict(const ConvergenceRow& row) {
    py::dict d;
    d["level"] = row.level;
    d["ncells"] = row.n_cells;
    d["h"] = row.h;
    d["dofs"] = row.dofs;
    d["h1b"] = row.h1b;
    d["h2b"] = row.h2b;
    d["vertex_last"] = row.vertex_last;
    d["vertex_all"] = row.vertex_all;
    return d;
}

py::list table_to_list(const ConvergenceTable& table) {
    py::list rows;
    for (const ConvergenceRow& row : table.rows) rows.append(row_to_dict(row));
    return rows;
}

Problem problem_from_name(const std::string& name) {
    if (name == "study2d_periodic") return Problem::study2d_periodic;
    if (name == "study2d_square") return Problem::study2d_square;
    if (name == "study2d_disk") return Problem::study2d_disk;
    throw std::invalid_argument("unknown 2D study '" + name + "'");
}

RefinementMode mode_from_name(const std::string& name) {
    if (name == "normal") return RefinementMode::normal;
    if (name == "isotropic") return RefinementMode::isotropic;
    throw std::invalid_argument("unknown refinement mode '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "boundary p-refinement finite elements: studies, spectra, oracles";

    py::class_<ReferenceBasis1D>(m, "ReferenceBasis1D",
                                 "equispaced nodal Lagrange basis on [0, 1]")
        .def(py::init<int>(), py::arg("degree"))
        .def_property_readonly("degree", &ReferenceBasis1D::degree)
        .def_property_readonly("nodes",
                               [](const ReferenceBasis1D& b) { return b.nodes(); })
        .def("value", &ReferenceBasis1D::value, py::arg("j"), py::arg("xi"))
        .def("derivative", &ReferenceBasis1D::derivative, py::arg("j"), py::arg("xi"),
             py::arg("order"));

    m.def(
        "gauss_rule",
        [](int n) {
            const QuadratureRule rule = gauss_rule(n);
            return py::make_tuple(rule.points, rule.weights);
        },
        py::arg("n"), "Gauss-Legendre points and weights on [0, 1]");
    m.def("quadrature_points_for", &quadrature_points_for, py::arg("trial_degree"),
          py::arg("test_degree"));

    m.def(
        "run_study_1d",
        [](int m_deg, int p, int levels, double b, double c) {
            return table_to_list(run_study_1d(m_deg, p, levels, b, c));
        },
        py::arg("m"), py::arg("p"), py::arg("levels") = 7, py::arg("b") = 1.0,
        py::arg("c") = 2.0,
        "refinement study of the 1D problem with sin(10 y); returns table rows");

    m.def(
        "run_study_2d",
        [](const std::string& problem, int p, const std::string& mode, int levels, double b0,
           double b1, double c) {
            Coefficients coeff;
            coeff.b0 = b0;
            coeff.b1 = b1;
            coeff.c = c;
            return table_to_list(
                run_study_2d(problem_from_name(problem), p, mode_from_name(mode), levels, coeff));
        },
        py::arg("problem"), py::arg("p"), py::arg("mode") = "normal", py::arg("levels") = 5,
        py::arg("b0") = 1.0, py::arg("b1") = 1.0, py::arg("c") = 2.0);

    m.def(
        "fit_rates",
        [](const std::vector<double>& errors) {
            const RateSummary s = fit_rates(errors);
            py::dict d;
            d["per_step"] = s.per_step;
            d["stagnant"] = s.stagnant;
            d["summary"] = s.summary;
            d["rows_excluded"] = s.rows_excluded;
            return d;
        },
        py::arg("errors"));

    m.def("fourier_interpolant", &fourier_interpolant, py::arg("k"), py::arg("dx"), py::arg("x"));
    m.def("mass_eigenvalue", &mass_eigenvalue, py::arg("k"), py::arg("dx"));
    m.def("stiffness_eigenvalue", &stiffness_eigenvalue, py::arg("k"), py::arg("dx"),
          py::arg("b0"), py::arg("c"));
    m.def("eigenvalue_ratio", &eigenvalue_ratio, py::arg("k"), py::arg("dx"), py::arg("b0"),
          py::arg("c"));
    m.def("resolvable_wavenumbers", &resolvable_wavenumbers, py::arg("n_cells"));

    m.def(
        "decoupling_discrepancy",
        [](int n, int p, double b0, double b1, double c) {
            Coefficients coeff;
            coeff.b0 = b0;
            coeff.b1 = b1;
            coeff.c = c;
            const auto results = run_decouple_check(coeff, {n}, {p});
            return results.front().discrepancy;
        },
        py::arg("n"), py::arg("p"), py::arg("b0") = 1.0, py::arg("b1") = 1.0, py::arg("c") = 2.0,
        "max relative nodal gap between the Fourier-decoupled and direct solves");

    py::class_<GreensOracle>(m, "GreensOracle")
        .def_readonly("b", &GreensOracle::b)
        .def_readonly("c", &GreensOracle::c)
        .def_readonly("length", &GreensOracle::length)
        .def_readonly("cell_width", &GreensOracle::cell_width)
        .def_readonly("D", &GreensOracle::D)
        .def_readonly("c1", &GreensOracle::c1)
        .def_readonly("c2", &GreensOracle::c2)
        .def_readonly("c3", &GreensOracle::c3)
        .def_readonly("c4", &GreensOracle::c4)
        .def_property_readonly("kink", &GreensOracle::kink)
        .def("eval", [](const GreensOracle& g, double y, int order) {
            return greens_eval(g, y, order);
        }, py::arg("y"), py::arg("order") = 0);

    m.def("greens_build", &greens_build, py::arg("b"), py::arg("c"), py::arg("L"), py::arg("dy"));

    m.def(
        "check_appendix_inequalities",
        [](int samples, std::uint64_t seed) {
            const InequalityReport r = check_appendix_inequalities(samples, seed);
            py::dict d;
            d["samples"] = r.samples;
            d["decay_violations"] = r.decay_violations;
            d["exp_ratio_violations"] = r.exp_ratio_violations;
            d["exp_pair_violations"] = r.exp_pair_violations;
            d["exp_sinh_violations"] = r.exp_sinh_violations;
            d["total"] = r.total();
            return d;
        },
        py::arg("samples") = 10000, py::arg("seed") = 42);

    m.def(
        "run_spectral_checks",
        [](const std::vector<int>& cell_counts, double b0, double c) {
            const SpectralCheckReport r = run_spectral_checks(cell_counts, b0, c);
            py::dict d;
            d["max_eigen_identity_error"] = r.max_eigen_identity_error;
            d["max_l2_orthogonality_error"] = r.max_l2_orthogonality_error;
            d["max_mode_orthogonality_error"] = r.max_mode_orthogonality_error;
            d["ratio_bounds_hold"] = r.ratio_bounds_hold;
            return d;
        },
        py::arg("cell_counts"), py::arg("b0") = 1.0, py::arg("c") = 2.0);

    m.def(
        "manufactured_value",
        [](const std::string& name, double x, double y) {
            return make_manufactured(name).value({x, y});
        },
        py::arg("name"), py::arg("x"), py::arg("y"));
    m.def(
        "manufactured_forcing",
        [](const std::string& name, double x, double y, double b0, double b1, double c) {
            Coefficients coeff;
            coeff.b0 = b0;
            coeff.b1 = b1;
            coeff.c = c;
            return make_manufactured(name).forcing({x, y}, coeff);
        },
        py::arg("name"), py::arg("x"), py::arg("y"), py::arg("b0") = 1.0, py::arg("b1") = 1.0,
        py::arg("c") = 2.0);
}
