#include "rankone/eiscont.hpp"
#include "rankone/heights.hpp"
#include "rankone/serialize.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rankone;

namespace {

GridParams grid(const std::string& family, int r, int n_y, double y_lo, double y_hi, int xi_max, double a) {
    GridParams gp;
    gp.family = parse_family(family);
    gp.r = r;
    gp.n_y = n_y;
    gp.y_lo = y_lo;
    gp.y_hi = y_hi;
    gp.xi_max = xi_max;
    gp.a = a;
    return gp;
}

RationalVector rationals(const std::vector<std::string>& xs) {
    RationalVector v;
    for (const auto& s : xs) v.push_back(Rational::parse(s));
    return v;
}

}  // namespace

PYBIND11_MODULE(_rankone, m) {
    m.doc() = "Rank-one Casimir operators, cusp spectra, Eisenstein continuation and heights";

    static py::exception<Error> exc(m, "RankoneError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, e.what());
        }
    });

    // JSON results travel as strings; the python package decodes them.
    m.def("derive_casimir_json", [](const std::string& family, int r) {
        FormSpec spec = make_form(parse_family(family), r);
        Derivation d = derive_laplacian(spec);
        ReferenceFormula ref = reference_formula(spec, true);
        json out = {{"operator", to_json(d.op)},
                    {"casimir", to_json(d.omega)},
                    {"reference", ref.label},
                    {"diff", to_json(compare_diffop(d.op, ref.op, ref.renorm))}};
        return out.dump();
    }, py::arg("family"), py::arg("r"));

    m.def("operator_str", [](const std::string& family, int r) {
        return derive_laplacian(make_form(parse_family(family), r)).op.str();
    }, py::arg("family"), py::arg("r"));

    m.def("iwasawa_relations_hold", [](const std::string& family, int r) {
        return verify_iwasawa_relations(make_form(parse_family(family), r)).all_pass();
    }, py::arg("family"), py::arg("r"));

    m.def("spectrum", [](const std::string& family, int r, int k, int n_y, double y_lo, double y_hi, int xi_max, double a) {
        GridParams gp = grid(family, r, n_y, y_lo, y_hi, xi_max, a);
        return rankone::spectrum(apply_pseudocusp_constraint(assemble(gp.family, build_grid(gp)), a), k).eigenvalues;
    }, py::arg("family") = "O", py::arg("r") = 2, py::arg("k") = 10, py::arg("n_y") = 256, py::arg("y_lo") = 1.0,
       py::arg("y_hi") = 64.0, py::arg("xi_max") = 8, py::arg("a") = 2.0);

    m.def("eisenstein_series", [](double x, double y, cplx s, int truncation) {
        return rankone::eisenstein_series({x, y}, s, truncation).value;
    }, py::arg("x"), py::arg("y"), py::arg("s"), py::arg("truncation") = 2000);

    m.def("continue_eisenstein", [](cplx s, double a, double a1, double a2, int n_y, double y_hi) {
        GridParams gp = grid("O", 2, n_y, 1.0, y_hi, 0, a);
        CylinderGrid g = build_grid(gp);
        ContinuationParams p;
        p.a = a;
        p.a1 = a1;
        p.a2 = a2;
        ContinuationResult r = rankone::continue_eisenstein(s, assemble(Family::O, g), p);
        py::dict d;
        d["y"] = g.y;
        d["E"] = std::vector<cplx>(r.E.data(), r.E.data() + r.E.size());
        d["lambda"] = r.lambda;
        d["interior_residual"] = r.interior_residual;
        d["eta_coefficient"] = r.eta_coefficient;
        d["residual_mass_fraction"] = r.residual_mass_fraction;
        return d;
    }, py::arg("s"), py::arg("a") = 20.0, py::arg("a1") = 4.0, py::arg("a2") = 2.0, py::arg("n_y") = 512,
       py::arg("y_hi") = 64.0);

    m.def("global_height", [](const std::vector<std::string>& x) {
        HeightReport h = global_height(rationals(x));
        return py::make_tuple(h.global, h.global_squared.pretty());
    }, py::arg("x"), "Height of a rational vector given as strings like '1/2'; returns (eta, eta^2 exact).");

    m.def("scaling_holds", [](const std::string& t, const std::vector<std::string>& x) {
        return scaling_check(Rational::parse(t), rationals(x)).exact_equal;
    }, py::arg("t"), py::arg("x"));

    m.def("finite_below", &rankone::finite_below, py::arg("c"), py::arg("n"), py::arg("box"));
}
