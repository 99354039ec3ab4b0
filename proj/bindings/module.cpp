#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jsr/apps.hpp"
#include "jsr/gripenberg.hpp"
#include "jsr/matrixset.hpp"
#include "jsr/norms.hpp"
#include "jsr/polytope.hpp"

namespace py = pybind11;
using namespace jsr;

namespace {

EngineOptions make_options(int grip_n, int grip_d, int max_restarts, double delta,
                           int max_iterations, std::size_t max_vertices, int threads) {
    EngineOptions opt;
    opt.grip_n = grip_n;
    opt.grip_d = grip_d;
    opt.max_restarts = max_restarts;
    opt.polytope.delta = delta;
    opt.polytope.max_iterations = max_iterations;
    opt.polytope.max_vertices = max_vertices;
    opt.polytope.threads = threads;
    return opt;
}

std::vector<DifferencePattern> parse_patterns(const std::vector<std::string>& texts) {
    std::vector<DifferencePattern> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(DifferencePattern::parse(t));
    return out;
}

}  // namespace

PYBIND11_MODULE(_jsrpoly, m) {
    m.doc() = "joint spectral radius bounds via the invariant polytope algorithm";

    py::register_exception<ParseError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalFailure", PyExc_ArithmeticError);
    py::register_exception<UnsupportedCaseError>(m, "UnsupportedCase", PyExc_RuntimeError);
    py::register_exception<BudgetError>(m, "BudgetExceeded", PyExc_RuntimeError);

    py::class_<ProductWord>(m, "ProductWord")
        .def(py::init([](std::vector<int> idx) {
                 ProductWord w;
                 w.indices = std::move(idx);
                 return w;
             }),
             py::arg("indices"))
        .def_readonly("indices", &ProductWord::indices)
        .def("__len__", &ProductWord::length)
        .def("__repr__", [](const ProductWord& w) { return "ProductWord(" + w.str() + ")"; })
        .def("__str__", &ProductWord::str)
        .def("__eq__", &ProductWord::operator==);

    py::class_<MatrixSet>(m, "MatrixSet")
        .def(py::init<std::vector<Matrix>, double>(), py::arg("matrices"), py::arg("scale") = 1.0)
        .def_readonly("matrices", &MatrixSet::matrices)
        .def_readonly("scale", &MatrixSet::scale)
        .def_property_readonly("dim", &MatrixSet::dim)
        .def("__len__", &MatrixSet::count)
        .def("at", &MatrixSet::at, py::arg("j"), "1-based member access")
        .def("scaled_by", &MatrixSet::scaled_by, py::arg("factor"));

    py::class_<JsrBounds>(m, "JsrBounds")
        .def_readonly("lower", &JsrBounds::lower)
        .def_readonly("upper", &JsrBounds::upper)
        .def_readonly("exact", &JsrBounds::exact)
        .def_readonly("lower_evidence", &JsrBounds::lower_evidence)
        .def_readonly("upper_evidence", &JsrBounds::upper_evidence)
        .def("__repr__", [](const JsrBounds& b) {
            return "JsrBounds(" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                   (b.exact ? ", exact)" : ")");
        });

    py::class_<SearchReport>(m, "SearchReport")
        .def_readonly("candidates", &SearchReport::candidates)
        .def_readonly("lower_bound", &SearchReport::lower_bound)
        .def_readonly("upper_bound", &SearchReport::upper_bound)
        .def_readonly("upper_final", &SearchReport::upper_final)
        .def_readonly("evaluations", &SearchReport::evaluations);

    py::class_<EngineResult>(m, "EngineResult")
        .def_readonly("bounds", &EngineResult::bounds)
        .def_readonly("smp_words", &EngineResult::smp_words)
        .def_readonly("restarts", &EngineResult::restarts)
        .def_readonly("used_delta_fallback", &EngineResult::used_delta_fallback);

    py::class_<CapacityResult>(m, "CapacityResult")
        .def_readonly("lower", &CapacityResult::lower)
        .def_readonly("upper", &CapacityResult::upper)
        .def_readonly("exact", &CapacityResult::exact)
        .def_readonly("jsr", &CapacityResult::jsr)
        .def_readonly("matrices", &CapacityResult::matrices);

    py::class_<RegularityResult>(m, "RegularityResult")
        .def_readonly("alpha_lower", &RegularityResult::alpha_lower)
        .def_readonly("alpha_upper", &RegularityResult::alpha_upper)
        .def_readonly("exact", &RegularityResult::exact)
        .def_readonly("jsr", &RegularityResult::jsr)
        .def_readonly("matrices", &RegularityResult::matrices)
        .def_readonly("omega", &RegularityResult::omega);

    // ---- matrix / word primitives --------------------------------------
    m.def("spectral_radius", &spectral_radius, py::arg("matrix"));
    m.def("operator_norm", &operator_norm, py::arg("matrix"));
    m.def("evaluate", &evaluate, py::arg("set"), py::arg("word"),
          "product A_{j_n}...A_{j_1} times scale^n");
    m.def("normalized_spectral_radius", &normalized_spectral_radius, py::arg("set"),
          py::arg("word"));
    m.def("canonicalize_word", &canonicalize_word, py::arg("word"));

    // ---- norms -----------------------------------------------------------
    m.def(
        "minkowski_norm",
        [](const Matrix& vertices, const Vector& x, const std::string& kind) {
            HullKind k;
            if (kind == "symmetrized")
                k = HullKind::Symmetrized;
            else if (kind == "cone")
                k = HullKind::Cone;
            else
                throw ParseError("kind must be 'symmetrized' or 'cone'");
            PolytopeVertices v(k, vertices);
            return minkowski_norm(v, x).value;
        },
        py::arg("vertices"), py::arg("x"), py::arg("kind") = "symmetrized",
        "Minkowski norm of x w.r.t. the symmetrized hull / cone of the vertex columns");

    // ---- bounds ------------------------------------------------------------
    m.def(
        "gripenberg_lower",
        [](const MatrixSet& set, int n_keep, int depth) {
            return modified_gripenberg(set, n_keep, depth);
        },
        py::arg("set"), py::arg("n_keep") = 20, py::arg("depth") = 100);
    m.def("classic_gripenberg", &classic_gripenberg, py::arg("set"), py::arg("delta_acc"),
          py::arg("depth_cap"), py::arg("frontier_cap") = std::size_t{4'000'000});
    m.def("brute_force_bounds", &brute_force_bounds, py::arg("set"), py::arg("depth"),
          py::arg("budget") = std::int64_t{4'000'000});

    m.def(
        "compute_jsr",
        [](const MatrixSet& set, int grip_n, int grip_d, int max_restarts, double delta,
           int max_iterations, std::size_t max_vertices, int threads) {
            return compute_jsr(set, make_options(grip_n, grip_d, max_restarts, delta,
                                                 max_iterations, max_vertices, threads));
        },
        py::arg("set"), py::arg("grip_n") = 20, py::arg("grip_d") = 100,
        py::arg("max_restarts") = 5, py::arg("delta") = 1.0, py::arg("max_iterations") = 1000,
        py::arg("max_vertices") = std::size_t{100'000}, py::arg("threads") = 0,
        "certified JSR bounds (exact when the invariant polytope terminates with delta = 1)");

    // ---- applications --------------------------------------------------------
    m.def(
        "capacity",
        [](const std::vector<std::string>& patterns, int grip_n, int grip_d) {
            EngineOptions opt;
            opt.grip_n = grip_n;
            opt.grip_d = grip_d;
            return capacity(parse_patterns(patterns), opt);
        },
        py::arg("patterns"), py::arg("grip_n") = 20, py::arg("grip_d") = 100,
        "capacity of codes avoiding the difference patterns (strings over o,+,-,p)");

    m.def(
        "regularity",
        [](const std::vector<double>& mask, long long dilation, long long support_start,
           int order) {
            SubdivisionScheme s;
            s.mask = mask;
            s.dilation = dilation;
            s.support_start = support_start;
            s.digits = SubdivisionScheme::default_digits(dilation);
            return regularity(s, order);
        },
        py::arg("mask"), py::arg("dilation") = 2, py::arg("support_start") = 0,
        py::arg("order") = 1, "Hoelder regularity of the subdivision limit function");

    m.def(
        "daubechies_regularity",
        [](int n) {
            SubdivisionScheme s = daubechies_scheme(n);
            return regularity(s, n);
        },
        py::arg("n"), "Hoelder regularity of the Daubechies wavelet with 2n taps (2 <= n <= 8)");

    m.def(
        "daubechies_mask",
        [](int n) { return daubechies_scheme(n).mask; }, py::arg("n"));

    m.def("fixture", &fixture, py::arg("name"), "named worked-example matrix family");
    m.def("fixture_names", &fixture_names);
}
