#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "padicms/chair.hpp"
#include "padicms/diffraction.hpp"
#include "padicms/limitperiodic.hpp"
#include "padicms/limitquasi.hpp"
#include "padicms/padic.hpp"
#include "padicms/substitution.hpp"

namespace py = pybind11;
using namespace padicms;

namespace {

py::int_ big(const Integer& x) { return py::int_(py::str(x.str())); }

Integer from_py(const py::int_& x) { return Integer(py::str(x).cast<std::string>()); }

std::array<double, 3> as_h(const std::vector<double>& h) {
    if (h.size() != 3) throw std::invalid_argument("weights must have 3 entries");
    return {h[0], h[1], h[2]};
}

} // namespace

PYBIND11_MODULE(_padicms, m) {
    m.doc() = "model sets with p-adic and mixed internal spaces";

    // --- three-letter limit-periodic system -------------------------------
    m.def(
        "sequence_on_range",
        [](const py::int_& lo, const py::int_& hi) {
            py::list out;
            for (const auto& [x, type] : sequence_on_range(from_py(lo), from_py(hi)))
                out.append(py::make_tuple(big(x), std::string(1, type)));
            return out;
        },
        py::arg("lo"), py::arg("hi"),
        "anchors of the two-sided fixed point on [lo, hi] as (position, type)");
    m.def(
        "member_full",
        [](const std::string& type, const py::int_& x) {
            if (type.size() != 1) throw std::invalid_argument("type is one letter");
            return member_full(type[0], from_py(x));
        },
        py::arg("type"), py::arg("x"), "exact untruncated window membership");
    m.def(
        "window_measures",
        [](int truncation) {
            WindowMeasures w = window_measures(truncation);
            py::dict d;
            d["truncation"] = w.truncation;
            d["a"] = rational_str(w.a);
            d["b"] = rational_str(w.b);
            d["c"] = rational_str(w.c);
            d["closed_form"] = rational_str(w.closed_form);
            d["a_limit"] = rational_str(w.a_limit);
            d["weighted_cover"] = rational_str(w.weighted_cover);
            return d;
        },
        py::arg("truncation"), "truncated and limiting Haar measures of the windows");
    m.def(
        "verify_windows",
        [](int truncation, const py::int_& radius) {
            VerifyReport r = verify_against_substitution(truncation, from_py(radius));
            py::dict d;
            d["checked"] = r.checked;
            d["matched"] = r.matched;
            d["mismatches"] = py::int_(py::ssize_t(r.mismatches.size()));
            d["tail"] = py::int_(py::ssize_t(r.tail.size()));
            d["ok"] = r.ok();
            d["exact_equal"] = r.exact_equal();
            return d;
        },
        py::arg("truncation"), py::arg("radius"),
        "windows against the substitution fixed point on [-radius, radius]");

    // --- p-adic plumbing ---------------------------------------------------
    m.def(
        "padic_distance",
        [](const std::string& x, const std::string& y, const py::int_& p) {
            return rational_str(padic_distance(Rational(x), Rational(y), from_py(p)));
        },
        py::arg("x"), py::arg("y"), py::arg("p"), "p-adic distance of two rationals");

    // --- substitutions -----------------------------------------------------
    m.def(
        "dekking_coincidence",
        [](const std::string& rules, int max_depth) {
            CoincidenceReport r = dekking_coincidence(SubstitutionSystem::parse(rules), max_depth);
            py::dict d;
            d["has_coincidence"] = r.has_coincidence;
            d["depth"] = r.depth;
            d["position"] = r.position;
            return d;
        },
        py::arg("rules"), py::arg("max_depth") = 8,
        "column coincidence of a constant-length substitution");

    // --- chair tiling ------------------------------------------------------
    m.def(
        "chair_class",
        [](long long x, long long y) { return class_by_descent(Vec2I{Integer(x), Integer(y)}).k; },
        py::arg("x"), py::arg("y"), "orientation class of a lattice point by descent");
    m.def(
        "chair_patch",
        [](int level) {
            ChairState st = chair_recursion(level);
            py::list out;
            for (int k = 0; k < 4; ++k)
                for (const Vec2I& v : st.stage(level, k))
                    out.append(py::make_tuple(big(v.x), big(v.y), k));
            return out;
        },
        py::arg("level"), "labeled points of the level patch");
    m.def(
        "chair_deficit",
        [](int level, const std::string& mode) {
            ChairState st = chair_recursion(level);
            ChairWindows w = chair_windows(st, mode == "conservative"
                                                   ? ChairWindowMode::Conservative
                                                   : ChairWindowMode::Refined);
            return rational_str(w.deficit());
        },
        py::arg("level"), py::arg("mode") = "refined", "window measure deficit 1 - sum");

    // --- sqrt2 limit-quasiperiodic system ----------------------------------
    m.def(
        "quasi_sandwich_json",
        [](int steps, int depth) { return sandwich_report_json(sandwich_check(steps, depth)); },
        py::arg("steps"), py::arg("depth"),
        "inner/outer model-set sandwich report as a JSON string");
    m.def(
        "quasi_patch_sizes",
        [](int steps) {
            QuasiPatch p = generate_sequence_exact(steps);
            return py::make_tuple(py::ssize_t(p.lambda_a.size()), py::ssize_t(p.lambda_b.size()));
        },
        py::arg("steps"), "letter counts of the exact inflation patch");

    // --- diffraction --------------------------------------------------------
    m.def(
        "amplitudes",
        [](const py::int_& mm, int n) {
            auto a = amplitudes_3adic(module_element(from_py(mm), n));
            return std::vector<std::complex<double>>(a.begin(), a.end());
        },
        py::arg("m"), py::arg("n"), "closed-form amplitudes (A_a, A_b, A_c) at k = m/3^n");
    m.def(
        "intensity",
        [](const py::int_& mm, int n, const std::vector<double>& h) {
            return intensity(module_element(from_py(mm), n), as_h(h));
        },
        py::arg("m"), py::arg("n"), py::arg("weights"), "Bragg intensity at k = m/3^n");
    m.def(
        "fourier_bohr",
        [](const py::int_& radius, const std::string& k, const std::vector<double>& h) {
            return fourier_bohr_numeric(sequence_patch(from_py(radius), as_h(h)), Rational(k));
        },
        py::arg("radius"), py::arg("k"), py::arg("weights"),
        "finite-size amplitude estimate on the sequence patch");
    m.def(
        "spectrum_max_rel_err",
        [](const py::int_& radius, int nmax, const std::string& kmax,
           const std::vector<double>& h, int strongest) {
            auto patch = sequence_patch(from_py(radius), as_h(h));
            auto elems = fourier_module(nmax, Rational(0), Rational(kmax));
            auto rep = spectrum_compare(patch, as_h(h), elems, strongest, 0.05, 0);
            return py::make_tuple(rep.max_rel_err_strongest, rep.formulas_ok);
        },
        py::arg("radius"), py::arg("nmax"), py::arg("kmax"), py::arg("weights"),
        py::arg("strongest") = 20,
        "(max relative error over strongest peaks, formulas_ok)");
}
