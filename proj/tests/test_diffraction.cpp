#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicms/chair.hpp"
#include "padicms/diffraction.hpp"
#include "padicms/limitperiodic.hpp"
#include "padicms/substitution.hpp"

#include <cmath>
#include <complex>

using namespace padicms;

namespace {

WeightedPointPatch thue_morse_patch(int iterations) {
    SubstitutionSystem tm = SubstitutionSystem::parse("a -> ab\nb -> ba\n");
    std::string w = one_sided_patch(tm, 'a', iterations).right_word;
    std::vector<WeightedPoint> pts;
    long n = long(w.size());
    for (long i = 0; i < n; ++i) pts.push_back({Rational(i - n / 2), w[i] == 'a' ? 1.0 : -1.0});
    return make_patch(std::move(pts), Rational(n / 2));
}

} // namespace

TEST_CASE("module elements validate and canonicalize") {
    CHECK(module_element(Integer(0), 2).value() == Rational(0));
    CHECK(module_element(Integer(9), 2).value() == Rational(1));
    CHECK(module_element(Integer(1), 2).value() == Rational(1, 9));
    CHECK(module_element(Integer(-2), 3).value() == Rational(-2, 27));
    CHECK(module_element(Integer(5), 2).m == 5);
    CHECK_THROWS_AS(module_element(Integer(1), 1), std::invalid_argument);
    CHECK_THROWS_AS(module_element(Integer(3), 3), std::invalid_argument);
    CHECK_THROWS_AS(module_element(Integer(-6), 4), std::invalid_argument);

    // n = 2 is the catch-all floor: every multiple of 1/9 canonicalizes there
    auto c = canonical_module_element(Rational(3, 27)); // reduces to 1/9
    CHECK(c.m == 1);
    CHECK(c.n == 2);
    c = canonical_module_element(Rational(1));
    CHECK(c.m == 9);
    CHECK(c.n == 2);
    c = canonical_module_element(Rational(1, 3));
    CHECK(c.m == 3);
    CHECK(c.n == 2);
    c = canonical_module_element(Rational(-5));
    CHECK(c.m == -45);
    CHECK(c.n == 2);
    c = canonical_module_element(Rational(2, 27));
    CHECK(c.m == 2);
    CHECK(c.n == 3);
    CHECK_THROWS_AS(canonical_module_element(Rational(1, 5)), std::domain_error);
    CHECK_THROWS_AS(canonical_module_element(Rational(5, 6)), std::domain_error);

    auto e = module_element(Integer(7), 5);
    auto back = canonical_module_element(e.value());
    CHECK(back.m == e.m);
    CHECK(back.n == e.n);
}

TEST_CASE("fourier module enumeration is sorted, canonical, complete") {
    auto ten = fourier_module(2, Rational(0), Rational(1));
    REQUIRE(ten.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(ten[std::size_t(i)].m == i);
        CHECK(ten[std::size_t(i)].n == 2);
    }

    CHECK(fourier_module(4, Rational(0), Rational(3)).size() == 244);
    CHECK(fourier_module(5, Rational(0), Rational(10)).size() == 2431);
    CHECK(fourier_module(3, Rational(-1), Rational(0)).size() == 28);

    auto elems = fourier_module(4, Rational(-1), Rational(2));
    for (std::size_t i = 0; i + 1 < elems.size(); ++i)
        CHECK(elems[i].value() < elems[i + 1].value());
    for (const auto& el : elems) {
        CHECK(el.n >= 2);
        if (el.n >= 3) CHECK(el.m % 3 != 0);
        CHECK(el.value() >= -1);
        CHECK(el.value() <= 2);
    }

    CHECK_THROWS_AS(fourier_module(1, Rational(0), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(fourier_module(3, Rational(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("unit phase wraps mod 1 without precision loss") {
    CHECK(unit_phase(Rational(0)) == std::complex<double>(1.0, 0.0));
    CHECK(unit_phase(Rational(1, 2)).real() == doctest::Approx(-1.0));
    CHECK(unit_phase(Rational(1, 4)).imag() == doctest::Approx(1.0));
    CHECK(unit_phase(Rational(-1, 4)).imag() == doctest::Approx(-1.0));

    Integer big = int_pow(Integer(10), 30);
    Rational shifted = Rational(big) + Rational(1, 4);
    CHECK(unit_phase(shifted).real() == doctest::Approx(0.0));
    CHECK(unit_phase(shifted).imag() == doctest::Approx(1.0));
    CHECK(std::abs(unit_phase(Rational(17, 13))) == doctest::Approx(1.0));
}

TEST_CASE("closed-form amplitudes at hand-checked elements") {
    auto a0 = amplitudes_3adic(module_element(Integer(0), 2));
    for (const auto& a : a0) {
        CHECK(a.real() == doctest::Approx(1.0 / 6.0));
        CHECK(a.imag() == doctest::Approx(0.0));
    }
    CHECK(intensity(module_element(Integer(0), 2), {1, 1, 1}) == doctest::Approx(0.25));

    // k = 1: the integer Bragg comb keeps full intensity
    auto a1 = amplitudes_3adic(module_element(Integer(9), 2));
    for (const auto& a : a1) CHECK(std::abs(a - std::complex<double>(1.0 / 6.0, 0.0)) < 1e-15);
    CHECK(intensity(module_element(Integer(9), 2), {1, 1, 1}) == doctest::Approx(0.25));

    CHECK(std::abs(amplitudes_3adic(module_element(Integer(1), 3))[0]) ==
          doctest::Approx(std::sqrt(3.0) / 54.0));

    // at m = 1 the b and c amplitudes cancel, leaving |A_a|^2 = 1/108 resp. 1/972
    auto a9 = amplitudes_3adic(module_element(Integer(1), 2));
    CHECK(std::abs(a9[1] + a9[2]) < 1e-15);
    CHECK(intensity(module_element(Integer(1), 2), {1, 1, 1}) == doctest::Approx(1.0 / 108.0));
    CHECK(intensity(module_element(Integer(1), 3), {1, 1, 1}) == doctest::Approx(1.0 / 972.0));

    CHECK(intensity(module_element(Integer(4), 3), {0, 0, 0}) == 0.0);
    CHECK_THROWS_AS(amplitudes_3adic(FourierModuleElement{Integer(3), 3}), std::invalid_argument);
}

TEST_CASE("sequence patch and autocorrelation") {
    WeightedPointPatch p = sequence_patch(Integer(729), {1, 1, 1});
    CHECK(p.points.size() == 730);
    CHECK(p.radius == 729);
    CHECK(p.dimension == 1);
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
        CHECK(p.points[i].x < p.points[i + 1].x);

    int ca = 0, cb = 0, cc = 0;
    for (const auto& [pos, type] : sequence_on_range(Integer(-729), Integer(729))) {
        (void)pos;
        if (type == 'a') ++ca;
        if (type == 'b') ++cb;
        if (type == 'c') ++cc;
    }
    CHECK(ca == 243);
    CHECK(cb == 243);
    CHECK(cc == 244);

    auto ac = autocorrelation(p, Rational(10));
    CHECK(ac.coefficients.size() == 21);
    CHECK(ac.coefficients.at(Rational(0)) == doctest::Approx(730.0 / 1458.0));
    CHECK(ac.coefficients.at(Rational(1)) == doctest::Approx(1.0 / 6.0));
    for (const auto& [z, g] : ac.coefficients) {
        CHECK(g == doctest::Approx(ac.coefficients.at(Rational(-z))));
        CHECK(z >= -10);
        CHECK(z <= 10);
        CHECK(g >= 0.0);
    }

    WeightedPointPatch w = sequence_patch(Integer(729), {1.0, 2.0, 0.5});
    auto wac = autocorrelation(w, Rational(3));
    CHECK(wac.coefficients.at(Rational(0)) ==
          doctest::Approx((243 * 1.0 + 243 * 4.0 + 244 * 0.25) / 1458.0));
    CHECK(wac.coefficients.at(Rational(2)) == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(autocorrelation(p, Rational(2000)), std::invalid_argument);
    CHECK_THROWS_AS(autocorrelation(p, Rational(-1)), std::invalid_argument);
    CHECK_THROWS_AS(sequence_patch(Integer(0), {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_patch({{Rational(7), 1.0}}, Rational(5)), std::invalid_argument);

    auto empty = autocorrelation(make_patch({}, Rational(5)), Rational(4));
    CHECK(empty.coefficients.empty());
}

TEST_CASE("numeric estimator on crystal and sequence controls") {
    std::vector<WeightedPoint> zp;
    for (long x = -1000; x <= 1000; ++x) zp.push_back({Rational(x), 1.0});
    auto crystal = make_patch(std::move(zp), Rational(1000));
    double at0 = std::norm(fourier_bohr_numeric(crystal, Rational(0)));
    double at1 = std::norm(fourier_bohr_numeric(crystal, Rational(1)));
    CHECK(at0 == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(at1 == at0); // integer k: every phase is exactly 1
    CHECK(std::norm(fourier_bohr_numeric(crystal, Rational(1, 2))) ==
          doctest::Approx(2.5e-7).epsilon(1e-6));

    WeightedPointPatch p = sequence_patch(Integer(729), {1, 1, 1});
    CHECK(std::norm(fourier_bohr_numeric(p, Rational(0))) ==
          doctest::Approx(std::pow(730.0 / 1458.0, 2)));

    CHECK_THROWS_AS(fourier_bohr_numeric(make_patch({}, Rational(1, 2)), Rational(0)),
                    std::invalid_argument);
}

TEST_CASE("numeric matches per-letter closed forms at r = 3^7") {
    Integer r7 = int_pow(Integer(3), 7);
    WeightedPointPatch pa = sequence_patch(r7, {1, 0, 0});
    WeightedPointPatch pb = sequence_patch(r7, {0, 1, 0});
    WeightedPointPatch pc = sequence_patch(r7, {0, 0, 1});
    // the c column carries a one-point boundary excess: 1/(2r) ~ 2.3e-4
    double slack = 1.0 / (2.0 * 2187.0) + 1e-6;
    for (const auto& e : {module_element(Integer(1), 2), module_element(Integer(9), 2),
                          module_element(Integer(1), 3), module_element(Integer(2), 3),
                          module_element(Integer(4), 4), module_element(Integer(7), 5)}) {
        auto amp = amplitudes_3adic(e);
        Rational k = e.value();
        CHECK(std::abs(amp[0] - fourier_bohr_numeric(pa, k)) < 1e-12);
        CHECK(std::abs(amp[1] - fourier_bohr_numeric(pb, k)) < 1e-12);
        CHECK(std::abs(amp[2] - fourier_bohr_numeric(pc, k)) < slack);
    }
    // the duplicate-formula alternative for the third letter is clearly wrong
    auto amp = amplitudes_3adic(module_element(Integer(1), 2));
    CHECK(std::abs(amp[1] - fourier_bohr_numeric(pc, Rational(1, 9))) > 0.1);

    // the module's central oracle: k = 1/9 intensity within 5%
    WeightedPointPatch p = sequence_patch(r7, {1, 1, 1});
    double num = std::norm(fourier_bohr_numeric(p, Rational(1, 9)));
    double ana = intensity(module_element(Integer(1), 2), {1, 1, 1});
    CHECK(std::abs(num - ana) / ana < 0.05);
}

TEST_CASE("off-module points decay, on-module points persist") {
    WeightedPointPatch p6 = sequence_patch(int_pow(Integer(3), 6), {1, 1, 1});
    WeightedPointPatch p7 = sequence_patch(int_pow(Integer(3), 7), {1, 1, 1});
    Rational samples[] = {Rational(1, 5),  Rational(3, 5),  Rational(1, 7), Rational(2, 7),
                          Rational(5, 14), Rational(1, 4),  Rational(7, 10),
                          Rational(11, 8), Rational(13, 6), Rational(3, 4)};
    for (const Rational& k : samples)
        CHECK(std::abs(fourier_bohr_numeric(p7, k)) < std::abs(fourier_bohr_numeric(p6, k)));

    double on6 = std::norm(fourier_bohr_numeric(p6, Rational(1)));
    double on7 = std::norm(fourier_bohr_numeric(p7, Rational(1)));
    CHECK(on6 == doctest::Approx(0.25).epsilon(5e-3));
    CHECK(on7 == doctest::Approx(0.25).epsilon(2e-3));
}

TEST_CASE("thue-morse comb is a negative control") {
    auto tm11 = thue_morse_patch(11);
    CHECK(std::abs(fourier_bohr_numeric(tm11, Rational(0))) < 1e-12);
    CHECK(std::abs(fourier_bohr_numeric(tm11, Rational(1))) < 1e-12);
    CHECK(std::abs(fourier_bohr_numeric(tm11, Rational(1, 2))) < 1e-12);

    // strongest candidate k = 1/3 keeps shrinking with patch size
    double v9 = std::norm(fourier_bohr_numeric(thue_morse_patch(9), Rational(1, 3)));
    double v11 = std::norm(fourier_bohr_numeric(tm11, Rational(1, 3)));
    double v13 = std::norm(fourier_bohr_numeric(thue_morse_patch(13), Rational(1, 3)));
    CHECK(v9 == doctest::Approx(0.0750847).epsilon(1e-4));
    CHECK(v11 == doctest::Approx(0.0422351).epsilon(1e-4));
    CHECK(v13 == doctest::Approx(0.0237573).epsilon(1e-4));
    CHECK(v11 < v9);
    CHECK(v13 < v11);
}

TEST_CASE("weight scaling multiplies intensities by s^2 on both paths") {
    auto e = module_element(Integer(4), 3);
    double base = intensity(e, {1.0, 2.0, 0.5});
    double scaled = intensity(e, {3.0, 6.0, 1.5});
    CHECK(scaled == doctest::Approx(9.0 * base).epsilon(1e-14));
    CHECK(intensity(module_element(Integer(1), 2), {1.0, 2.0, 0.5}) ==
          doctest::Approx(0.034916153083340652));

    double nb = std::norm(
        fourier_bohr_numeric(sequence_patch(Integer(729), {1.0, 2.0, 0.5}), e.value()));
    double ns = std::norm(
        fourier_bohr_numeric(sequence_patch(Integer(729), {3.0, 6.0, 1.5}), e.value()));
    CHECK(ns == doctest::Approx(9.0 * nb).epsilon(1e-12));
}

TEST_CASE("spectrum compare report with frozen summary") {
    WeightedPointPatch p6 = sequence_patch(int_pow(Integer(3), 6), {1, 1, 1});
    auto elems = fourier_module(4, Rational(0), Rational(3));
    auto rep = spectrum_compare(p6, {1, 1, 1}, elems, 20, 0.05, 2);
    CHECK(rep.rows.size() == 244);
    CHECK(rep.max_intensity == doctest::Approx(0.25));
    CHECK(rep.strongest_count == 20);
    CHECK(rep.max_rel_err_strongest == doctest::Approx(0.013988182916870064).epsilon(1e-10));
    CHECK(rep.formulas_ok);
    CHECK(rep.formula_note.empty());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].e.m == elems[i].m); // canonical order preserved
        CHECK(rep.rows[i].analytic_abs2 >= 0.0);
        CHECK(rep.rows[i].numeric_abs2 >= 0.0);
    }

    std::string csv = spectrum_csv(rep);
    CHECK(csv.size() == 32505);
    CHECK(csv.substr(0, csv.find('\n')) ==
          "m,n,k,analytic_re,analytic_im,analytic_abs2,numeric_abs2,rel_err");
    CHECK(csv.find("0,2,0,0.5,0,0.25,0.25068634147534719,0.002745365901388741\n") !=
          std::string::npos);

    // thread count must not change a byte
    auto rep1 = spectrum_compare(p6, {1, 1, 1}, elems, 20, 0.05, 1);
    CHECK(spectrum_csv(rep1) == csv);

    CHECK_THROWS_AS(spectrum_compare(p6, {1, 1, 1}, elems, 0, 0.05, 1), std::invalid_argument);
}

TEST_CASE("chair patch spectra are numeric-only with stable dyadic peaks") {
    ChairState st = chair_recursion(6);
    RatBox box = chair_patch_box(6);
    double area = to_double(Rational((box.x_hi - box.x_lo) * (box.y_hi - box.y_lo)));
    CHECK(area == 4096.0);
    std::vector<std::pair<Vec2I, double>> pts;
    for (const Vec2I& v : st.stage(6, 0)) pts.emplace_back(v, 1.0);
    CHECK(pts.size() == 992);

    auto at = [&](long px, long qx, long py, long qy) {
        return fourier_bohr_numeric_2d(pts, Rational(px, qx), Rational(py, qy), area);
    };
    CHECK(at(0, 1, 0, 1).real() == doctest::Approx(992.0 / 4096.0));
    CHECK(std::norm(at(1, 2, 0, 1)) == doctest::Approx(0.015625)); // exactly 1/64
    CHECK(std::norm(at(1, 4, 1, 4)) == doctest::Approx(0.015625));
    CHECK(std::norm(at(3, 8, 1, 8)) < 1e-30); // extinction on the dyadic grid
    // off the dyadic module the estimate is tiny and shrinks with the level
    CHECK(std::norm(at(1, 3, 0, 1)) == doctest::Approx(1.9729137420653836e-05).epsilon(1e-8));

    CHECK_THROWS_AS(fourier_bohr_numeric_2d(pts, Rational(0), Rational(0), 0.0),
                    std::invalid_argument);
}
