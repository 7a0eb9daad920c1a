#include "padicms/diffraction.hpp"

#include "padicms/limitperiodic.hpp"
#include "padicms/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace padicms {

namespace {

Integer rat_floor(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
}

Integer rat_ceil(const Rational& r) { return -rat_floor(-r); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

WeightedPointPatch make_patch(std::vector<WeightedPoint> points, const Rational& radius) {
    if (radius < 0) throw std::invalid_argument("make_patch: negative radius");
    for (const WeightedPoint& p : points) {
        Rational a = p.x < 0 ? Rational(-p.x) : p.x;
        if (a > radius) throw std::invalid_argument("make_patch: point outside the ball");
    }
    std::sort(points.begin(), points.end(),
              [](const WeightedPoint& u, const WeightedPoint& v) { return u.x < v.x; });
    WeightedPointPatch patch;
    patch.points = std::move(points);
    patch.radius = radius;
    patch.dimension = 1;
    return patch;
}

WeightedPointPatch sequence_patch(const Integer& radius, const std::array<double, 3>& h) {
    if (radius < 1) throw std::invalid_argument("sequence_patch: radius must be >= 1");
    std::vector<WeightedPoint> pts;
    for (const auto& [pos, type] : sequence_on_range(-radius, radius))
        pts.push_back({Rational(pos), h[type - 'a']});
    return make_patch(std::move(pts), Rational(radius));
}

AutocorrelationApprox autocorrelation(const WeightedPointPatch& patch, const Rational& cutoff) {
    if (cutoff < 0) throw std::invalid_argument("autocorrelation: negative cutoff");
    if (cutoff > 2 * patch.radius)
        throw std::invalid_argument("autocorrelation: cutoff beyond the patch diameter");
    AutocorrelationApprox acc;
    acc.radius = patch.radius;
    acc.cutoff = cutoff;
    const auto& pts = patch.points;
    double vol = 2.0 * to_double(patch.radius);
    if (vol == 0.0) return acc;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
            Rational z = pts[j].x - pts[i].x;
            if (z > cutoff) break;
            double v = pts[i].w * pts[j].w / vol;
            acc.coefficients[z] += v;
            if (j != i) acc.coefficients[Rational(-z)] += v;
        }
    }
    return acc;
}

Rational FourierModuleElement::value() const { return Rational(m, int_pow(Integer(3), n)); }

FourierModuleElement module_element(const Integer& m, int n) {
    if (n < 2) throw std::invalid_argument("module_element: n must be >= 2");
    if (n >= 3 && m % 3 == 0)
        throw std::invalid_argument("module_element: not canonical, m divisible by 3");
    return {m, n};
}

FourierModuleElement canonical_module_element(const Rational& k) {
    Integer num = boost::multiprecision::numerator(k);
    Integer den = boost::multiprecision::denominator(k);
    int j = 0;
    while (den % 3 == 0) {
        den /= 3;
        ++j;
    }
    if (den != 1)
        throw std::domain_error("canonical_module_element: denominator is not a power of 3");
    if (j <= 2) {
        Integer lifted = num * int_pow(Integer(3), 2 - j);
        return {lifted, 2};
    }
    return {num, j};
}

std::vector<FourierModuleElement> fourier_module(int n_max, const Rational& k_lo,
                                                 const Rational& k_hi) {
    if (n_max < 2) throw std::invalid_argument("fourier_module: n_max must be >= 2");
    if (k_lo > k_hi) throw std::invalid_argument("fourier_module: empty window");
    std::vector<FourierModuleElement> out;
    for (int n = 2; n <= n_max; ++n) {
        Integer scale = int_pow(Integer(3), n);
        Integer m_from = rat_ceil(Rational(scale) * k_lo);
        Integer m_to = rat_floor(Rational(scale) * k_hi);
        for (Integer m = m_from; m <= m_to; ++m) {
            if (n >= 3 && m % 3 == 0) continue;
            out.push_back({m, n});
        }
    }
    std::sort(out.begin(), out.end(), [](const FourierModuleElement& u,
                                         const FourierModuleElement& v) {
        return u.value() < v.value();
    });
    return out;
}

std::complex<double> unit_phase(const Rational& turns) {
    Rational frac = turns - Rational(rat_floor(turns));
    double f = to_double(frac);
    return {std::cos(2.0 * M_PI * f), std::sin(2.0 * M_PI * f)};
}

std::array<std::complex<double>, 3> amplitudes_3adic(const FourierModuleElement& e) {
    if (e.n < 2 || (e.n >= 3 && e.m % 3 == 0))
        throw std::invalid_argument("amplitudes_3adic: element not canonical");
    Integer p3n = int_pow(Integer(3), e.n);
    Integer twice = 2 * p3n;
    Integer neg3m = -3 * e.m;
    Integer negm = -e.m;
    double scale = 1.0 / to_double(Rational(p3n));
    double parity = e.m % 2 == 0 ? 0.5 : -0.5;

    std::complex<double> lead_a = unit_phase(Rational(e.m, twice));
    std::complex<double> lead_bc = unit_phase(Rational(neg3m, twice));
    std::complex<double> inner_ab = unit_phase(Rational(negm, Integer(6))) + parity;
    std::complex<double> inner_c = unit_phase(Rational(e.m, Integer(6))) + parity;

    return {scale * lead_a * inner_ab, scale * lead_bc * inner_ab, scale * lead_bc * inner_c};
}

double intensity(const FourierModuleElement& e, const std::array<double, 3>& h) {
    auto amp = amplitudes_3adic(e);
    std::complex<double> total = h[0] * amp[0] + h[1] * amp[1] + h[2] * amp[2];
    return std::norm(total);
}

std::complex<double> fourier_bohr_numeric(const WeightedPointPatch& patch, const Rational& k) {
    if (patch.radius < 1) throw std::invalid_argument("fourier_bohr_numeric: radius must be >= 1");
    std::complex<double> acc{0.0, 0.0};
    for (const WeightedPoint& p : patch.points) {
        Rational phase = -k * p.x;
        acc += p.w * unit_phase(phase);
    }
    return acc / (2.0 * to_double(patch.radius));
}

std::complex<double> fourier_bohr_numeric_2d(const std::vector<std::pair<Vec2I, double>>& points,
                                             const Rational& kx, const Rational& ky, double area) {
    if (area <= 0.0) throw std::invalid_argument("fourier_bohr_numeric_2d: area must be positive");
    std::vector<std::pair<Vec2I, double>> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& u, const auto& v) { return u.first < v.first; });
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [v, w] : sorted) {
        Rational phase = -(kx * Rational(v.x) + ky * Rational(v.y));
        acc += w * unit_phase(phase);
    }
    return acc / area;
}

SpectrumCompareReport spectrum_compare(const WeightedPointPatch& patch,
                                       const std::array<double, 3>& h,
                                       const std::vector<FourierModuleElement>& elements,
                                       int strongest, double tolerance, int threads) {
    if (strongest < 1) throw std::invalid_argument("spectrum_compare: strongest must be >= 1");
    SpectrumCompareReport rep;
    rep.weights = h;
    rep.tolerance = tolerance;
    rep.rows.resize(elements.size());
    parallel_for(0, std::int64_t(elements.size()), threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const FourierModuleElement& e = elements[std::size_t(i)];
            SpectrumRow& row = rep.rows[std::size_t(i)];
            row.e = e;
            auto amp = amplitudes_3adic(e);
            std::complex<double> total = h[0] * amp[0] + h[1] * amp[1] + h[2] * amp[2];
            row.analytic_re = total.real();
            row.analytic_im = total.imag();
            row.analytic_abs2 = std::norm(total);
            row.numeric_abs2 = std::norm(fourier_bohr_numeric(patch, e.value()));
            row.rel_err = row.analytic_abs2 > 0.0
                              ? std::abs(row.numeric_abs2 - row.analytic_abs2) / row.analytic_abs2
                              : row.numeric_abs2;
        }
    });

    rep.max_intensity = 0.0;
    for (const SpectrumRow& row : rep.rows)
        rep.max_intensity = std::max(rep.max_intensity, row.analytic_abs2);

    std::vector<std::size_t> order(rep.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
        return rep.rows[u].analytic_abs2 > rep.rows[v].analytic_abs2;
    });
    rep.strongest_count = int(std::min<std::size_t>(order.size(), std::size_t(strongest)));
    rep.max_rel_err_strongest = 0.0;
    for (int i = 0; i < rep.strongest_count; ++i)
        rep.max_rel_err_strongest = std::max(rep.max_rel_err_strongest, rep.rows[order[std::size_t(i)]].rel_err);
    rep.formulas_ok = rep.max_rel_err_strongest <= tolerance;
    rep.formula_note =
        rep.formulas_ok
            ? ""
            : "closed-form intensities disagree with the patch estimator beyond tolerance; "
              "the numeric column is the value of record";
    return rep;
}

std::string spectrum_csv(const SpectrumCompareReport& rep) {
    std::string out = "m,n,k,analytic_re,analytic_im,analytic_abs2,numeric_abs2,rel_err\n";
    for (const SpectrumRow& row : rep.rows) {
        out += row.e.m.str();
        out += ',';
        out += std::to_string(row.e.n);
        out += ',';
        out += fmt17(to_double(row.e.value()));
        out += ',';
        out += fmt17(row.analytic_re);
        out += ',';
        out += fmt17(row.analytic_im);
        out += ',';
        out += fmt17(row.analytic_abs2);
        out += ',';
        out += fmt17(row.numeric_abs2);
        out += ',';
        out += fmt17(row.rel_err);
        out += '\n';
    }
    return out;
}

} // namespace padicms
