#pragma once

#include "padicms/exactnum.hpp"

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace padicms {

/// One scatterer: exact position on the line and a real strength.
struct WeightedPoint {
    Rational x;
    double w;
};

/// A finite cut of a weighted Dirac comb: all points within [-r, r].
struct WeightedPointPatch {
    std::vector<WeightedPoint> points; // sorted by position
    Rational radius;
    int dimension = 1;
};

/// Sorts the points and checks they fit the ball of radius r.
WeightedPointPatch make_patch(std::vector<WeightedPoint> points, const Rational& radius);

/// Anchor points of the three-letter sequence on [-r, r], weighted per type.
WeightedPointPatch sequence_patch(const Integer& radius, const std::array<double, 3>& h);

/// Finite-size autocorrelation: coefficient(z) = (1/2r) sum over pairs at
/// difference z of the weight products.
struct AutocorrelationApprox {
    std::map<Rational, double> coefficients;
    Rational radius;
    Rational cutoff;
};

AutocorrelationApprox autocorrelation(const WeightedPointPatch& patch, const Rational& cutoff);

/**
 * Canonical coordinates m/3^n on the module of 3-power denominators:
 * every element appears exactly once with either n = 2 (any m, covering
 * the integers and ninths) or n >= 3 with m not divisible by 3.
 */
struct FourierModuleElement {
    Integer m;
    int n;

    Rational value() const;
};

/// Validates canonicality.
FourierModuleElement module_element(const Integer& m, int n);
/// Canonical form of an arbitrary rational with 3-power denominator.
FourierModuleElement canonical_module_element(const Rational& k);
/// All canonical elements with n <= n_max and value inside [k_lo, k_hi], sorted by value.
std::vector<FourierModuleElement> fourier_module(int n_max, const Rational& k_lo,
                                                 const Rational& k_hi);

/// e^{2 pi i turns}, with the rational number of turns reduced mod 1 exactly.
std::complex<double> unit_phase(const Rational& turns);

/// Closed-form amplitudes (A_a, A_b, A_c) at a module element.
std::array<std::complex<double>, 3> amplitudes_3adic(const FourierModuleElement& e);

/// |h_a A_a + h_b A_b + h_c A_c|^2.
double intensity(const FourierModuleElement& e, const std::array<double, 3>& h);

/// (1/2r) sum of h_t e^{-2 pi i k t} over the patch, summed in position order.
std::complex<double> fourier_bohr_numeric(const WeightedPointPatch& patch, const Rational& k);

/// Same estimator over integer points of a plane patch with a given area.
std::complex<double> fourier_bohr_numeric_2d(const std::vector<std::pair<Vec2I, double>>& points,
                                             const Rational& kx, const Rational& ky, double area);

struct SpectrumRow {
    FourierModuleElement e;
    double analytic_re;
    double analytic_im;
    double analytic_abs2;
    double numeric_abs2;
    double rel_err; // against the analytic value; absolute when that is 0
};

/**
 * Side-by-side analytic vs numeric intensities. The verdict tracks the
 * strongest analytic peaks only; weak peaks keep their rows but do not
 * gate formulas_ok.
 */
struct SpectrumCompareReport {
    std::vector<SpectrumRow> rows; // canonical k order
    std::array<double, 3> weights;
    double max_intensity;
    int strongest_count;
    double max_rel_err_strongest;
    double tolerance;
    bool formulas_ok;
    std::string formula_note;
};

SpectrumCompareReport spectrum_compare(const WeightedPointPatch& patch,
                                       const std::array<double, 3>& h,
                                       const std::vector<FourierModuleElement>& elements,
                                       int strongest = 20, double tolerance = 0.05,
                                       int threads = 0);

/// CSV with 17-significant-digit floats, one row per module element.
std::string spectrum_csv(const SpectrumCompareReport& rep);

} // namespace padicms
