#pragma once

#include "padicms/exactnum.hpp"
#include "padicms/padic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace padicms {

/// Interval window on a euclidean internal line, with exact endpoints.
struct IntervalWindow {
    QuadRat lo;
    QuadRat hi;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(const QuadRat& x) const;
    QuadRat length() const { return hi - lo; }
};

/**
 * One factor of the internal space: a euclidean line, a p-adic group
 * Z_p^dim, or the profinite completion of Z^2 along an expanding integer
 * matrix. Each factor carries its part of the window.
 */
struct InternalFactor {
    enum class Kind { EuclideanLine, Padic, ProfiniteMatrix };
    Kind kind;
    IntervalWindow interval; // EuclideanLine
    CosetUnion window;       // Padic / ProfiniteMatrix

    static InternalFactor euclidean(IntervalWindow w);
    static InternalFactor padic_factor(CosetUnion w);
    static InternalFactor profinite_factor(CosetUnion w);
};

/**
 * Cut-and-project scheme: physical space, a lattice from a named catalog,
 * and the internal factors with their windows. The catalog covers the
 * diagonal embeddings of Z into R x Z_3 and of Z^2 into R^2 x (Z_2)^2
 * (the latter under both its generic and its chair name) and the Z[sqrt2]
 * scheme with internal space R x (Z^2 profinite along phi).
 */
struct CutProjectScheme {
    enum class Lattice { DiagonalZ3adic, DiagonalZ2_2adic, Chair, Sqrt2Phi };
    Lattice lattice;
    int physical_dim;
    int rank; // integer parameters of a lattice point
    std::vector<InternalFactor> factors;
    Rational covolume;
};

CutProjectScheme scheme_from_catalog(const std::string& name, int truncation = 8);
std::string scheme_catalog_name(CutProjectScheme::Lattice lattice);
CutProjectScheme scheme_from_json(const std::string& config_text);
std::string scheme_to_json(const CutProjectScheme& s, int indent = 2);

/// Physical projection of a lattice point (1-dimensional schemes).
QuadRat physical_coordinate(const CutProjectScheme& s, const std::vector<Integer>& point);

/// Internal coordinates of a lattice point, truncated at the given level.
struct StarPoint {
    std::vector<QuadRat> euclid;
    std::vector<PadicTrunc> padic;
    std::vector<ProfiniteTrunc> profinite;
};

StarPoint star_map(const CutProjectScheme& s, const std::vector<Integer>& point, int level);

/// Exact membership of a lattice point's internal image in the windows.
bool window_accepts(const CutProjectScheme& s, const std::vector<Integer>& point);

struct ModelSetQuery {
    QuadRat lo, hi;       // 1-dimensional physical range
    Vec2I box_lo, box_hi; // 2-dimensional integer box (inclusive)
    int truncation = 8;
};

struct ModelPoint {
    std::vector<Integer> lattice;
    QuadRat x;  // physical coordinate (1D)
    Vec2I xy;   // physical coordinates (2D)
};

/**
 * All lattice points whose physical projection lies in the query range and
 * whose internal image lies in the window. Output is sorted by physical
 * coordinate independent of the worker count.
 */
std::vector<ModelPoint> model_set_points(const CutProjectScheme& s, const ModelSetQuery& q,
                                         int threads = 0);

/// Density of the model set per unit physical volume, exact in Q(sqrt2).
QuadRat density(const CutProjectScheme& s);

enum class RegularityStatus { Regular, NotRegular, Undecided };

struct RegularityVerdict {
    RegularityStatus status;
    bool exact;
    std::optional<Rational> offender; // boundary value hit by a lattice image
    std::string note;
};

/**
 * Decide whether any window boundary value, shifted by the given internal
 * shift, is the internal image of a lattice point. Exact for rational
 * boundary data on the diagonal p-adic schemes, where the internal images
 * of lattice points are exactly the rational integers.
 */
RegularityVerdict regularity_check(const CutProjectScheme& s,
                                   const std::vector<Rational>& boundary_values,
                                   const Rational& shift = Rational(0));

/// Truncated boundary data can never certify either way.
RegularityVerdict regularity_check_trunc(const CutProjectScheme& s,
                                         const std::vector<PadicTrunc>& boundary);

/**
 * First candidate shift whose shifted boundary avoids all lattice images;
 * exhausting the list is an error.
 */
Rational shift_search(const CutProjectScheme& s, const std::vector<Rational>& boundary_values,
                      const std::vector<Rational>& candidates);

} // namespace padicms
