#pragma once

#include "padicms/exactnum.hpp"
#include "padicms/padic.hpp"

#include <string>
#include <vector>

namespace padicms {

/**
 * The silver-mean-family point set with tile lengths 1 and sqrt2: exact
 * Z[sqrt2] sequence generation by the two-type inflation recursion, lift
 * to Z^2, strip coordinates along the contracting direction, iterated
 * window approximation over R x (2-adic-by-phi), and the model-set
 * sandwich Lambda(U) subset Lambda subset Lambda(Omega).
 */

/// Lattice action induced by multiplication with lambda = 2+sqrt2.
struct PhiData {
    IntMatrix2 phi;            // columns (2,1) and (2,2)
    QuadInt eigen_expand;      // 2+sqrt2
    QuadInt eigen_contract;    // 2-sqrt2
    QuadRat eigenvector_v[2];  // (sqrt2, 1)
    Vec2I complement_direction; // (0, 1)
};

/// Builds and exactly verifies phi v = (2+sqrt2) v and det phi = 2.
PhiData phi_data();

/// Two-sided patch anchored at the seed b|a; covers [span_lo, span_hi).
struct QuasiPatch {
    int steps;
    std::vector<QuadInt> lambda_a; // sorted by real value
    std::vector<QuadInt> lambda_b;
    QuadInt span_lo;
    QuadInt span_hi;
};

/**
 * Apply the inflation recursion the given number of times:
 *   Lambda_a' = l Lambda_a + {0, la} union l Lambda_b + {0, la+lb}
 *   Lambda_b' = l Lambda_a + {2la} union l Lambda_b + {la, 2la+lb}
 * with l = 2+sqrt2, la = 1, lb = sqrt2. Every union is checked disjoint.
 */
QuasiPatch generate_sequence_exact(int steps);

/// a + b sqrt2 -> (a, b); sends tile length 1 to e1 and sqrt2 to e2.
Vec2I lift_to_lattice(const QuadInt& x);

/// Coefficient beta in v = alpha (sqrt2, 1) + beta (0, 1); exact.
QuadRat strip_beta(const Vec2I& v);

enum class StripKind { Full, Inner };

/// An interval of beta values with open/closed endpoints.
struct Strip {
    StripKind kind;
    QuadRat lo;
    QuadRat hi;
    bool lo_open;
    bool hi_open;

    bool contains(const QuadRat& beta) const;
    QuadRat length() const { return hi - lo; }
};

/// [-1-sqrt2, 0], closed: the strip all lifted sequence points occupy.
Strip full_strip();
/// (-1-sqrt2, -sqrt2/2), open: the narrower strip as printed.
Strip printed_inner_strip();
/// (-1-sqrt2/2, -sqrt2/2), open: the stable substrip that survives
/// validation on every tested patch; the same interval shifted right
/// by sqrt2/2 from the printed one, with direction (0,-1) instead of
/// (0,-1-sqrt2/2).
Strip validated_inner_strip();

/**
 * Desk check of the narrow-strip claims on the lifted patch: every
 * lattice point with beta strictly inside the strip and physical
 * position inside the covered span must be a lift of a sequence point
 * (claim 1), and the lifted patch must be connected through unit
 * horizontal/vertical steps (claim 2). The printed strip fails claim 1;
 * the report carries the failure evidence plus the empirically maximal
 * open substrip for which claim 1 does hold, and a removal control
 * showing strip points are essential for connectivity.
 */
struct StripReport {
    int steps;
    long candidates;                       // printed-strip interior points
    long violations;                       // claim 1 failures, printed strip
    std::vector<Vec2I> violation_examples; // capped at 8
    bool printed_claim_ok;
    bool connected;                        // claim 2
    Strip validated;                       // maximal open substrip, claim 1 clean
    long validated_violations;
    long inner_points;    // patch lifts with beta inside the validated strip
    long cut_vertices;    // inner points whose removal disconnects the patch
    Vec2I removal_example;
    bool removal_breaks;
};

StripReport inner_strip_connectivity(int steps);

/**
 * One window cell: a residue class modulo phi^level crossed with an
 * exact interval of beta values. Outer cells are closed intervals, inner
 * cells are open.
 */
struct QuasiCell {
    int level;
    Vec2I residue; // canonical representative modulo phi^level
    QuadRat lo;
    QuadRat hi;
};

/**
 * Window approximations from the internal shadow of the recursion: the
 * seven branch maps contract beta by 2-sqrt2 and shift by the star image
 * of the branch offset, while residues multiply by phi and add the
 * lifted offset. Outer cells start from the full strip at level 0 and
 * live at level = depth; inner cells are seeded from the validated
 * substrip (one application of l Lambda subset Lambda_a) and accumulate
 * over all levels up to depth.
 */
struct QuasiWindows {
    int depth;
    std::vector<QuasiCell> outer_a, outer_b; // sorted (level, residue, lo)
    std::vector<QuasiCell> inner_a, inner_b;

    bool outer_accepts(char type, const QuadInt& x) const;
    bool inner_accepts(char type, const QuadInt& x) const;
    QuadRat outer_measure(char type) const;
    QuadRat inner_measure(char type) const;
};

QuasiWindows ifs_windows(int depth);

/// Largest distance from the coarse outer union to the fine one (beta
/// component, per matching residue family); pre: fine is one step deeper.
QuadRat outer_step_distance(const QuasiWindows& coarse, const QuasiWindows& fine,
                            char type);

/**
 * Finite-patch model-set sandwich: inner-window model points must be
 * sequence points, sequence points must be outer-window model points;
 * the leftover discrepancy (outer-but-not-sequence plus
 * sequence-but-not-inner) is reported with counts and samples.
 */
struct SandwichReport {
    int steps;
    int depth;
    long patch_a, patch_b;
    long inner_model_a, inner_model_b;
    long outer_model_a, outer_model_b;
    long inner_violations, outer_violations;
    std::vector<std::string> violation_examples; // capped at 8
    long discrepancy;
    std::vector<std::string> discrepancy_examples; // capped at 8
    bool ok() const { return inner_violations == 0 && outer_violations == 0; }
};

SandwichReport sandwich_check(int steps, int depth);

/// Letter frequencies and anchor density of the generated patch.
struct QuasiStats {
    int steps;
    Rational freq_a, freq_b;      // letter shares of the patch
    QuadRat density_unit_span;    // anchors in [0, lambda^steps) / lambda^steps
    double freq_a_err, freq_b_err; // absolute error against (2-sqrt2, sqrt2-1)
    double density_err;            // against (2+sqrt2)/4
};

QuasiStats quasi_stats(int steps);

std::string sandwich_report_json(const SandwichReport& rep, int indent = 2);

} // namespace padicms
