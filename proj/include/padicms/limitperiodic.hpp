#pragma once

#include "padicms/padic.hpp"
#include "padicms/substitution.hpp"

#include <vector>

namespace padicms {

/// The three-letter inflation system with images ab, abc, abcc.
SubstitutionSystem limitperiodic_system();

/**
 * Depth-K truncations of the three 3-adic windows. The centers follow the
 * closed forms 1+3+...+3^{k-2} (type a), 2+1+3+...+3^{k-2} (type b) and
 * -3-...-3^{k-2} together with the base coset 9*Z_3 (type c); the empty
 * sums give centers 1, 3 and the separate base coset at k = 2.
 */
struct WindowFamily3 {
    int truncation;
    CosetUnion omega_a;
    CosetUnion omega_b;
    CosetUnion omega_c;

    const CosetUnion& of(char type) const;
};

WindowFamily3 windows_abc(int truncation);

/// Window center at depth k for a type (the coset is center + 3^k Z_3).
Integer window_center(char type, int k);

/// Membership in the depth-K truncated window.
bool member_trunc(const WindowFamily3& w, char type, const Integer& x);

/// Exact membership in the untruncated window (adaptive depth).
bool member_full(char type, const Integer& x);

/**
 * Largest radius with no truncation artifacts: every integer x with
 * |x| <= safe_radius(K) has member_trunc(K) == member_full. The first
 * deeper-level center in absolute value is (3^K - 3)/2.
 */
Integer safe_radius(int truncation);

struct WindowMeasures {
    int truncation;
    Rational a, b, c;       // truncated Haar measures
    Rational closed_form;   // (1/6)(1 - 3^{1-K}), shared by all three types
    Rational a_limit, b_limit, c_limit;
    Rational weighted_cover; // 1*a_limit + 2*b_limit + 3*c_limit
};

WindowMeasures window_measures(int truncation);

/**
 * 3-adic limits of the window center chains: -1/2 for type a (all base-3
 * digits 1) and 3/2 for types b and c, returned both as truncations and as
 * exact rationals. These are the boundary points of the windows.
 */
struct WindowLimits {
    PadicTrunc a, b, c;
    Rational a_value, b_value, c_value;
};

WindowLimits window_limits(int level);

/// Anchors of the two-sided fixed point (types and positions) on [lo, hi].
std::vector<std::pair<Integer, char>> sequence_on_range(const Integer& lo, const Integer& hi);

/**
 * Cross-verification of the windows against the substitution fixed point
 * on [-R, R]. Tail points are substitution anchors beyond the safe radius
 * whose window level exceeds the truncation; they are artifacts of the
 * finite depth, not disagreements, and vanish once (3^K - 5)/2 >= R.
 */
struct VerifyReport {
    int truncation;
    Integer radius;
    Integer safe_r;
    long checked;
    long matched;
    struct Mismatch {
        Integer x;
        char anchor_type; // '-' when the substitution has no anchor here
        char model_type;  // '-' when no truncated window contains x
    };
    std::vector<Mismatch> mismatches;
    struct TailPoint {
        Integer x;
        char type;
        int level; // window level that captures x, > truncation
    };
    std::vector<TailPoint> tail;
    bool ok() const { return mismatches.empty(); }
    bool exact_equal() const { return mismatches.empty() && tail.empty(); }
};

VerifyReport verify_against_substitution(int truncation, const Integer& radius);

/**
 * Tile-formation branches: each type-s tile at position x spawns the tiles
 * of the image word of s at positions 3x - offset, one branch per image
 * letter. Derived from the rule layout and the tile lengths (1, 2, 3).
 */
struct InflationBranch {
    char source;
    char target;
    Integer offset;
};

std::vector<InflationBranch> inflation_branches();

/**
 * Symbolic invariance of the window family under the tile-formation rule:
 * the branch image of every depth-k coset of a source window must land
 * inside the depth-(K+1) target window as a whole coset.
 */
struct InvarianceReport {
    int truncation;
    long branches_checked;
    std::vector<std::string> violations; // capped at 16
    bool ok() const { return violations.empty(); }
};

InvarianceReport window_invariance(int truncation);

} // namespace padicms
