#pragma once

#include "padicms/cutproject.hpp"
#include "padicms/padic.hpp"

#include <array>
#include <string>
#include <vector>

namespace padicms {

/**
 * Orientation classes of the decorated-square tiling. The points of Z^2
 * split into four sets P_k by square orientation; the finite stages
 * P_{k,i} = P_k within the inflated patch T^i C are built by the exact
 * affine recursion
 *
 *   P_{k,i+1} = union over l of (T^i M_l T^-i)(P_{(k-n_l) mod 4, i})
 *
 * with increments n = (0,1,2,1). The stages are nested (the l = 0 branch
 * is the identity) and each stage partitions the integer points of T^i C.
 */
struct ChairState {
    int max_level;
    std::vector<std::array<std::vector<Vec2I>, 4>> per_level; // sorted sets

    const std::vector<Vec2I>& stage(int level, int k) const;
};

/// The inflation T x = 2 R x + (e1+e2)/2, R = quarter turn (x,y) -> (-y,x).
AffineMap2 chair_inflation();

/// Placement maps M_0 = id, M_1 = Rx+e1, M_2 = R^2 x+e1+e2, M_3 = Rx+e2.
std::array<AffineMap2, 4> chair_placements();

/// Orientation increment of each placement branch.
std::array<int, 4> chair_class_steps();

/// Axis-aligned square T^level C, C = [-1/2,1/2]^2, with exact bounds.
struct RatBox {
    Rational x_lo, x_hi, y_lo, y_hi;

    bool contains(const Vec2I& v) const;
    Integer integer_point_count() const;
};

RatBox chair_patch_box(int level);

/**
 * Run the recursion to the requested level (hard cap 12: 4^12 points).
 * Every stage is checked: integer coordinates, 4^i total points, the four
 * classes pairwise disjoint and exactly covering the patch box.
 */
ChairState chair_recursion(int max_level);

/**
 * Orientation of an arbitrary lattice point, found by inverting the
 * recursion one branch at a time down to the origin. Exact at any
 * distance; cost grows with the level at which the patch first covers
 * the point.
 */
struct DescentResult {
    int k;
    int entry_level;
    std::vector<int> path; // branch indices from the origin outward
};

DescentResult class_by_descent(const Vec2I& v);

enum class ChairWindowMode { Refined, Conservative };

/**
 * 2-adic windows of the four orientation classes, as coset unions in
 * (Z_2)^2. Conservative mode realizes the decomposition
 * P_k = union over i of (P_{k,i} + 2^i 4 Z^2) literally: one coset of
 * modulus 2^{i+2} per point at its first appearance level. Refined mode
 * assigns each point the smallest modulus 2^j whose residue class carries
 * a single orientation across a reference patch built two levels deeper
 * (at least 16 witnesses required), falling back to the conservative
 * modulus; it agrees with the recursion on the whole reference patch by
 * construction and closes most of the measure gap the conservative
 * truncation leaves open.
 */
struct ChairWindows {
    int built_to_level;
    ChairWindowMode mode;
    std::array<CosetUnion, 4> omega;

    Rational measure(int k) const;
    Rational total_measure() const;
    Rational deficit() const; // 1 - total, the untruncated total being 1
};

ChairWindows chair_windows(const ChairState& state,
                           ChairWindowMode mode = ChairWindowMode::Refined);

/// Window classification of every integer point in an inclusive box.
struct ChairLabels {
    Vec2I lo, hi;
    std::vector<std::pair<Vec2I, int>> labels; // decided, sorted by point
    std::vector<Vec2I> undecided;              // in no truncated window
    std::vector<Vec2I> conflicts;              // in more than one window
};

ChairLabels chair_model_set(const ChairWindows& w, const Vec2I& lo, const Vec2I& hi);

/// Window labels against the recursion classes on the level patch.
struct ChairOracleReport {
    int level;
    long agreed;
    long undecided;
    std::vector<std::string> disagreements; // capped at 16
    bool ok() const { return disagreements.empty() && undecided == 0; }
};

ChairOracleReport chair_oracle_compare(const ChairWindows& w, const ChairState& state,
                                       int level);

/**
 * Empirical periodicity of the stages: every translate of a stage point
 * by its stage modulus 2^i 4 Z^2 that stays inside the deepest generated
 * patch must carry the same orientation.
 */
struct ChairPeriodicityReport {
    int patch_level;
    long checked;
    std::vector<std::string> violations; // capped at 16
    bool ok() const { return violations.empty(); }
};

ChairPeriodicityReport chair_periodicity_check(const ChairState& state, int max_stage);

/// One level as {"level": i, "sets": {"0": [[x,y], ...], ...}}.
std::string chair_level_json(const ChairState& state, int level, int indent = 2);

/// Unit squares with orientation colors and corner arrows; deterministic.
std::string chair_svg_points(const std::vector<std::pair<Vec2I, int>>& labeled,
                             int px_per_unit = 20);
std::string chair_svg(const ChairState& state, int level, int px_per_unit = 20);

} // namespace padicms
