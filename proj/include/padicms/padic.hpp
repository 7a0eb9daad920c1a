#pragma once

#include "padicms/exactnum.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace padicms {

/// p-adic valuation; infinite exactly for the zero element.
struct Valuation {
    bool infinite;
    long v;

    static Valuation of(long value) { return Valuation{false, value}; }
    static Valuation inf() { return Valuation{true, 0}; }

    friend bool operator==(const Valuation& x, const Valuation& y) {
        if (x.infinite || y.infinite) return x.infinite == y.infinite;
        return x.v == y.v;
    }
};

bool is_prime(const Integer& p);

Valuation valuation(const Integer& n, const Integer& p);
Valuation valuation(const Rational& r, const Integer& p);

/// Exact p-adic distance p^{-v(x-y)} as a rational; 0 when x == y.
Rational padic_distance(const Rational& x, const Rational& y, const Integer& p);

/**
 * Truncation of a d-dimensional p-adic integer: the residue vector mod
 * p^level with entries in [0, p^level).
 */
struct PadicTrunc {
    Integer p;
    int level;
    std::vector<Integer> residue;

    friend bool operator==(const PadicTrunc& x, const PadicTrunc& y) {
        return x.p == y.p && x.level == y.level && x.residue == y.residue;
    }
};

/// Truncate a rational whose denominator is prime to p (1-dimensional).
PadicTrunc rational_to_trunc(const Rational& r, const Integer& p, int level);

/**
 * Truncation of an element of the profinite completion of Z^2 along the
 * powers of an expansive integer matrix theta: the canonical representative
 * of the class mod theta^level Z^2.
 */
struct ProfiniteTrunc {
    IntMatrix2 theta;
    int level;
    Vec2I residue;
};

/**
 * Column Hermite form of a rank-2 integer lattice: generators (a, 0) and
 * (b, d) with a, d > 0 and 0 <= b < a. Gives canonical representatives for
 * Z^2 modulo the lattice.
 */
struct Hnf2 {
    Integer a;
    Integer b;
    Integer d;
};

Hnf2 hnf_of(const IntMatrix2& m);
Vec2I hnf_reduce(const Hnf2& h, const Vec2I& x);
bool in_column_lattice(const IntMatrix2& m, const Vec2I& x);

/**
 * One clopen coset of the internal group. For a p-adic group the class is
 * center + scale*p^level Z_p^dim where scale itself must be a power of p;
 * for a matrix group the class is center + theta^level Z^2-closure and
 * scale stays 1. The normal form folds scale into the level.
 */
struct Coset {
    std::vector<Integer> center;
    int level;
    Integer scale;

    Coset() : level(0), scale(1) {}
    Coset(std::vector<Integer> c, int lvl, Integer s = 1)
        : center(std::move(c)), level(lvl), scale(std::move(s)) {}

    friend bool operator==(const Coset& x, const Coset& y) {
        return x.center == y.center && x.level == y.level && x.scale == y.scale;
    }
};

enum class InternalKind { Padic, ProfiniteMatrix };

/**
 * Finite union of clopen cosets, the window format for all internal groups
 * here. Normal form: scale 1, centers canonical mod the level lattice,
 * no coset contained in another, maximal sibling families merged into their
 * parent, sorted by (level, center). Serialization uses the normal form.
 */
struct CosetUnion {
    InternalKind kind;
    Integer p;        // Padic only
    int dim;
    IntMatrix2 theta; // ProfiniteMatrix only
    std::vector<Coset> cosets;

    static CosetUnion padic(Integer prime, int dimension);
    static CosetUnion profinite_matrix(IntMatrix2 expanding);
};

/// Index of the level-(e+1) lattice inside the level-e lattice.
Integer branching_index(const CosetUnion& u);

CosetUnion normal_form(const CosetUnion& u);
bool is_normal_form(const CosetUnion& u);

/// Haar measure of the union (pre: cosets pairwise disjoint after normal_form).
Rational haar_measure(const CosetUnion& u);

/// Exact membership of an integer point (embedded diagonally).
bool coset_contains(const CosetUnion& u, const std::vector<Integer>& x);
bool coset_contains(const CosetUnion& u, const Integer& x);
bool coset_contains(const CosetUnion& u, const Vec2I& x);

/// Membership of a single coset (as a set) in the union.
bool coset_subset(const Coset& c, const CosetUnion& u);

std::string coset_union_to_json(const CosetUnion& u, int indent = 2);
CosetUnion coset_union_from_json(const std::string& text);

/**
 * Limit of a coherent chain of 1-dimensional coset centers: centers(k) for
 * k in [k_start, K+1] must satisfy centers(k+1) == centers(k) mod
 * scale*p^{k-1}; the limit truncated at the requested level is returned.
 * Throws if the chain is not coherent over the checked range.
 */
PadicTrunc coset_chain_limit(const Integer& p, const Integer& scale, int k_start,
                             int level, const std::function<Integer(int)>& centers);

} // namespace padicms
