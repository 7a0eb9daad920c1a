#pragma once

#include "padicms/exactnum.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace padicms {

/**
 * Substitution system on a finite alphabet of single-character letters.
 * Alphabet order is first-appearance order of the rule listing, which
 * fixes matrix row/column order and all derived eigenvector data.
 */
struct SubstitutionSystem {
    std::vector<char> alphabet;
    std::vector<std::string> images; // parallel to alphabet

    int index_of(char letter) const;
    const std::string& rule(char letter) const;
    std::string apply(const std::string& word) const;
    std::string iterate(char seed, int n) const;

    /// Image length shared by all letters, if the system has constant length.
    std::optional<int> constant_length() const;

    /**
     * Parse lines of the form "a -> ab". Blank lines and '#' comments are
     * skipped. Every letter used on a right-hand side must have a rule.
     */
    static SubstitutionSystem parse(const std::string& rules_text);
};

/// Entry (i, j) = occurrences of letter i in the image of letter j.
std::vector<std::vector<Integer>> subst_matrix(const SubstitutionSystem& s);

/// Generic square-matrix power for the letter-count identities.
std::vector<std::vector<Integer>> int_matrix_power(
    const std::vector<std::vector<Integer>>& m, int exp);

/// Some power of the substitution matrix is entrywise positive.
bool is_primitive(const SubstitutionSystem& s);

/**
 * Perron-Frobenius data: inflation factor, tile lengths (left eigenvector,
 * first letter normalized to 1) and letter frequencies (right eigenvector,
 * normalized to sum 1). Numeric values come from deterministic power
 * iteration to residual < 1e-12; exact forms are attached when the dominant
 * eigenvalue is an integer, a rational, or lives in Q(sqrt2).
 */
struct PFData {
    double inflation;
    std::vector<double> lengths;
    std::vector<double> frequencies;
    bool exact_available;
    QuadRat inflation_exact;
    std::vector<QuadRat> lengths_exact;
    std::vector<QuadRat> frequencies_exact;
};

PFData pf_data(const SubstitutionSystem& s);

/**
 * Two-sided patch grown from a seed pair left|right of the origin:
 * left_word = sigma^n(left) laid leftward so it ends at the origin,
 * right_word = sigma^n(right) laid rightward from the origin.
 */
struct FixedPointPatch {
    SubstitutionSystem system;
    char left_seed;
    char right_seed;
    int iterations;
    std::string left_word;
    std::string right_word;
};

/**
 * Build the patch after checking seed legality: the adjacent pair
 * left,right must occur inside sigma^k of some letter for k <= 5.
 */
FixedPointPatch fixed_point_patch(const SubstitutionSystem& s, char left, char right, int n);

/// One-sided patch (empty left word), no legality requirement.
FixedPointPatch one_sided_patch(const SubstitutionSystem& s, char seed, int n);

enum class AnchorSide { RightEnd, LeftEnd };

/**
 * Geometric realization of a patch: tiles laid end to end with the seed
 * junction at the origin, each tile contributing one anchor point (its
 * right or left end). Coordinates are exact elements of Q(sqrt2).
 */
struct GeometricPointSets {
    std::vector<char> alphabet;
    std::map<char, std::vector<QuadRat>> per_letter; // each sorted ascending
    QuadRat left_extent;
    QuadRat right_extent;
    AnchorSide anchor;

    /// Anchor membership across all letters (exact binary search).
    bool contains(const QuadRat& x) const;
    bool contains(char letter, const QuadRat& x) const;
};

GeometricPointSets geometric_points(const FixedPointPatch& patch,
                                    const std::map<char, QuadRat>& lengths,
                                    AnchorSide anchor);

struct SimilarityReport {
    bool ok;
    long checked;
    std::vector<QuadRat> counterexamples; // capped at 16
};

/**
 * Check factor * x is again an anchor (of target_letter when given) for
 * every anchor x within [lo, hi]. The scaled range must stay inside the
 * generated patch; a range escaping the patch is rejected.
 */
SimilarityReport self_similarity_check(const GeometricPointSets& points,
                                       const QuadRat& factor, const QuadRat& lo,
                                       const QuadRat& hi,
                                       std::optional<char> target_letter = {});

struct CoincidenceReport {
    int length;          // common image length
    bool has_coincidence;
    int depth;           // first witnessing depth, or max_depth when none
    long position;       // witnessing column, or -1
};

/**
 * Column coincidence for constant-length substitutions: true iff some
 * power n <= max_depth has a position where the n-fold images of all
 * letters agree. Non-constant-length systems are rejected.
 */
CoincidenceReport dekking_coincidence(const SubstitutionSystem& s, int max_depth = 8);

struct RecodeResult {
    SubstitutionSystem system;
    FixedPointPatch patch;
    std::map<char, QuadRat> lengths; // recoded tile lengths
    bool pair_present;               // false for the vacuous recode
};

/**
 * Replace a two-letter block by a fresh letter and return the induced
 * substitution together with the recoded patch. Requires the pair to be
 * block-consistent on the patch and on all rule images: every occurrence
 * of the first letter is immediately followed by the second, and every
 * occurrence of the second is preceded by the first.
 */
RecodeResult recode_pairs(const FixedPointPatch& patch,
                          const std::map<char, QuadRat>& lengths,
                          const std::string& pair, char new_letter);

} // namespace padicms
