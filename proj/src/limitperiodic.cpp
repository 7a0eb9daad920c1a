#include "padicms/limitperiodic.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace padicms {

SubstitutionSystem limitperiodic_system() {
    return SubstitutionSystem::parse("a -> ab\nb -> abc\nc -> abcc\n");
}

const CosetUnion& WindowFamily3::of(char type) const {
    switch (type) {
        case 'a': return omega_a;
        case 'b': return omega_b;
        case 'c': return omega_c;
    }
    throw std::invalid_argument("WindowFamily3: type must be a, b or c");
}

Integer window_center(char type, int k) {
    // 1 + 3 + ... + 3^{k-2} = (3^{k-1} - 1)/2, empty sum at k = 2 giving 1.
    switch (type) {
        case 'a':
            if (k < 2) throw std::invalid_argument("window_center: type a needs k >= 2");
            return (int_pow(3, k - 1) - 1) / 2;
        case 'b':
            if (k < 2) throw std::invalid_argument("window_center: type b needs k >= 2");
            return 2 + (int_pow(3, k - 1) - 1) / 2;
        case 'c':
            if (k < 3) throw std::invalid_argument("window_center: type c needs k >= 3");
            return -(int_pow(3, k - 1) - 3) / 2;
    }
    throw std::invalid_argument("window_center: type must be a, b or c");
}

WindowFamily3 windows_abc(int truncation) {
    if (truncation < 2) throw std::invalid_argument("windows_abc: truncation must be >= 2");
    WindowFamily3 w;
    w.truncation = truncation;
    w.omega_a = CosetUnion::padic(3, 1);
    w.omega_b = CosetUnion::padic(3, 1);
    w.omega_c = CosetUnion::padic(3, 1);
    w.omega_c.cosets.push_back(Coset({0}, 2, 1));
    for (int k = 2; k <= truncation; ++k) {
        w.omega_a.cosets.push_back(Coset({window_center('a', k)}, k, 1));
        w.omega_b.cosets.push_back(Coset({window_center('b', k)}, k, 1));
        if (k >= 3) w.omega_c.cosets.push_back(Coset({window_center('c', k)}, k, 1));
    }
    w.omega_a = normal_form(w.omega_a);
    w.omega_b = normal_form(w.omega_b);
    w.omega_c = normal_form(w.omega_c);
    return w;
}

bool member_trunc(const WindowFamily3& w, char type, const Integer& x) {
    return coset_contains(w.of(type), x);
}

bool member_full(char type, const Integer& x) {
    // Levels beyond (3^k - 5)/2 >= |x| cannot capture x, so a finite
    // truncation decides full membership.
    Integer ax = x < 0 ? Integer(-x) : x;
    int k = 2;
    while (int_pow(3, k) < 2 * ax + 5) ++k;
    static thread_local std::map<int, WindowFamily3> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, windows_abc(k)).first;
    return member_trunc(it->second, type, x);
}

Integer safe_radius(int truncation) {
    if (truncation < 2) throw std::invalid_argument("safe_radius: truncation must be >= 2");
    return (int_pow(3, truncation) - 5) / 2;
}

WindowMeasures window_measures(int truncation) {
    WindowFamily3 w = windows_abc(truncation);
    WindowMeasures m;
    m.truncation = truncation;
    m.a = haar_measure(w.omega_a);
    m.b = haar_measure(w.omega_b);
    m.c = haar_measure(w.omega_c);
    m.closed_form = Rational(1, 6) * (1 - Rational(1, int_pow(3, truncation - 1)));
    m.a_limit = Rational(1, 6);
    m.b_limit = Rational(1, 6);
    m.c_limit = Rational(1, 6);
    m.weighted_cover = 1 * m.a_limit + 2 * m.b_limit + 3 * m.c_limit;
    return m;
}

WindowLimits window_limits(int level) {
    WindowLimits lim;
    lim.a = coset_chain_limit(3, 1, 2, level, [](int k) { return window_center('a', k); });
    lim.b = coset_chain_limit(3, 1, 2, level, [](int k) { return window_center('b', k); });
    lim.c = coset_chain_limit(3, 1, 3, level, [](int k) { return window_center('c', k); });
    lim.a_value = Rational(-1, 2);
    lim.b_value = Rational(3, 2);
    lim.c_value = Rational(3, 2);
    return lim;
}

namespace {

std::map<char, QuadRat> abc_lengths() {
    return {{'a', QuadRat(Rational(1), 0)},
            {'b', QuadRat(Rational(2), 0)},
            {'c', QuadRat(Rational(3), 0)}};
}

// Patch whose layout covers [-R, R]: sigma^n(a) spans [0, 3^n] and
// sigma^n(c) spans [-3^{n+1}, 0].
GeometricPointSets patch_points(const Integer& radius) {
    int n = 1;
    while (int_pow(3, n) < radius) ++n;
    SubstitutionSystem s = limitperiodic_system();
    FixedPointPatch p = fixed_point_patch(s, 'c', 'a', n);
    return geometric_points(p, abc_lengths(), AnchorSide::RightEnd);
}

Integer as_integer(const QuadRat& x) {
    if (!x.is_rational() || boost::multiprecision::denominator(x.a) != 1)
        throw std::logic_error("anchor coordinate is not an integer");
    return boost::multiprecision::numerator(x.a);
}

} // namespace

std::vector<std::pair<Integer, char>> sequence_on_range(const Integer& lo, const Integer& hi) {
    if (hi < lo) throw std::invalid_argument("sequence_on_range: empty range");
    Integer radius = std::max(boost::multiprecision::abs(lo), boost::multiprecision::abs(hi));
    GeometricPointSets pts = patch_points(std::max(radius, Integer(1)));
    std::vector<std::pair<Integer, char>> out;
    for (const auto& [letter, v] : pts.per_letter)
        for (const QuadRat& q : v) {
            Integer x = as_integer(q);
            if (x >= lo && x <= hi) out.emplace_back(x, letter);
        }
    std::sort(out.begin(), out.end(),
              [](const auto& p1, const auto& p2) { return p1.first < p2.first; });
    return out;
}

VerifyReport verify_against_substitution(int truncation, const Integer& radius) {
    WindowFamily3 w = windows_abc(truncation);
    VerifyReport rep;
    rep.truncation = truncation;
    rep.radius = radius;
    rep.safe_r = safe_radius(truncation);
    rep.checked = 0;
    rep.matched = 0;

    std::map<Integer, char> anchors;
    for (const auto& [x, letter] : sequence_on_range(-radius, radius)) anchors[x] = letter;

    for (Integer x = -radius; x <= radius; ++x) {
        ++rep.checked;
        char model = '-';
        for (char t : {'a', 'b', 'c'})
            if (member_trunc(w, t, x)) {
                model = t;
                break;
            }
        auto it = anchors.find(x);
        char anchor = it == anchors.end() ? '-' : it->second;
        if (anchor == model) {
            ++rep.matched;
            continue;
        }
        if (model == '-' && anchor != '-' && member_full(anchor, x)) {
            // Find the capturing level: a truncation artifact, not a mismatch.
            int k = truncation + 1;
            while (true) {
                WindowFamily3 deep = windows_abc(k);
                if (member_trunc(deep, anchor, x)) break;
                ++k;
            }
            rep.tail.push_back({x, anchor, k});
            continue;
        }
        rep.mismatches.push_back({x, anchor, model});
    }
    return rep;
}

std::vector<InflationBranch> inflation_branches() {
    SubstitutionSystem s = limitperiodic_system();
    std::map<char, Integer> len{{'a', 1}, {'b', 2}, {'c', 3}};
    std::vector<InflationBranch> out;
    for (char source : s.alphabet) {
        const std::string& image = s.rule(source);
        for (std::size_t j = 0; j < image.size(); ++j) {
            // Right-end anchors: the child tile ends a suffix-length short
            // of the inflated block's right end.
            Integer suffix = 0;
            for (std::size_t j2 = j + 1; j2 < image.size(); ++j2) suffix += len[image[j2]];
            out.push_back({source, image[j], suffix});
        }
    }
    return out;
}

InvarianceReport window_invariance(int truncation) {
    WindowFamily3 w = windows_abc(truncation);
    WindowFamily3 deeper = windows_abc(truncation + 1);
    InvarianceReport rep;
    rep.truncation = truncation;
    rep.branches_checked = 0;
    for (const InflationBranch& br : inflation_branches()) {
        for (const Coset& c : w.of(br.source).cosets) {
            ++rep.branches_checked;
            // x = center + 3^k Z_3 maps to 3x - offset = (3 center - offset) + 3^{k+1} Z_3.
            Coset image(std::vector<Integer>{3 * c.center[0] - br.offset}, c.level + 1, 1);
            if (!coset_subset(image, deeper.of(br.target)) && rep.violations.size() < 16) {
                std::ostringstream msg;
                msg << br.source << "->" << br.target << " offset " << br.offset
                    << " applied to center " << c.center[0] << " level " << c.level
                    << " escapes the target window";
                rep.violations.push_back(msg.str());
            }
        }
    }
    return rep;
}

} // namespace padicms
