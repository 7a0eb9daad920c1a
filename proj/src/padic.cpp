#include "padicms/padic.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace padicms {

using ordered_json = nlohmann::ordered_json;

bool is_prime(const Integer& p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    Integer d = 3;
    while (d * d <= p) {
        if (p % d == 0) return false;
        d += 2;
    }
    return true;
}

Valuation valuation(const Integer& n, const Integer& p) {
    if (!is_prime(p)) throw std::invalid_argument("valuation: p must be prime");
    if (n == 0) return Valuation::inf();
    Integer m = n;
    long v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return Valuation::of(v);
}

Valuation valuation(const Rational& r, const Integer& p) {
    if (r == 0) return Valuation::inf();
    Valuation num = valuation(Integer(boost::multiprecision::numerator(r)), p);
    Valuation den = valuation(Integer(boost::multiprecision::denominator(r)), p);
    return Valuation::of(num.v - den.v);
}

Rational padic_distance(const Rational& x, const Rational& y, const Integer& p) {
    Valuation v = valuation(Rational(x - y), p);
    if (v.infinite) return Rational(0);
    if (v.v >= 0) return Rational(1, int_pow(p, static_cast<int>(v.v)));
    return Rational(int_pow(p, static_cast<int>(-v.v)), 1);
}

PadicTrunc rational_to_trunc(const Rational& r, const Integer& p, int level) {
    if (level < 0) throw std::invalid_argument("rational_to_trunc: negative level");
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    if (den % p == 0)
        throw std::domain_error("rational_to_trunc: denominator not prime to p");
    Integer m = int_pow(p, level);
    Integer residue = mod_pos(num * mod_inverse(den, m), m);
    return PadicTrunc{p, level, {residue}};
}

Hnf2 hnf_of(const IntMatrix2& m) {
    if (m.det() == 0) throw std::invalid_argument("hnf_of: singular matrix");
    Vec2I c1(m.m[0][0], m.m[1][0]);
    Vec2I c2(m.m[0][1], m.m[1][1]);
    Integer u, v;
    Integer g = ext_gcd(c1.y, c2.y, u, v);
    Hnf2 h;
    if (g == 0) {
        // Both columns horizontal is impossible for a nonsingular matrix.
        throw std::logic_error("hnf_of: degenerate columns");
    }
    Vec2I w(u * c1.x + v * c2.x, g);
    Integer tx = (c2.y / g) * c1.x - (c1.y / g) * c2.x;
    if (tx < 0) tx = -tx;
    h.a = tx;
    h.d = g;
    h.b = mod_pos(w.x, h.a);
    return h;
}

Vec2I hnf_reduce(const Hnf2& h, const Vec2I& x) {
    Integer q = floor_div(x.y, h.d);
    Integer rx = x.x - q * h.b;
    Integer ry = x.y - q * h.d;
    rx = mod_pos(rx, h.a);
    return Vec2I(rx, ry);
}

bool in_column_lattice(const IntMatrix2& m, const Vec2I& x) {
    Integer d = m.det();
    if (d == 0) throw std::invalid_argument("in_column_lattice: singular matrix");
    Vec2I y = m.adjugate() * x;
    return y.x % d == 0 && y.y % d == 0;
}

CosetUnion CosetUnion::padic(Integer prime, int dimension) {
    if (!is_prime(prime)) throw std::invalid_argument("CosetUnion: p must be prime");
    if (dimension < 1) throw std::invalid_argument("CosetUnion: dim must be >= 1");
    CosetUnion u;
    u.kind = InternalKind::Padic;
    u.p = std::move(prime);
    u.dim = dimension;
    u.theta = IntMatrix2::identity();
    return u;
}

CosetUnion CosetUnion::profinite_matrix(IntMatrix2 expanding) {
    Integer d = expanding.det();
    if (d == 0) throw std::invalid_argument("CosetUnion: theta must be nonsingular");
    if (d == 1 || d == -1)
        throw std::invalid_argument("CosetUnion: theta must be strictly expanding");
    CosetUnion u;
    u.kind = InternalKind::ProfiniteMatrix;
    u.p = 0;
    u.dim = 2;
    u.theta = std::move(expanding);
    return u;
}

Integer branching_index(const CosetUnion& u) {
    if (u.kind == InternalKind::Padic) return int_pow(u.p, u.dim);
    Integer d = u.theta.det();
    return d < 0 ? Integer(-d) : d;
}

namespace {

// Effective exponent of a coset: scale folded into the level.
int effective_level(const CosetUnion& u, const Coset& c) {
    if (c.level < 0) throw std::invalid_argument("coset level must be >= 0");
    if (u.kind == InternalKind::ProfiniteMatrix) {
        if (c.scale != 1)
            throw std::invalid_argument("matrix cosets must have scale 1");
        return c.level;
    }
    if (c.scale < 1) throw std::invalid_argument("coset scale must be >= 1");
    Integer s = c.scale;
    int extra = 0;
    while (s > 1) {
        if (s % u.p != 0)
            throw std::invalid_argument("coset scale must be a power of p");
        s /= u.p;
        ++extra;
    }
    return c.level + extra;
}

std::vector<Integer> canonical_center(const CosetUnion& u,
                                      const std::vector<Integer>& center, int e) {
    if (static_cast<int>(center.size()) != u.dim)
        throw std::invalid_argument("coset center has wrong dimension");
    if (u.kind == InternalKind::Padic) {
        Integer m = int_pow(u.p, e);
        std::vector<Integer> out(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) out[i] = mod_pos(center[i], m);
        return out;
    }
    Hnf2 h = hnf_of(mat_pow(u.theta, e));
    Vec2I r = hnf_reduce(h, Vec2I(center[0], center[1]));
    return {r.x, r.y};
}

// Membership of an integer vector in center + (level-e lattice).
bool congruent_at(const CosetUnion& u, const std::vector<Integer>& x,
                  const std::vector<Integer>& center, int e) {
    if (u.kind == InternalKind::Padic) {
        Integer m = int_pow(u.p, e);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (mod_pos(x[i] - center[i], m) != 0) return false;
        return true;
    }
    Vec2I diff(x[0] - center[0], x[1] - center[1]);
    return in_column_lattice(mat_pow(u.theta, e), diff);
}

struct FlatCoset {
    std::vector<Integer> center;
    int level;
};

bool flat_less(const FlatCoset& x, const FlatCoset& y) {
    if (x.level != y.level) return x.level < y.level;
    return x.center < y.center;
}

} // namespace

CosetUnion normal_form(const CosetUnion& u) {
    std::vector<FlatCoset> flat;
    flat.reserve(u.cosets.size());
    for (const Coset& c : u.cosets) {
        int e = effective_level(u, c);
        flat.push_back({canonical_center(u, c.center, e), e});
    }
    std::sort(flat.begin(), flat.end(), flat_less);

    // Drop duplicates and cosets contained in a coarser one, walking the
    // survivors level by level so each candidate costs one reduction and
    // one lookup per occupied coarser level.
    std::map<int, std::set<std::vector<Integer>>> by_level;
    for (const FlatCoset& c : flat) {
        bool absorbed = false;
        for (const auto& [lvl, centers] : by_level) {
            if (lvl > c.level) break;
            if (centers.count(canonical_center(u, c.center, lvl))) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) by_level[c.level].insert(c.center);
    }

    // Merge complete sibling families into their parent, deepest level
    // first; freshly made parents can complete a family one level up and
    // are picked up by the descending sweep. After absorption no other
    // coset can lie inside a new parent, so one sweep suffices.
    Integer siblings = branching_index(u);
    for (auto it = by_level.rbegin(); it != by_level.rend(); ++it) {
        int lvl = it->first;
        if (lvl == 0) break;
        std::map<std::vector<Integer>, std::vector<std::vector<Integer>>> families;
        for (const std::vector<Integer>& c : it->second)
            families[canonical_center(u, c, lvl - 1)].push_back(c);
        for (const auto& [parent, members] : families) {
            if (Integer(members.size()) != siblings) continue;
            for (const std::vector<Integer>& c : members) it->second.erase(c);
            by_level[lvl - 1].insert(parent);
        }
    }

    CosetUnion out = u;
    out.cosets.clear();
    for (const auto& [lvl, centers] : by_level)
        for (const std::vector<Integer>& c : centers) out.cosets.push_back(Coset(c, lvl, 1));
    return out;
}

bool is_normal_form(const CosetUnion& u) {
    CosetUnion n = normal_form(u);
    if (n.cosets.size() != u.cosets.size()) return false;
    for (std::size_t i = 0; i < u.cosets.size(); ++i)
        if (!(n.cosets[i] == u.cosets[i])) return false;
    return true;
}

Rational haar_measure(const CosetUnion& u) {
    CosetUnion n = normal_form(u);
    Integer base = branching_index(u);
    Rational total = 0;
    for (const Coset& c : n.cosets)
        total += Rational(1, int_pow(base, c.level));
    return total;
}

bool coset_contains(const CosetUnion& u, const std::vector<Integer>& x) {
    if (static_cast<int>(x.size()) != u.dim)
        throw std::invalid_argument("coset_contains: wrong dimension");
    for (const Coset& c : u.cosets) {
        int e = effective_level(u, c);
        if (congruent_at(u, x, c.center, e)) return true;
    }
    return false;
}

bool coset_contains(const CosetUnion& u, const Integer& x) {
    return coset_contains(u, std::vector<Integer>{x});
}

bool coset_contains(const CosetUnion& u, const Vec2I& x) {
    return coset_contains(u, std::vector<Integer>{x.x, x.y});
}

bool coset_subset(const Coset& c, const CosetUnion& u) {
    int e = effective_level(u, c);
    auto center = canonical_center(u, c.center, e);
    for (const Coset& k : u.cosets) {
        int ke = effective_level(u, k);
        if (ke <= e && congruent_at(u, center, k.center, ke)) return true;
    }
    return false;
}

namespace {

long long to_small(const Integer& n) {
    if (n > Integer(1) << 62 || n < -(Integer(1) << 62))
        throw std::overflow_error("coset serialization: value too large");
    return n.convert_to<long long>();
}

} // namespace

std::string coset_union_to_json(const CosetUnion& u, int indent) {
    CosetUnion n = normal_form(u);
    ordered_json j;
    if (u.kind == InternalKind::Padic) {
        j["p"] = to_small(n.p);
        j["dim"] = n.dim;
    } else {
        j["theta"] = {{to_small(n.theta.m[0][0]), to_small(n.theta.m[0][1])},
                      {to_small(n.theta.m[1][0]), to_small(n.theta.m[1][1])}};
        j["dim"] = n.dim;
    }
    j["cosets"] = ordered_json::array();
    for (const Coset& c : n.cosets) {
        ordered_json jc;
        jc["center"] = ordered_json::array();
        for (const Integer& v : c.center) jc["center"].push_back(to_small(v));
        jc["level"] = c.level;
        jc["scale"] = to_small(c.scale);
        j["cosets"].push_back(jc);
    }
    return indent >= 0 ? j.dump(indent) : j.dump();
}

CosetUnion coset_union_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    CosetUnion u;
    if (j.contains("theta")) {
        auto t = j.at("theta");
        u = CosetUnion::profinite_matrix(IntMatrix2(
            Integer(t.at(0).at(0).get<long long>()), Integer(t.at(0).at(1).get<long long>()),
            Integer(t.at(1).at(0).get<long long>()), Integer(t.at(1).at(1).get<long long>())));
    } else {
        u = CosetUnion::padic(Integer(j.at("p").get<long long>()), j.at("dim").get<int>());
    }
    for (const auto& jc : j.at("cosets")) {
        Coset c;
        for (const auto& v : jc.at("center")) c.center.push_back(Integer(v.get<long long>()));
        c.level = jc.at("level").get<int>();
        c.scale = jc.contains("scale") ? Integer(jc.at("scale").get<long long>()) : Integer(1);
        u.cosets.push_back(std::move(c));
    }
    return u;
}

PadicTrunc coset_chain_limit(const Integer& p, const Integer& scale, int k_start,
                             int level, const std::function<Integer(int)>& centers) {
    if (!is_prime(p)) throw std::invalid_argument("coset_chain_limit: p must be prime");
    if (level < 0) throw std::invalid_argument("coset_chain_limit: negative level");
    // scale * p^{k-1} >= p^level pins the residue at the requested level.
    int k_needed = k_start;
    while (scale * int_pow(p, k_needed - 1) < int_pow(p, level)) ++k_needed;
    for (int k = k_start; k <= k_needed; ++k) {
        Integer modulus = scale * int_pow(p, k - 1);
        if (mod_pos(centers(k + 1) - centers(k), modulus) != 0) {
            std::ostringstream msg;
            msg << "coset_chain_limit: chain not coherent at k=" << k;
            throw std::domain_error(msg.str());
        }
    }
    Integer residue = mod_pos(centers(k_needed + 1), int_pow(p, level));
    return PadicTrunc{p, level, {residue}};
}

} // namespace padicms
