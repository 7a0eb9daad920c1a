#include "padicms/cutproject.hpp"
#include "padicms/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace padicms {

using ordered_json = nlohmann::ordered_json;

bool IntervalWindow::contains(const QuadRat& x) const {
    int cl = sign_of(x - lo);
    if (cl < 0 || (cl == 0 && !lo_closed)) return false;
    int ch = sign_of(hi - x);
    if (ch < 0 || (ch == 0 && !hi_closed)) return false;
    return true;
}

InternalFactor InternalFactor::euclidean(IntervalWindow w) {
    if (sign_of(w.hi - w.lo) < 0)
        throw std::invalid_argument("euclidean factor: empty interval");
    InternalFactor f;
    f.kind = Kind::EuclideanLine;
    f.interval = std::move(w);
    f.window = CosetUnion::padic(2, 1); // unused placeholder
    return f;
}

InternalFactor InternalFactor::padic_factor(CosetUnion w) {
    if (w.kind != InternalKind::Padic)
        throw std::invalid_argument("padic factor: wrong coset union kind");
    InternalFactor f;
    f.kind = Kind::Padic;
    f.window = std::move(w);
    return f;
}

InternalFactor InternalFactor::profinite_factor(CosetUnion w) {
    if (w.kind != InternalKind::ProfiniteMatrix)
        throw std::invalid_argument("profinite factor: wrong coset union kind");
    InternalFactor f;
    f.kind = Kind::ProfiniteMatrix;
    f.window = std::move(w);
    return f;
}

namespace {

CosetUnion whole_group_padic(Integer p, int dim) {
    CosetUnion u = CosetUnion::padic(std::move(p), dim);
    u.cosets.push_back(Coset(std::vector<Integer>(dim, 0), 0, 1));
    return u;
}

CosetUnion whole_group_profinite(const IntMatrix2& theta) {
    CosetUnion u = CosetUnion::profinite_matrix(theta);
    u.cosets.push_back(Coset({0, 0}, 0, 1));
    return u;
}

IntMatrix2 phi_matrix() { return IntMatrix2(2, 2, 1, 2); }

QuadRat sqrt2_beta(const Integer& m, const Integer& n) {
    // (m, n) = alpha*(sqrt2, 1) + beta*(0, 1): beta = n - m*sqrt2/2.
    return QuadRat(Rational(n), Rational(-m, 2));
}

} // namespace

CutProjectScheme scheme_from_catalog(const std::string& name, int truncation) {
    (void)truncation;
    CutProjectScheme s;
    if (name == "diagonal-Z-3adic") {
        s.lattice = CutProjectScheme::Lattice::DiagonalZ3adic;
        s.physical_dim = 1;
        s.rank = 1;
        s.factors.push_back(InternalFactor::padic_factor(whole_group_padic(3, 1)));
        s.covolume = 1;
    } else if (name == "diagonal-Z2-2adic" || name == "chair") {
        s.lattice = name == "chair" ? CutProjectScheme::Lattice::Chair
                                    : CutProjectScheme::Lattice::DiagonalZ2_2adic;
        s.physical_dim = 2;
        s.rank = 2;
        s.factors.push_back(InternalFactor::padic_factor(whole_group_padic(2, 2)));
        s.covolume = 1;
    } else if (name == "sqrt2-phi") {
        s.lattice = CutProjectScheme::Lattice::Sqrt2Phi;
        s.physical_dim = 1;
        s.rank = 2;
        IntervalWindow strip;
        strip.lo = QuadRat(Rational(-1), Rational(-1)); // -1 - sqrt2
        strip.hi = QuadRat();
        strip.lo_closed = true;
        strip.hi_closed = true;
        s.factors.push_back(InternalFactor::euclidean(strip));
        s.factors.push_back(InternalFactor::profinite_factor(whole_group_profinite(phi_matrix())));
        s.covolume = 2;
    } else {
        throw std::invalid_argument("unknown scheme catalog name: " + name);
    }
    return s;
}

std::string scheme_catalog_name(CutProjectScheme::Lattice lattice) {
    switch (lattice) {
        case CutProjectScheme::Lattice::DiagonalZ3adic: return "diagonal-Z-3adic";
        case CutProjectScheme::Lattice::DiagonalZ2_2adic: return "diagonal-Z2-2adic";
        case CutProjectScheme::Lattice::Chair: return "chair";
        case CutProjectScheme::Lattice::Sqrt2Phi: return "sqrt2-phi";
    }
    throw std::logic_error("scheme_catalog_name: bad enum");
}

QuadRat physical_coordinate(const CutProjectScheme& s, const std::vector<Integer>& point) {
    if (static_cast<int>(point.size()) != s.rank)
        throw std::invalid_argument("physical_coordinate: wrong lattice rank");
    switch (s.lattice) {
        case CutProjectScheme::Lattice::DiagonalZ3adic:
            return QuadRat(Rational(point[0]), 0);
        case CutProjectScheme::Lattice::Sqrt2Phi:
            return QuadRat(Rational(point[0]), Rational(point[1]));
        default:
            throw std::invalid_argument("physical_coordinate: scheme is not 1-dimensional");
    }
}

StarPoint star_map(const CutProjectScheme& s, const std::vector<Integer>& point, int level) {
    if (static_cast<int>(point.size()) != s.rank)
        throw std::invalid_argument("star_map: wrong lattice rank");
    if (level < 1) throw std::invalid_argument("star_map: level must be >= 1");
    StarPoint out;
    switch (s.lattice) {
        case CutProjectScheme::Lattice::DiagonalZ3adic: {
            Integer m = int_pow(3, level);
            out.padic.push_back(PadicTrunc{3, level, {mod_pos(point[0], m)}});
            break;
        }
        case CutProjectScheme::Lattice::DiagonalZ2_2adic:
        case CutProjectScheme::Lattice::Chair: {
            Integer m = int_pow(2, level);
            out.padic.push_back(
                PadicTrunc{2, level, {mod_pos(point[0], m), mod_pos(point[1], m)}});
            break;
        }
        case CutProjectScheme::Lattice::Sqrt2Phi: {
            out.euclid.push_back(sqrt2_beta(point[0], point[1]));
            IntMatrix2 phi = phi_matrix();
            Hnf2 h = hnf_of(mat_pow(phi, level));
            out.profinite.push_back(
                ProfiniteTrunc{phi, level, hnf_reduce(h, Vec2I(point[0], point[1]))});
            break;
        }
    }
    return out;
}

bool window_accepts(const CutProjectScheme& s, const std::vector<Integer>& point) {
    if (static_cast<int>(point.size()) != s.rank)
        throw std::invalid_argument("window_accepts: wrong lattice rank");
    for (const InternalFactor& f : s.factors) {
        switch (f.kind) {
            case InternalFactor::Kind::EuclideanLine: {
                QuadRat beta = sqrt2_beta(point[0], point[1]);
                if (!f.interval.contains(beta)) return false;
                break;
            }
            case InternalFactor::Kind::Padic: {
                std::vector<Integer> coords(point.begin(), point.end());
                if (!coset_contains(f.window, coords)) return false;
                break;
            }
            case InternalFactor::Kind::ProfiniteMatrix: {
                if (!coset_contains(f.window, Vec2I(point[0], point[1]))) return false;
                break;
            }
        }
    }
    return true;
}

namespace {

Integer quad_floor(const QuadRat& x) {
    Rational approx = quad_embed_real(x, 25);
    Integer f = floor_div(boost::multiprecision::numerator(approx),
                          boost::multiprecision::denominator(approx));
    while (QuadRat(Rational(f + 1), 0) <= x) ++f;
    while (QuadRat(Rational(f), 0) > x) --f;
    return f;
}

Integer quad_ceil(const QuadRat& x) { return -quad_floor(-x); }

} // namespace

std::vector<ModelPoint> model_set_points(const CutProjectScheme& s, const ModelSetQuery& q,
                                         int threads) {
    int workers = resolve_thread_count(threads);
    std::vector<ModelPoint> out;
    switch (s.lattice) {
        case CutProjectScheme::Lattice::DiagonalZ3adic: {
            Integer lo = quad_ceil(q.lo), hi = quad_floor(q.hi);
            if (hi < lo) return out;
            std::int64_t count = (hi - lo).convert_to<std::int64_t>() + 1;
            std::vector<char> accept(count, 0);
            parallel_for(0, count, workers, [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t i = b; i < e; ++i)
                    accept[i] = window_accepts(s, {lo + i}) ? 1 : 0;
            });
            for (std::int64_t i = 0; i < count; ++i) {
                if (!accept[i]) continue;
                ModelPoint p;
                p.lattice = {lo + i};
                p.x = QuadRat(Rational(lo + i), 0);
                out.push_back(std::move(p));
            }
            break;
        }
        case CutProjectScheme::Lattice::DiagonalZ2_2adic:
        case CutProjectScheme::Lattice::Chair: {
            for (Integer x = q.box_lo.x; x <= q.box_hi.x; ++x)
                for (Integer y = q.box_lo.y; y <= q.box_hi.y; ++y)
                    if (window_accepts(s, {x, y})) {
                        ModelPoint p;
                        p.lattice = {x, y};
                        p.xy = Vec2I(x, y);
                        out.push_back(std::move(p));
                    }
            break;
        }
        case CutProjectScheme::Lattice::Sqrt2Phi: {
            // The euclidean window bounds the conjugate, which together with
            // the physical range bounds both integer coordinates.
            const IntervalWindow* strip = nullptr;
            for (const InternalFactor& f : s.factors)
                if (f.kind == InternalFactor::Kind::EuclideanLine) strip = &f.interval;
            if (!strip)
                throw std::invalid_argument("model_set_points: scheme lacks a euclidean window");
            QuadRat sqrt2(Rational(0), Rational(1));
            QuadRat conj_lo = -sqrt2 * strip->hi;
            QuadRat conj_hi = -sqrt2 * strip->lo;
            Integer m_lo = quad_ceil((q.lo + conj_lo) / QuadRat(Rational(2), 0));
            Integer m_hi = quad_floor((q.hi + conj_hi) / QuadRat(Rational(2), 0));
            if (m_hi < m_lo) return out;
            std::int64_t count = (m_hi - m_lo).convert_to<std::int64_t>() + 1;
            std::vector<std::vector<ModelPoint>> rows(count);
            parallel_for(0, count, workers, [&](std::int64_t b, std::int64_t e) {
                for (std::int64_t i = b; i < e; ++i) {
                    Integer m = m_lo + i;
                    QuadRat mq(Rational(m), 0);
                    Integer n_lo = quad_ceil((q.lo - mq) / sqrt2);
                    Integer n_hi = quad_floor((q.hi - mq) / sqrt2);
                    for (Integer n = n_lo; n <= n_hi; ++n) {
                        QuadRat x{Rational(m), Rational(n)};
                        if (x < q.lo || x > q.hi) continue;
                        if (!window_accepts(s, {m, n})) continue;
                        ModelPoint p;
                        p.lattice = {m, n};
                        p.x = x;
                        rows[i].push_back(std::move(p));
                    }
                }
            });
            for (auto& row : rows)
                for (auto& p : row) out.push_back(std::move(p));
            std::sort(out.begin(), out.end(),
                      [](const ModelPoint& a, const ModelPoint& b) { return a.x < b.x; });
            break;
        }
    }
    return out;
}

QuadRat density(const CutProjectScheme& s) {
    QuadRat product(Rational(1), 0);
    for (const InternalFactor& f : s.factors) {
        switch (f.kind) {
            case InternalFactor::Kind::EuclideanLine:
                product = product * f.interval.length();
                break;
            default:
                product = product * QuadRat(haar_measure(f.window), 0);
                break;
        }
    }
    return product / QuadRat(Rational(s.covolume), 0);
}

RegularityVerdict regularity_check(const CutProjectScheme& s,
                                   const std::vector<Rational>& boundary_values,
                                   const Rational& shift) {
    if (s.lattice != CutProjectScheme::Lattice::DiagonalZ3adic) {
        return RegularityVerdict{RegularityStatus::Undecided, false, {},
                                 "exact rational boundary test applies to the diagonal "
                                 "scalar scheme only"};
    }
    // Internal images of lattice points are exactly the rational integers,
    // so a boundary value is hit iff it is an integer after the shift.
    for (const Rational& b : boundary_values) {
        Rational shifted = b + shift;
        if (boost::multiprecision::denominator(shifted) == 1) {
            std::ostringstream note;
            note << "boundary value " << rational_str(b) << " shifted by "
                 << rational_str(shift) << " is the image of the lattice point "
                 << rational_str(shifted);
            return RegularityVerdict{RegularityStatus::NotRegular, true, shifted, note.str()};
        }
    }
    return RegularityVerdict{RegularityStatus::Regular, true, {},
                             "no shifted boundary value is a rational integer; lattice "
                             "images can never reach it at any level"};
}

RegularityVerdict regularity_check_trunc(const CutProjectScheme& s,
                                         const std::vector<PadicTrunc>& boundary) {
    (void)s;
    std::ostringstream note;
    note << "every residue class at level "
         << (boundary.empty() ? 0 : boundary.front().level)
         << " is realized by lattice points, so finite truncations cannot certify "
            "regularity either way";
    return RegularityVerdict{RegularityStatus::Undecided, false, {}, note.str()};
}

Rational shift_search(const CutProjectScheme& s, const std::vector<Rational>& boundary_values,
                      const std::vector<Rational>& candidates) {
    for (const Rational& c : candidates) {
        RegularityVerdict v = regularity_check(s, boundary_values, c);
        if (v.status == RegularityStatus::Regular) return c;
    }
    throw std::domain_error(
        "shift_search: no candidate shift clears the boundary; extend the candidate "
        "list with deeper denominators");
}

namespace {

ordered_json quadrat_to_json(const QuadRat& x) {
    // numerator/denominator pairs of the rational and sqrt2 parts,
    // lossless for round trips
    ordered_json j;
    j["r"] = {boost::multiprecision::numerator(x.a).convert_to<long long>(),
              boost::multiprecision::denominator(x.a).convert_to<long long>()};
    j["s"] = {boost::multiprecision::numerator(x.b).convert_to<long long>(),
              boost::multiprecision::denominator(x.b).convert_to<long long>()};
    return j;
}

QuadRat quadrat_from_json(const ordered_json& j) {
    auto r = j.at("r");
    auto s = j.at("s");
    return QuadRat(Rational(Integer(r.at(0).get<long long>()), Integer(r.at(1).get<long long>())),
                   Rational(Integer(s.at(0).get<long long>()), Integer(s.at(1).get<long long>())));
}

} // namespace

std::string scheme_to_json(const CutProjectScheme& s, int indent) {
    ordered_json j;
    j["lattice"] = scheme_catalog_name(s.lattice);
    j["physical_dim"] = s.physical_dim;
    j["factors"] = ordered_json::array();
    for (const InternalFactor& f : s.factors) {
        ordered_json jf;
        switch (f.kind) {
            case InternalFactor::Kind::EuclideanLine:
                jf["kind"] = "euclidean";
                jf["lo"] = quadrat_to_json(f.interval.lo);
                jf["hi"] = quadrat_to_json(f.interval.hi);
                jf["lo_closed"] = f.interval.lo_closed;
                jf["hi_closed"] = f.interval.hi_closed;
                break;
            case InternalFactor::Kind::Padic:
                jf["kind"] = "padic";
                jf["window"] = ordered_json::parse(coset_union_to_json(f.window, -1));
                break;
            case InternalFactor::Kind::ProfiniteMatrix:
                jf["kind"] = "profinite";
                jf["window"] = ordered_json::parse(coset_union_to_json(f.window, -1));
                break;
        }
        j["factors"].push_back(jf);
    }
    return indent >= 0 ? j.dump(indent) : j.dump();
}

CutProjectScheme scheme_from_json(const std::string& config_text) {
    ordered_json j = ordered_json::parse(config_text);
    CutProjectScheme s = scheme_from_catalog(j.at("lattice").get<std::string>());
    if (j.contains("physical_dim") && j.at("physical_dim").get<int>() != s.physical_dim)
        throw std::invalid_argument("scheme_from_json: physical_dim contradicts the lattice");
    if (!j.contains("factors")) return s;
    const auto& jf = j.at("factors");
    if (jf.size() != s.factors.size())
        throw std::invalid_argument("scheme_from_json: factor count contradicts the lattice");
    for (std::size_t i = 0; i < s.factors.size(); ++i) {
        const auto& f = jf.at(i);
        std::string kind = f.at("kind").get<std::string>();
        InternalFactor& target = s.factors[i];
        if (kind == "euclidean") {
            if (target.kind != InternalFactor::Kind::EuclideanLine)
                throw std::invalid_argument("scheme_from_json: factor kind mismatch");
            target.interval.lo = quadrat_from_json(f.at("lo"));
            target.interval.hi = quadrat_from_json(f.at("hi"));
            target.interval.lo_closed = f.value("lo_closed", true);
            target.interval.hi_closed = f.value("hi_closed", true);
            if (sign_of(target.interval.hi - target.interval.lo) < 0)
                throw std::invalid_argument("scheme_from_json: empty euclidean window");
        } else if (kind == "padic" || kind == "profinite") {
            if ((kind == "padic") != (target.kind == InternalFactor::Kind::Padic))
                throw std::invalid_argument("scheme_from_json: factor kind mismatch");
            CosetUnion w = coset_union_from_json(f.at("window").dump());
            if (w.kind != target.window.kind || w.dim != target.window.dim ||
                (w.kind == InternalKind::Padic && w.p != target.window.p) ||
                (w.kind == InternalKind::ProfiniteMatrix && !(w.theta == target.window.theta)))
                throw std::invalid_argument("scheme_from_json: window group mismatch");
            if (w.cosets.empty())
                throw std::invalid_argument("scheme_from_json: empty window");
            target.window = std::move(w);
        } else {
            throw std::invalid_argument("scheme_from_json: unknown factor kind " + kind);
        }
    }
    return s;
}

} // namespace padicms
