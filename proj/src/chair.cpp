#include "padicms/chair.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace padicms {

namespace {

using ordered_json = nlohmann::ordered_json;

Integer rat_floor(const Rational& r) {
    Rational v = r;
    Integer num = boost::multiprecision::numerator(v);
    Integer den = boost::multiprecision::denominator(v);
    return floor_div(num, den);
}

Integer rat_ceil(const Rational& r) { return -rat_floor(-r); }

std::string point_str(const Vec2I& v) {
    std::ostringstream os;
    os << "(" << v.x << "," << v.y << ")";
    return os.str();
}

std::array<std::map<Vec2I, int>, 4> first_appearance(const ChairState& st) {
    std::array<std::map<Vec2I, int>, 4> first;
    for (int i = 0; i <= st.max_level; ++i)
        for (int k = 0; k < 4; ++k)
            for (const Vec2I& t : st.per_level[i][k]) first[k].emplace(t, i);
    return first;
}

} // namespace

const std::vector<Vec2I>& ChairState::stage(int level, int k) const {
    if (level < 0 || level > max_level || k < 0 || k > 3)
        throw std::invalid_argument("ChairState::stage: level or class out of range");
    return per_level[level][k];
}

AffineMap2 chair_inflation() {
    return AffineMap2(RatMatrix2(0, -2, 2, 0), Vec2Q(Rational(1, 2), Rational(1, 2)));
}

std::array<AffineMap2, 4> chair_placements() {
    RatMatrix2 rot(0, -1, 1, 0);
    RatMatrix2 rot2 = rot * rot;
    std::array<AffineMap2, 4> place;
    place[0] = AffineMap2::identity();
    place[1] = AffineMap2(rot, Vec2Q(Rational(1), Rational(0)));
    place[2] = AffineMap2(rot2, Vec2Q(Rational(1), Rational(1)));
    place[3] = AffineMap2(rot, Vec2Q(Rational(0), Rational(1)));
    return place;
}

std::array<int, 4> chair_class_steps() { return {0, 1, 2, 1}; }

bool RatBox::contains(const Vec2I& v) const {
    return x_lo <= v.x && Rational(v.x) <= x_hi && y_lo <= v.y && Rational(v.y) <= y_hi;
}

Integer RatBox::integer_point_count() const {
    Integer nx = rat_floor(x_hi) - rat_ceil(x_lo) + 1;
    Integer ny = rat_floor(y_hi) - rat_ceil(y_lo) + 1;
    if (nx < 0 || ny < 0) return 0;
    return nx * ny;
}

RatBox chair_patch_box(int level) {
    if (level < 0) throw std::invalid_argument("chair_patch_box: negative level");
    RatBox b{Rational(-1, 2), Rational(1, 2), Rational(-1, 2), Rational(1, 2)};
    for (int i = 0; i < level; ++i) {
        Rational half(1, 2);
        RatBox next{-2 * b.y_hi + half, -2 * b.y_lo + half,
                    2 * b.x_lo + half, 2 * b.x_hi + half};
        b = next;
    }
    return b;
}

ChairState chair_recursion(int max_level) {
    if (max_level < 0 || max_level > 12)
        throw std::invalid_argument("chair_recursion: level must be in [0, 12]");
    ChairState st;
    st.max_level = max_level;
    st.per_level.resize(max_level + 1);
    st.per_level[0][0].push_back(Vec2I(Integer(0), Integer(0)));

    AffineMap2 T = chair_inflation();
    AffineMap2 T_inv = T.inverse();
    std::array<AffineMap2, 4> place = chair_placements();
    std::array<int, 4> steps = chair_class_steps();

    AffineMap2 fwd = AffineMap2::identity();
    AffineMap2 bwd = AffineMap2::identity();
    for (int i = 0; i < max_level; ++i) {
        std::array<AffineMap2, 4> branch;
        for (int l = 0; l < 4; ++l)
            branch[l] = affine_compose(fwd, affine_compose(place[l], bwd));

        for (int k = 0; k < 4; ++k) {
            std::vector<Vec2I>& out = st.per_level[i + 1][k];
            for (int l = 0; l < 4; ++l) {
                const std::vector<Vec2I>& src = st.per_level[i][(k - steps[l] + 4) % 4];
                for (const Vec2I& t : src) out.push_back(branch[l].apply_integer(t));
            }
            std::sort(out.begin(), out.end());
            for (std::size_t j = 1; j < out.size(); ++j)
                if (out[j] == out[j - 1])
                    throw std::logic_error("chair_recursion: colliding branch images in class " +
                                           std::to_string(k));
        }

        // the four classes together must tile the integer points of the patch box
        RatBox box = chair_patch_box(i + 1);
        std::vector<Vec2I> all;
        for (int k = 0; k < 4; ++k) {
            for (const Vec2I& v : st.per_level[i + 1][k]) {
                if (!box.contains(v))
                    throw std::logic_error("chair_recursion: point outside patch box");
                all.push_back(v);
            }
        }
        if (Integer(all.size()) != int_pow(Integer(4), i + 1) ||
            Integer(all.size()) != box.integer_point_count())
            throw std::logic_error("chair_recursion: patch point count mismatch");
        std::sort(all.begin(), all.end());
        for (std::size_t j = 1; j < all.size(); ++j)
            if (all[j] == all[j - 1]) throw std::logic_error("chair_recursion: classes overlap");

        fwd = affine_compose(T, fwd);
        bwd = affine_compose(bwd, T_inv);
    }
    return st;
}

DescentResult class_by_descent(const Vec2I& v) {
    int entry = 0;
    while (!chair_patch_box(entry).contains(v)) {
        ++entry;
        if (entry > 64)
            throw std::invalid_argument("class_by_descent: point escapes every tracked patch");
    }

    AffineMap2 T = chair_inflation();
    AffineMap2 T_inv = T.inverse();
    std::array<AffineMap2, 4> place = chair_placements();
    std::array<int, 4> steps = chair_class_steps();

    std::vector<AffineMap2> fwd(entry + 1), bwd(entry + 1);
    fwd[0] = AffineMap2::identity();
    bwd[0] = AffineMap2::identity();
    for (int i = 1; i <= entry; ++i) {
        fwd[i] = affine_compose(T, fwd[i - 1]);
        bwd[i] = affine_compose(bwd[i - 1], T_inv);
    }

    DescentResult res;
    res.entry_level = entry;
    res.k = 0;
    Vec2I cur = v;
    for (int i = entry; i >= 1; --i) {
        RatBox inner = chair_patch_box(i - 1);
        int hits = 0;
        int taken = -1;
        Vec2I next;
        for (int l = 0; l < 4; ++l) {
            AffineMap2 b = affine_compose(fwd[i - 1], affine_compose(place[l], bwd[i - 1]));
            Vec2Q pre = b.inverse().apply(Vec2Q(cur));
            if (!pre.is_integral()) continue;
            Vec2I p = pre.to_integer();
            if (!inner.contains(p)) continue;
            ++hits;
            taken = l;
            next = p;
        }
        if (hits != 1) throw std::logic_error("class_by_descent: branch preimage not unique");
        res.path.push_back(taken);
        res.k = (res.k + steps[taken]) % 4;
        cur = next;
    }
    if (cur != Vec2I(Integer(0), Integer(0)))
        throw std::logic_error("class_by_descent: descent did not reach the origin");
    std::reverse(res.path.begin(), res.path.end());
    return res;
}

ChairWindows chair_windows(const ChairState& state, ChairWindowMode mode) {
    ChairWindows w;
    w.built_to_level = state.max_level;
    w.mode = mode;
    for (int k = 0; k < 4; ++k) w.omega[k] = CosetUnion::padic(2, 2);

    std::array<std::map<Vec2I, int>, 4> first = first_appearance(state);

    if (mode == ChairWindowMode::Conservative) {
        for (int k = 0; k < 4; ++k) {
            for (const auto& [t, lvl] : first[k])
                w.omega[k].cosets.push_back(Coset({t.x, t.y}, lvl, Integer(4)));
            w.omega[k] = normal_form(w.omega[k]);
        }
        return w;
    }

    if (state.max_level > 10)
        throw std::invalid_argument(
            "chair_windows: refined mode needs a reference patch two levels deeper");
    int ref_level = state.max_level + 2;
    ChairState ref = chair_recursion(ref_level);

    // residue tables: orientation per residue class mod 2^j if single-valued
    int top_j = ref_level - 1;
    std::vector<std::vector<signed char>> cls(top_j + 1);
    std::vector<std::vector<int>> cnt(top_j + 1);
    for (int j = 2; j <= top_j; ++j) {
        long long m = 1LL << j;
        cls[j].assign(static_cast<std::size_t>(m * m), -1);
        cnt[j].assign(static_cast<std::size_t>(m * m), 0);
        for (int k = 0; k < 4; ++k) {
            for (const Vec2I& t : ref.per_level[ref_level][k]) {
                long long x = t.x.convert_to<long long>();
                long long y = t.y.convert_to<long long>();
                std::size_t idx = static_cast<std::size_t>((x & (m - 1)) * m + (y & (m - 1)));
                if (cnt[j][idx] == 0) cls[j][idx] = static_cast<signed char>(k);
                else if (cls[j][idx] != k) cls[j][idx] = -2;
                ++cnt[j][idx];
            }
        }
    }

    for (int k = 0; k < 4; ++k) {
        std::set<std::pair<int, std::pair<long long, long long>>> chosen;
        for (const auto& [t, lvl] : first[k]) {
            int j_cons = lvl + 2;
            long long x = t.x.convert_to<long long>();
            long long y = t.y.convert_to<long long>();
            int pick = j_cons;
            for (int j = 2; j < j_cons && j <= top_j; ++j) {
                long long m = 1LL << j;
                std::size_t idx = static_cast<std::size_t>((x & (m - 1)) * m + (y & (m - 1)));
                if (cls[j][idx] == k && cnt[j][idx] >= 16) {
                    pick = j;
                    break;
                }
            }
            long long m = 1LL << pick;
            chosen.insert({pick, {x & (m - 1), y & (m - 1)}});
        }
        CosetUnion u = CosetUnion::padic(2, 2);
        for (const auto& [j, r] : chosen)
            u.cosets.push_back(Coset({Integer(r.first), Integer(r.second)}, j, Integer(1)));
        w.omega[k] = normal_form(u);
    }
    return w;
}

Rational ChairWindows::measure(int k) const {
    if (k < 0 || k > 3) throw std::invalid_argument("ChairWindows::measure: class out of range");
    return haar_measure(omega[k]);
}

Rational ChairWindows::total_measure() const {
    Rational s = 0;
    for (int k = 0; k < 4; ++k) s += haar_measure(omega[k]);
    return s;
}

Rational ChairWindows::deficit() const { return Rational(1) - total_measure(); }

ChairLabels chair_model_set(const ChairWindows& w, const Vec2I& lo, const Vec2I& hi) {
    if (hi.x < lo.x || hi.y < lo.y) throw std::invalid_argument("chair_model_set: empty box");
    ChairLabels out;
    out.lo = lo;
    out.hi = hi;
    for (Integer x = lo.x; x <= hi.x; ++x) {
        for (Integer y = lo.y; y <= hi.y; ++y) {
            Vec2I v(x, y);
            int inside = 0;
            int label = -1;
            for (int k = 0; k < 4; ++k)
                if (coset_contains(w.omega[k], v)) {
                    ++inside;
                    label = k;
                }
            if (inside == 1) out.labels.emplace_back(v, label);
            else if (inside == 0) out.undecided.push_back(v);
            else out.conflicts.push_back(v);
        }
    }
    return out;
}

ChairOracleReport chair_oracle_compare(const ChairWindows& w, const ChairState& state,
                                       int level) {
    if (level < 0 || level > state.max_level)
        throw std::invalid_argument("chair_oracle_compare: level out of range");
    ChairOracleReport rep;
    rep.level = level;
    rep.agreed = 0;
    rep.undecided = 0;
    for (int k = 0; k < 4; ++k) {
        for (const Vec2I& t : state.per_level[level][k]) {
            int inside = 0;
            int label = -1;
            for (int kk = 0; kk < 4; ++kk)
                if (coset_contains(w.omega[kk], t)) {
                    ++inside;
                    label = kk;
                }
            if (inside == 0) {
                ++rep.undecided;
            } else if (inside == 1 && label == k) {
                ++rep.agreed;
            } else if (rep.disagreements.size() < 16) {
                std::ostringstream os;
                os << point_str(t) << " class " << k << " labelled ";
                if (inside > 1) os << "ambiguously";
                else os << label;
                rep.disagreements.push_back(os.str());
            }
        }
    }
    return rep;
}

ChairPeriodicityReport chair_periodicity_check(const ChairState& state, int max_stage) {
    if (max_stage < 0 || max_stage > state.max_level)
        throw std::invalid_argument("chair_periodicity_check: stage out of range");
    ChairPeriodicityReport rep;
    rep.patch_level = state.max_level;
    rep.checked = 0;
    RatBox box = chair_patch_box(state.max_level);
    for (int i = 0; i <= max_stage; ++i) {
        Integer m = int_pow(Integer(2), i + 2);
        for (int k = 0; k < 4; ++k) {
            const std::vector<Vec2I>& deepest = state.per_level[state.max_level][k];
            for (const Vec2I& t : state.per_level[i][k]) {
                Integer a_lo = rat_ceil((box.x_lo - t.x) / m);
                Integer a_hi = rat_floor((box.x_hi - t.x) / m);
                Integer b_lo = rat_ceil((box.y_lo - t.y) / m);
                Integer b_hi = rat_floor((box.y_hi - t.y) / m);
                for (Integer a = a_lo; a <= a_hi; ++a) {
                    for (Integer b = b_lo; b <= b_hi; ++b) {
                        Vec2I u(t.x + a * m, t.y + b * m);
                        ++rep.checked;
                        if (!std::binary_search(deepest.begin(), deepest.end(), u) &&
                            rep.violations.size() < 16) {
                            std::ostringstream os;
                            os << point_str(t) << " + " << m << "*" << point_str(Vec2I(a, b))
                               << " leaves class " << k;
                            rep.violations.push_back(os.str());
                        }
                    }
                }
            }
        }
    }
    return rep;
}

std::string chair_level_json(const ChairState& state, int level, int indent) {
    if (level < 0 || level > state.max_level)
        throw std::invalid_argument("chair_level_json: level out of range");
    ordered_json obj;
    obj["level"] = level;
    ordered_json sets = ordered_json::object();
    for (int k = 0; k < 4; ++k) {
        ordered_json arr = ordered_json::array();
        for (const Vec2I& t : state.per_level[level][k])
            arr.push_back({t.x.convert_to<long long>(), t.y.convert_to<long long>()});
        sets[std::to_string(k)] = std::move(arr);
    }
    obj["sets"] = std::move(sets);
    return obj.dump(indent);
}

std::string chair_svg_points(const std::vector<std::pair<Vec2I, int>>& labeled,
                             int px_per_unit) {
    if (px_per_unit <= 0)
        throw std::invalid_argument("chair_svg_points: pixel scale must be positive");
    static const char* colors[4] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (labeled.empty()) {
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"0\" height=\"0\"/>\n";
        return svg.str();
    }
    std::vector<std::pair<Vec2I, int>> pts = labeled;
    std::sort(pts.begin(), pts.end());
    Integer min_x = pts[0].first.x, max_x = pts[0].first.x;
    Integer min_y = pts[0].first.y, max_y = pts[0].first.y;
    for (const auto& [t, k] : pts) {
        min_x = std::min(min_x, t.x);
        max_x = std::max(max_x, t.x);
        min_y = std::min(min_y, t.y);
        max_y = std::max(max_y, t.y);
    }
    long long width = ((max_x - min_x + 1) * px_per_unit).convert_to<long long>();
    long long height = ((max_y - min_y + 1) * px_per_unit).convert_to<long long>();
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";

    // arrow direction per class: upper-right rotated by k quarter turns
    static const int dx[4] = {1, -1, -1, 1};
    static const int dy[4] = {1, 1, -1, -1};
    int arm = (3 * px_per_unit) / 10;
    int head = px_per_unit / 4;
    for (const auto& [t, k] : pts) {
        if (k < 0 || k > 3) throw std::invalid_argument("chair_svg_points: label out of range");
        long long left = ((t.x - min_x) * px_per_unit).convert_to<long long>();
        long long top = ((max_y - t.y) * px_per_unit).convert_to<long long>();
        long long cx = left + px_per_unit / 2;
        long long cy = top + px_per_unit / 2;
        svg << "  <rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << px_per_unit
            << "\" height=\"" << px_per_unit << "\" fill=\"" << colors[k] << "\"/>\n";
        long long tip_x = cx + arm * dx[k];
        long long tip_y = cy - arm * dy[k];
        svg << "  <path d=\"M " << cx - arm * dx[k] << " " << cy + arm * dy[k] << " L " << tip_x
            << " " << tip_y << " M " << tip_x - head * dx[k] << " " << tip_y << " L " << tip_x
            << " " << tip_y << " M " << tip_x << " " << tip_y + head * dy[k] << " L " << tip_x
            << " " << tip_y << "\" stroke=\"#ffffff\" stroke-width=\"2\" fill=\"none\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string chair_svg(const ChairState& state, int level, int px_per_unit) {
    std::vector<std::pair<Vec2I, int>> labeled;
    for (int k = 0; k < 4; ++k)
        for (const Vec2I& t : state.stage(level, k)) labeled.emplace_back(t, k);
    return chair_svg_points(labeled, px_per_unit);
}

} // namespace padicms
