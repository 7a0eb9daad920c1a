#include "padicms/limitquasi.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace padicms {

namespace {

using ordered_json = nlohmann::ordered_json;

bool quad_less(const QuadInt& x, const QuadInt& y) { return sign_of(QuadRat(x - y)) < 0; }

void sort_quad(std::vector<QuadInt>& xs) {
    std::sort(xs.begin(), xs.end(), quad_less);
}

Integer quad_floor(const QuadRat& x) {
    double approx = to_double(x);
    if (!(approx > -9e15 && approx < 9e15))
        throw std::invalid_argument("quad_floor: value out of range");
    Integer z(static_cast<long long>(std::floor(approx)));
    while (QuadRat::from_rational(Rational(z)) > x) --z;
    for (;;) {
        Integer up = z + 1;
        if (QuadRat::from_rational(Rational(up)) > x) break;
        z = up;
    }
    return z;
}

Integer quad_ceil(const QuadRat& x) { return -quad_floor(-x); }

long long pack_point(const Vec2I& v) {
    long long x = v.x.convert_to<long long>();
    long long y = v.y.convert_to<long long>();
    if (x <= -(1LL << 23) || x >= (1LL << 23) || y <= -(1LL << 23) || y >= (1LL << 23))
        throw std::invalid_argument("pack_point: coordinate out of range");
    return ((x + (1LL << 23)) << 24) + (y + (1LL << 23));
}

const QuadRat& contract_ratio() {
    static const QuadRat mu{Rational(2), Rational(-1)}; // 2 - sqrt2
    return mu;
}

/// The seven internal shadows of the recursion branches.
struct QuasiBranch {
    char src;
    char dst;
    QuadRat beta_off;
    Vec2I lat_off;
};

const std::vector<QuasiBranch>& quasi_branches() {
    static const std::vector<QuasiBranch> branches = {
        {'a', 'a', QuadRat(Rational(0), Rational(0)), Vec2I(Integer(0), Integer(0))},
        {'a', 'a', QuadRat(Rational(0), Rational(-1, 2)), Vec2I(Integer(1), Integer(0))},
        {'b', 'a', QuadRat(Rational(0), Rational(0)), Vec2I(Integer(0), Integer(0))},
        {'b', 'a', QuadRat(Rational(1), Rational(-1, 2)), Vec2I(Integer(1), Integer(1))},
        {'a', 'b', QuadRat(Rational(0), Rational(-1)), Vec2I(Integer(2), Integer(0))},
        {'b', 'b', QuadRat(Rational(0), Rational(-1, 2)), Vec2I(Integer(1), Integer(0))},
        {'b', 'b', QuadRat(Rational(1), Rational(-1)), Vec2I(Integer(2), Integer(1))},
    };
    return branches;
}

using Interval = std::pair<QuadRat, QuadRat>;
using IntervalList = std::vector<Interval>;
using CellMap = std::map<Vec2I, IntervalList>;

void merge_interval_list(IntervalList& xs, bool keep_open_gaps) {
    if (xs.empty()) return;
    std::sort(xs.begin(), xs.end(), [](const Interval& u, const Interval& v) {
        int s = sign_of(u.first - v.first);
        if (s != 0) return s < 0;
        return sign_of(u.second - v.second) < 0;
    });
    IntervalList merged;
    merged.push_back(xs.front());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        Interval& cur = merged.back();
        int s = sign_of(xs[i].first - cur.second);
        bool joins = keep_open_gaps ? (s < 0) : (s <= 0);
        if (joins) {
            if (xs[i].second > cur.second) cur.second = xs[i].second;
        } else {
            merged.push_back(xs[i]);
        }
    }
    xs = std::move(merged);
}

std::vector<QuasiCell> flatten_cell_map(const CellMap& m, int level) {
    std::vector<QuasiCell> cells;
    for (const auto& [r, ivs] : m)
        for (const Interval& iv : ivs) cells.push_back({level, r, iv.first, iv.second});
    return cells;
}

bool cell_order(const QuasiCell& x, const QuasiCell& y) {
    if (x.level != y.level) return x.level < y.level;
    if (x.residue != y.residue) return x.residue < y.residue;
    return x.lo < y.lo;
}

/// Per-level phi powers and their column HNFs, shared by membership tests.
struct PhiTower {
    std::vector<IntMatrix2> pow;
    std::vector<Hnf2> hnf;

    explicit PhiTower(int depth) {
        PhiData pd = phi_data();
        pow.resize(depth + 1);
        hnf.resize(depth + 1);
        pow[0] = IntMatrix2::identity();
        hnf[0] = hnf_of(pow[0]);
        for (int i = 1; i <= depth; ++i) {
            pow[i] = pd.phi * pow[i - 1];
            hnf[i] = hnf_of(pow[i]);
        }
    }
};

bool cells_accept(const std::vector<QuasiCell>& cells, const PhiTower& tower,
                  const Vec2I& v, const QuadRat& beta, bool open) {
    std::size_t at = 0;
    while (at < cells.size()) {
        int level = cells[at].level;
        Vec2I want = hnf_reduce(tower.hnf[level], v);
        // jump to the residue block within this level block
        std::size_t lo = at, hi = at;
        while (hi < cells.size() && cells[hi].level == level) ++hi;
        auto first = std::lower_bound(
            cells.begin() + lo, cells.begin() + hi, want,
            [](const QuasiCell& c, const Vec2I& r) { return c.residue < r; });
        for (auto it = first; it != cells.begin() + hi && it->residue == want; ++it) {
            int s_lo = sign_of(beta - it->lo);
            int s_hi = sign_of(it->hi - beta);
            if (open ? (s_lo > 0 && s_hi > 0) : (s_lo >= 0 && s_hi >= 0)) return true;
        }
        at = hi;
    }
    return false;
}

QuadRat union_length(IntervalList ivs) {
    merge_interval_list(ivs, false);
    QuadRat total{Rational(0), Rational(0)};
    for (const Interval& iv : ivs) total = total + (iv.second - iv.first);
    return total;
}

QuadRat distance_to_union(const QuadRat& x, const IntervalList& merged) {
    // merged is sorted and coalesced; distance 0 when covered
    QuadRat best{Rational(-1), Rational(0)};
    for (const Interval& iv : merged) {
        if (x >= iv.first && x <= iv.second) return QuadRat(Rational(0), Rational(0));
        QuadRat d = x < iv.first ? iv.first - x : x - iv.second;
        if (best.a < 0 && best.b == 0) best = d;
        else if (d < best) best = d;
    }
    if (best.a < 0 && best.b == 0)
        throw std::logic_error("distance_to_union: empty target union");
    return best;
}

} // namespace

PhiData phi_data() {
    PhiData pd;
    pd.phi = IntMatrix2(Integer(2), Integer(2), Integer(1), Integer(2));
    pd.eigen_expand = QuadInt(Integer(2), Integer(1));
    pd.eigen_contract = QuadInt(Integer(2), Integer(-1));
    pd.eigenvector_v[0] = QuadRat(Rational(0), Rational(1));
    pd.eigenvector_v[1] = QuadRat(Rational(1), Rational(0));
    pd.complement_direction = Vec2I(Integer(0), Integer(1));

    QuadRat lambda{Rational(2), Rational(1)};
    QuadRat two = QuadRat::from_rational(Rational(2));
    const QuadRat& v0 = pd.eigenvector_v[0];
    const QuadRat& v1 = pd.eigenvector_v[1];
    if (two * v0 + two * v1 != lambda * v0 || v0 + two * v1 != lambda * v1)
        throw std::logic_error("phi_data: eigenvector equation failed");
    if (pd.phi.det() != 2) throw std::logic_error("phi_data: determinant must be 2");
    return pd;
}

QuasiPatch generate_sequence_exact(int steps) {
    if (steps < 0 || steps > 14)
        throw std::invalid_argument("generate_sequence_exact: steps must be in [0, 14]");
    QuadInt lambda(Integer(2), Integer(1));
    QuadInt len_a(Integer(1), Integer(0));
    QuadInt len_b(Integer(0), Integer(1));

    QuasiPatch patch;
    patch.steps = steps;
    patch.lambda_a = {QuadInt(Integer(0), Integer(0))};
    patch.lambda_b = {QuadInt(Integer(0), Integer(-1))};
    patch.span_lo = QuadInt(Integer(0), Integer(-1));
    patch.span_hi = QuadInt(Integer(1), Integer(0));

    for (int n = 0; n < steps; ++n) {
        std::vector<QuadInt> na, nb;
        na.reserve(2 * (patch.lambda_a.size() + patch.lambda_b.size()));
        nb.reserve(patch.lambda_a.size() + 2 * patch.lambda_b.size());
        for (const QuadInt& x : patch.lambda_a) {
            QuadInt y = lambda * x;
            na.push_back(y);
            na.push_back(len_a + y);
            nb.push_back(len_a + len_a + y);
        }
        for (const QuadInt& x : patch.lambda_b) {
            QuadInt y = lambda * x;
            na.push_back(y);
            na.push_back(len_a + len_b + y);
            nb.push_back(len_a + y);
            nb.push_back(len_a + len_a + len_b + y);
        }
        sort_quad(na);
        sort_quad(nb);
        for (std::size_t i = 1; i < na.size(); ++i)
            if (na[i] == na[i - 1])
                throw std::runtime_error("generate_sequence_exact: type-a branches overlap");
        for (std::size_t i = 1; i < nb.size(); ++i)
            if (nb[i] == nb[i - 1])
                throw std::runtime_error("generate_sequence_exact: type-b branches overlap");
        patch.lambda_a = std::move(na);
        patch.lambda_b = std::move(nb);
        patch.span_lo = lambda * patch.span_lo;
        patch.span_hi = lambda * patch.span_hi;
    }

    // a point cannot carry both types
    std::size_t ia = 0;
    for (const QuadInt& x : patch.lambda_b) {
        while (ia < patch.lambda_a.size() && quad_less(patch.lambda_a[ia], x)) ++ia;
        if (ia < patch.lambda_a.size() && patch.lambda_a[ia] == x)
            throw std::runtime_error("generate_sequence_exact: point of both types");
    }
    return patch;
}

Vec2I lift_to_lattice(const QuadInt& x) { return Vec2I(x.a, x.b); }

QuadRat strip_beta(const Vec2I& v) {
    return QuadRat(Rational(v.y), Rational(-v.x) / 2);
}

bool Strip::contains(const QuadRat& beta) const {
    int s_lo = sign_of(beta - lo);
    int s_hi = sign_of(hi - beta);
    if (s_lo < 0 || s_hi < 0) return false;
    if (s_lo == 0 && lo_open) return false;
    if (s_hi == 0 && hi_open) return false;
    return true;
}

Strip full_strip() {
    return {StripKind::Full, QuadRat(Rational(-1), Rational(-1)),
            QuadRat(Rational(0), Rational(0)), false, false};
}

Strip printed_inner_strip() {
    return {StripKind::Inner, QuadRat(Rational(-1), Rational(-1)),
            QuadRat(Rational(0), Rational(-1, 2)), true, true};
}

Strip validated_inner_strip() {
    return {StripKind::Inner, QuadRat(Rational(-1), Rational(-1, 2)),
            QuadRat(Rational(0), Rational(-1, 2)), true, true};
}

StripReport inner_strip_connectivity(int steps) {
    if (steps < 0 || steps > 12)
        throw std::invalid_argument("inner_strip_connectivity: steps must be in [0, 12]");
    QuasiPatch patch = generate_sequence_exact(steps);

    std::vector<long long> keys;
    std::vector<Vec2I> nodes;
    for (const QuadInt& x : patch.lambda_a) nodes.push_back(lift_to_lattice(x));
    for (const QuadInt& x : patch.lambda_b) nodes.push_back(lift_to_lattice(x));
    std::sort(nodes.begin(), nodes.end());
    keys.reserve(nodes.size());
    for (const Vec2I& v : nodes) keys.push_back(pack_point(v));

    auto node_index = [&](long long key) -> int {
        auto it = std::lower_bound(keys.begin(), keys.end(), key);
        if (it == keys.end() || *it != key) return -1;
        return int(it - keys.begin());
    };
    auto neighbors = [&](int i, std::array<int, 4>& out) -> int {
        static const long long d[4] = {1LL << 24, -(1LL << 24), 1, -1};
        int n = 0;
        for (long long off : d) {
            int j = node_index(keys[i] + off);
            if (j >= 0) out[n++] = j;
        }
        return n;
    };

    int nv = int(keys.size());
    StripReport rep;
    rep.steps = steps;
    rep.candidates = 0;
    rep.violations = 0;
    rep.removal_breaks = false;
    rep.removal_example = Vec2I(Integer(0), Integer(0));

    // physical span, half open on the right
    QuadRat span_lo{patch.span_lo};
    QuadRat span_hi{patch.span_hi};
    auto in_span = [&](const QuadRat& x) { return x >= span_lo && x < span_hi; };

    Strip printed = printed_inner_strip();
    Strip full = full_strip();
    QuadRat half_sqrt2{Rational(0), Rational(1, 2)};

    // enumerate lattice candidates in the full strip over the covered span;
    // per column m at most a handful of rows can hit the strip
    Integer m_lo = quad_ceil(span_lo / QuadRat::from_rational(Rational(2)));
    Integer m_hi =
        quad_floor((span_hi + QuadRat(Rational(2), Rational(1))) / QuadRat::from_rational(Rational(2)));
    std::vector<QuadRat> bad_betas;
    for (Integer m = m_lo; m <= m_hi; ++m) {
        QuadRat shift = QuadRat::from_rational(Rational(m)) * half_sqrt2;
        Integer n_from = quad_ceil(full.lo + shift);
        Integer n_to = quad_floor(full.hi + shift);
        for (Integer n = n_from; n <= n_to; ++n) {
            Vec2I v(m, n);
            QuadRat beta = strip_beta(v);
            if (!full.contains(beta)) continue;
            QuadRat x{QuadInt(m, n)};
            if (!in_span(x)) continue;
            bool member = node_index(pack_point(v)) >= 0;
            if (printed.contains(beta)) {
                ++rep.candidates;
                if (!member) {
                    ++rep.violations;
                    if (rep.violation_examples.size() < 8) rep.violation_examples.push_back(v);
                }
            }
            if (!member) bad_betas.push_back(beta);
        }
    }
    rep.printed_claim_ok = rep.violations == 0;

    // widest open gap between offending beta values within the full strip
    std::sort(bad_betas.begin(), bad_betas.end());
    bad_betas.erase(std::unique(bad_betas.begin(), bad_betas.end()), bad_betas.end());
    std::vector<QuadRat> fence;
    fence.push_back(full.lo);
    for (const QuadRat& b : bad_betas) fence.push_back(b);
    fence.push_back(full.hi);
    QuadRat best_lo = fence[0], best_hi = fence[0];
    for (std::size_t i = 0; i + 1 < fence.size(); ++i) {
        if (fence[i + 1] - fence[i] > best_hi - best_lo) {
            best_lo = fence[i];
            best_hi = fence[i + 1];
        }
    }
    rep.validated = Strip{StripKind::Inner, best_lo, best_hi, true, true};
    rep.validated_violations = 0;
    for (const QuadRat& b : bad_betas)
        if (rep.validated.contains(b)) ++rep.validated_violations;

    // claim 2: connectivity through unit horizontal/vertical steps
    std::vector<char> seen(nv, 0);
    std::vector<int> queue_{0};
    seen[0] = 1;
    std::size_t head = 0;
    while (head < queue_.size()) {
        int v = queue_[head++];
        std::array<int, 4> nb{};
        int n = neighbors(v, nb);
        for (int t = 0; t < n; ++t)
            if (!seen[nb[t]]) {
                seen[nb[t]] = 1;
                queue_.push_back(nb[t]);
            }
    }
    rep.connected = int(queue_.size()) == nv;

    // articulation points, iterative lowlink walk
    std::vector<int> disc(nv, -1), low(nv, 0);
    std::vector<char> cut(nv, 0);
    int timer = 0;
    for (int root = 0; root < nv; ++root) {
        if (disc[root] != -1) continue;
        struct Frame {
            int v, parent, next, count;
            std::array<int, 4> nb;
            bool skipped_parent;
        };
        std::vector<Frame> stack;
        int root_children = 0;
        Frame f0{root, -1, 0, 0, {}, false};
        f0.count = neighbors(root, f0.nb);
        disc[root] = low[root] = timer++;
        stack.push_back(f0);
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < f.count) {
                int u = f.nb[f.next++];
                if (u == f.parent && !f.skipped_parent) {
                    f.skipped_parent = true;
                    continue;
                }
                if (disc[u] == -1) {
                    if (f.v == root) ++root_children;
                    Frame g{u, f.v, 0, 0, {}, false};
                    g.count = neighbors(u, g.nb);
                    disc[u] = low[u] = timer++;
                    stack.push_back(g);
                } else {
                    if (disc[u] < low[f.v]) low[f.v] = disc[u];
                }
            } else {
                int v = f.v, parent = f.parent;
                stack.pop_back();
                if (parent != -1) {
                    if (low[v] < low[parent]) low[parent] = low[v];
                    if (parent != root && low[v] >= disc[parent]) cut[parent] = 1;
                }
            }
        }
        if (root_children > 1) cut[root] = 1;
    }

    rep.inner_points = 0;
    rep.cut_vertices = 0;
    int first_cut = -1;
    for (int i = 0; i < nv; ++i) {
        if (!rep.validated.contains(strip_beta(nodes[i]))) continue;
        ++rep.inner_points;
        if (cut[i]) {
            ++rep.cut_vertices;
            if (first_cut < 0) first_cut = i;
        }
    }
    if (first_cut >= 0 && nv > 1) {
        rep.removal_example = nodes[first_cut];
        std::vector<char> mark(nv, 0);
        mark[first_cut] = 1;
        int start = first_cut == 0 ? 1 : 0;
        std::vector<int> q{start};
        mark[start] = 1;
        std::size_t h = 0;
        while (h < q.size()) {
            int v = q[h++];
            std::array<int, 4> nb{};
            int n = neighbors(v, nb);
            for (int t = 0; t < n; ++t)
                if (!mark[nb[t]]) {
                    mark[nb[t]] = 1;
                    q.push_back(nb[t]);
                }
        }
        rep.removal_breaks = int(q.size()) < nv - 1;
    }
    return rep;
}

QuasiWindows ifs_windows(int depth) {
    if (depth < 0 || depth > 20)
        throw std::invalid_argument("ifs_windows: depth must be in [0, 20]");
    PhiData pd = phi_data();
    PhiTower tower(depth + 1);
    const QuadRat& mu = contract_ratio();

    QuasiWindows w;
    w.depth = depth;

    Strip full = full_strip();
    CellMap outer_a, outer_b;
    outer_a[Vec2I(Integer(0), Integer(0))] = {{full.lo, full.hi}};
    outer_b[Vec2I(Integer(0), Integer(0))] = {{full.lo, full.hi}};
    for (int lvl = 0; lvl < depth; ++lvl) {
        CellMap next_a, next_b;
        for (const QuasiBranch& br : quasi_branches()) {
            const CellMap& src = br.src == 'a' ? outer_a : outer_b;
            CellMap& dst = br.dst == 'a' ? next_a : next_b;
            for (const auto& [r, ivs] : src) {
                Vec2I r2 = hnf_reduce(tower.hnf[lvl + 1], pd.phi * r + br.lat_off);
                IntervalList& out = dst[r2];
                for (const Interval& iv : ivs)
                    out.push_back({mu * iv.first + br.beta_off, mu * iv.second + br.beta_off});
            }
        }
        for (auto& [r, ivs] : next_a) merge_interval_list(ivs, false);
        for (auto& [r, ivs] : next_b) merge_interval_list(ivs, false);
        outer_a = std::move(next_a);
        outer_b = std::move(next_b);
    }
    w.outer_a = flatten_cell_map(outer_a, depth);
    w.outer_b = flatten_cell_map(outer_b, depth);

    // inner cells: seed the validated substrip through l Lambda subset Lambda_a,
    // then push it through the typed branches, keeping every level
    if (depth >= 1) {
        Strip seed = validated_inner_strip();
        CellMap front_a, front_b;
        front_a[Vec2I(Integer(0), Integer(0))] = {{mu * seed.lo, mu * seed.hi}};
        for (int lvl = 1;; ++lvl) {
            for (const QuasiCell& c : flatten_cell_map(front_a, lvl)) w.inner_a.push_back(c);
            for (const QuasiCell& c : flatten_cell_map(front_b, lvl)) w.inner_b.push_back(c);
            if (lvl == depth) break;
            CellMap next_a, next_b;
            for (const QuasiBranch& br : quasi_branches()) {
                const CellMap& src = br.src == 'a' ? front_a : front_b;
                CellMap& dst = br.dst == 'a' ? next_a : next_b;
                for (const auto& [r, ivs] : src) {
                    Vec2I r2 = hnf_reduce(tower.hnf[lvl + 1], pd.phi * r + br.lat_off);
                    IntervalList& out = dst[r2];
                    for (const Interval& iv : ivs)
                        out.push_back({mu * iv.first + br.beta_off, mu * iv.second + br.beta_off});
                }
            }
            for (auto& [r, ivs] : next_a) merge_interval_list(ivs, true);
            for (auto& [r, ivs] : next_b) merge_interval_list(ivs, true);
            front_a = std::move(next_a);
            front_b = std::move(next_b);
        }
    }

    std::sort(w.outer_a.begin(), w.outer_a.end(), cell_order);
    std::sort(w.outer_b.begin(), w.outer_b.end(), cell_order);
    std::sort(w.inner_a.begin(), w.inner_a.end(), cell_order);
    std::sort(w.inner_b.begin(), w.inner_b.end(), cell_order);
    return w;
}

bool QuasiWindows::outer_accepts(char type, const QuadInt& x) const {
    if (type != 'a' && type != 'b')
        throw std::invalid_argument("QuasiWindows: type must be 'a' or 'b'");
    PhiTower tower(depth + 1);
    Vec2I v = lift_to_lattice(x);
    return cells_accept(type == 'a' ? outer_a : outer_b, tower, v, strip_beta(v), false);
}

bool QuasiWindows::inner_accepts(char type, const QuadInt& x) const {
    if (type != 'a' && type != 'b')
        throw std::invalid_argument("QuasiWindows: type must be 'a' or 'b'");
    PhiTower tower(depth + 1);
    Vec2I v = lift_to_lattice(x);
    return cells_accept(type == 'a' ? inner_a : inner_b, tower, v, strip_beta(v), true);
}

QuadRat QuasiWindows::outer_measure(char type) const {
    if (type != 'a' && type != 'b')
        throw std::invalid_argument("QuasiWindows: type must be 'a' or 'b'");
    const std::vector<QuasiCell>& cells = type == 'a' ? outer_a : outer_b;
    CellMap by_residue;
    for (const QuasiCell& c : cells) by_residue[c.residue].push_back({c.lo, c.hi});
    QuadRat total{Rational(0), Rational(0)};
    for (auto& [r, ivs] : by_residue) total = total + union_length(ivs);
    return total * QuadRat::from_rational(Rational(1) / int_pow(Integer(2), depth));
}

QuadRat QuasiWindows::inner_measure(char type) const {
    if (type != 'a' && type != 'b')
        throw std::invalid_argument("QuasiWindows: type must be 'a' or 'b'");
    const std::vector<QuasiCell>& cells = type == 'a' ? inner_a : inner_b;
    if (cells.empty()) return QuadRat(Rational(0), Rational(0));
    PhiTower tower(depth + 1);
    CellMap refined;
    for (const QuasiCell& c : cells) {
        int gap = depth - c.level;
        Hnf2 h = hnf_of(tower.pow[gap]);
        for (Integer s = 0; s < h.a; ++s) {
            for (Integer t = 0; t < h.d; ++t) {
                Vec2I shifted = c.residue + tower.pow[c.level] * Vec2I(s, t);
                refined[hnf_reduce(tower.hnf[depth], shifted)].push_back({c.lo, c.hi});
            }
        }
    }
    QuadRat total{Rational(0), Rational(0)};
    for (auto& [r, ivs] : refined) total = total + union_length(ivs);
    return total * QuadRat::from_rational(Rational(1) / int_pow(Integer(2), depth));
}

QuadRat outer_step_distance(const QuasiWindows& coarse, const QuasiWindows& fine,
                            char type) {
    if (fine.depth != coarse.depth + 1)
        throw std::invalid_argument("outer_step_distance: fine must be one step deeper");
    if (type != 'a' && type != 'b')
        throw std::invalid_argument("outer_step_distance: type must be 'a' or 'b'");
    PhiTower tower(coarse.depth + 1);
    const std::vector<QuasiCell>& coarse_cells = type == 'a' ? coarse.outer_a : coarse.outer_b;
    const std::vector<QuasiCell>& fine_cells = type == 'a' ? fine.outer_a : fine.outer_b;

    CellMap fine_by_parent;
    for (const QuasiCell& c : fine_cells)
        fine_by_parent[hnf_reduce(tower.hnf[coarse.depth], c.residue)].push_back({c.lo, c.hi});
    for (auto& [r, ivs] : fine_by_parent) merge_interval_list(ivs, false);

    QuadRat worst{Rational(0), Rational(0)};
    auto consider = [&](const QuadRat& d) {
        if (d > worst) worst = d;
    };
    for (const QuasiCell& c : coarse_cells) {
        auto it = fine_by_parent.find(c.residue);
        if (it == fine_by_parent.end())
            throw std::logic_error("outer_step_distance: residue family lost its content");
        const IntervalList& target = it->second;
        consider(distance_to_union(c.lo, target));
        consider(distance_to_union(c.hi, target));
        for (std::size_t i = 0; i + 1 < target.size(); ++i) {
            const QuadRat& gap_lo = target[i].second;
            const QuadRat& gap_hi = target[i + 1].first;
            if (gap_hi <= c.lo || gap_lo >= c.hi) continue;
            QuadRat mid = (gap_lo + gap_hi) * QuadRat::from_rational(Rational(1, 2));
            if (mid < c.lo) mid = c.lo;
            if (mid > c.hi) mid = c.hi;
            QuadRat d1 = mid - gap_lo;
            QuadRat d2 = gap_hi - mid;
            consider(d1 < d2 ? d1 : d2);
        }
    }
    return worst;
}

SandwichReport sandwich_check(int steps, int depth) {
    QuasiPatch patch = generate_sequence_exact(steps);
    QuasiWindows w = ifs_windows(depth);
    PhiTower tower(depth + 1);

    SandwichReport rep;
    rep.steps = steps;
    rep.depth = depth;
    rep.patch_a = long(patch.lambda_a.size());
    rep.patch_b = long(patch.lambda_b.size());
    rep.inner_model_a = rep.inner_model_b = 0;
    rep.outer_model_a = rep.outer_model_b = 0;
    rep.inner_violations = rep.outer_violations = 0;
    rep.discrepancy = 0;

    std::vector<long long> set_a, set_b;
    for (const QuadInt& x : patch.lambda_a) set_a.push_back(pack_point(lift_to_lattice(x)));
    for (const QuadInt& x : patch.lambda_b) set_b.push_back(pack_point(lift_to_lattice(x)));
    std::sort(set_a.begin(), set_a.end());
    std::sort(set_b.begin(), set_b.end());
    auto member = [](const std::vector<long long>& xs, long long k) {
        return std::binary_search(xs.begin(), xs.end(), k);
    };

    auto note_violation = [&rep](const std::string& s) {
        if (rep.violation_examples.size() < 8) rep.violation_examples.push_back(s);
    };
    auto note_discrepancy = [&rep](const std::string& s) {
        ++rep.discrepancy;
        if (rep.discrepancy_examples.size() < 8) rep.discrepancy_examples.push_back(s);
    };

    // every sequence point must fall in its outer window
    for (const QuadInt& x : patch.lambda_a) {
        Vec2I v = lift_to_lattice(x);
        if (cells_accept(w.outer_a, tower, v, strip_beta(v), false)) continue;
        ++rep.outer_violations;
        note_violation("sequence point of type a outside outer window: " + quadint_str(x));
    }
    for (const QuadInt& x : patch.lambda_b) {
        Vec2I v = lift_to_lattice(x);
        if (cells_accept(w.outer_b, tower, v, strip_beta(v), false)) continue;
        ++rep.outer_violations;
        note_violation("sequence point of type b outside outer window: " + quadint_str(x));
    }

    // lattice sweep over the covered span: inner model points must be
    // sequence points; outer model points beyond the sequence are the
    // expected truncation discrepancy
    QuadRat span_lo{patch.span_lo};
    QuadRat span_hi{patch.span_hi};
    Strip full = full_strip();
    QuadRat half_sqrt2{Rational(0), Rational(1, 2)};
    Integer m_lo = quad_ceil(span_lo / QuadRat::from_rational(Rational(2)));
    Integer m_hi =
        quad_floor((span_hi + QuadRat(Rational(2), Rational(1))) / QuadRat::from_rational(Rational(2)));
    for (Integer m = m_lo; m <= m_hi; ++m) {
        QuadRat shift = QuadRat::from_rational(Rational(m)) * half_sqrt2;
        Integer n_from = quad_ceil(full.lo + shift);
        Integer n_to = quad_floor(full.hi + shift);
        for (Integer n = n_from; n <= n_to; ++n) {
            Vec2I v(m, n);
            QuadRat x_val{QuadInt(m, n)};
            if (!(x_val >= span_lo && x_val < span_hi)) continue;
            QuadRat beta = strip_beta(v);
            long long key = pack_point(v);
            QuadInt x(m, n);

            bool in_a = member(set_a, key);
            bool in_b = member(set_b, key);
            if (cells_accept(w.inner_a, tower, v, beta, true)) {
                ++rep.inner_model_a;
                if (!in_a) {
                    ++rep.inner_violations;
                    note_violation("inner model point of type a is no sequence point: " +
                                   quadint_str(x));
                }
            } else if (in_a) {
                note_discrepancy("sequence point of type a below inner resolution: " +
                                 quadint_str(x));
            }
            if (cells_accept(w.inner_b, tower, v, beta, true)) {
                ++rep.inner_model_b;
                if (!in_b) {
                    ++rep.inner_violations;
                    note_violation("inner model point of type b is no sequence point: " +
                                   quadint_str(x));
                }
            } else if (in_b) {
                note_discrepancy("sequence point of type b below inner resolution: " +
                                 quadint_str(x));
            }
            if (cells_accept(w.outer_a, tower, v, beta, false)) {
                ++rep.outer_model_a;
                if (!in_a)
                    note_discrepancy("outer model point of type a beyond the sequence: " +
                                     quadint_str(x));
            }
            if (cells_accept(w.outer_b, tower, v, beta, false)) {
                ++rep.outer_model_b;
                if (!in_b)
                    note_discrepancy("outer model point of type b beyond the sequence: " +
                                     quadint_str(x));
            }
        }
    }
    return rep;
}

QuasiStats quasi_stats(int steps) {
    QuasiPatch patch = generate_sequence_exact(steps);
    QuasiStats st;
    st.steps = steps;
    Integer na(patch.lambda_a.size());
    Integer nb(patch.lambda_b.size());
    Integer total = na + nb;
    st.freq_a = Rational(na) / Rational(total);
    st.freq_b = Rational(nb) / Rational(total);

    QuadRat zero{Rational(0), Rational(0)};
    QuadRat hi{patch.span_hi};
    Integer in_span = 0;
    for (const std::vector<QuadInt>* side : {&patch.lambda_a, &patch.lambda_b}) {
        for (const QuadInt& x : *side) {
            QuadRat v{x};
            if (v >= zero && v < hi) ++in_span;
        }
    }
    st.density_unit_span = QuadRat::from_rational(Rational(in_span)) / hi;

    double sqrt2 = std::sqrt(2.0);
    st.freq_a_err = std::abs(to_double(st.freq_a) - (2.0 - sqrt2));
    st.freq_b_err = std::abs(to_double(st.freq_b) - (sqrt2 - 1.0));
    st.density_err = std::abs(to_double(st.density_unit_span) - (2.0 + sqrt2) / 4.0);
    return st;
}

std::string sandwich_report_json(const SandwichReport& rep, int indent) {
    ordered_json j;
    j["steps"] = rep.steps;
    j["depth"] = rep.depth;
    j["patch"] = {{"a", rep.patch_a}, {"b", rep.patch_b}};
    j["inner_model"] = {{"a", rep.inner_model_a}, {"b", rep.inner_model_b}};
    j["outer_model"] = {{"a", rep.outer_model_a}, {"b", rep.outer_model_b}};
    j["inclusions"] = {{"inner_ok", rep.inner_violations == 0},
                       {"outer_ok", rep.outer_violations == 0}};
    j["violations"] = {{"count", rep.inner_violations + rep.outer_violations},
                       {"examples", rep.violation_examples}};
    j["discrepancy"] = {{"count", rep.discrepancy}, {"examples", rep.discrepancy_examples}};
    Strip full = full_strip();
    Strip printed = printed_inner_strip();
    Strip validated = validated_inner_strip();
    auto strip_json = [](const Strip& s) {
        return ordered_json{{"lo", quadrat_str(s.lo)},
                            {"hi", quadrat_str(s.hi)},
                            {"lo_open", s.lo_open},
                            {"hi_open", s.hi_open}};
    };
    j["strips"] = {{"full", strip_json(full)},
                   {"printed_inner", strip_json(printed)},
                   {"validated_inner", strip_json(validated)}};
    return j.dump(indent);
}

} // namespace padicms
