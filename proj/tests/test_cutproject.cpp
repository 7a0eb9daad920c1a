#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicms/cutproject.hpp"

#include <random>

using namespace padicms;

namespace {

QuadRat qr(long a) { return QuadRat(Rational(a), 0); }
QuadRat qr(long a, long b) { return QuadRat(Rational(a), Rational(b)); }

CutProjectScheme z3_scheme_with_window(std::vector<Coset> cosets) {
    CutProjectScheme s = scheme_from_catalog("diagonal-Z-3adic");
    CosetUnion w = CosetUnion::padic(3, 1);
    w.cosets = std::move(cosets);
    s.factors[0] = InternalFactor::padic_factor(normal_form(w));
    return s;
}

} // namespace

TEST_CASE("interval windows decide endpoints exactly") {
    IntervalWindow w;
    w.lo = qr(-1, -1); // -1 - sqrt2
    w.hi = qr(0);
    CHECK(w.contains(qr(-1, -1)));
    CHECK(w.contains(qr(0)));
    CHECK(w.contains(qr(0, -1)));
    CHECK(w.contains(qr(1, -1)));
    w.lo_closed = false;
    CHECK(!w.contains(qr(-1, -1)));
    w.hi_closed = false;
    CHECK(!w.contains(qr(0)));
    CHECK(w.contains(qr(-1, 0)));
    CHECK(!w.contains(qr(-2, -1)));
    CHECK(!w.contains(qr(1, 0)));
}

TEST_CASE("catalog schemes") {
    CutProjectScheme z3 = scheme_from_catalog("diagonal-Z-3adic");
    CHECK(z3.physical_dim == 1);
    CHECK(z3.rank == 1);
    REQUIRE(z3.factors.size() == 1);
    CHECK(z3.factors[0].kind == InternalFactor::Kind::Padic);
    CHECK(z3.covolume == 1);

    CutProjectScheme chair = scheme_from_catalog("chair");
    CHECK(chair.physical_dim == 2);
    CHECK(chair.rank == 2);
    CHECK(chair.factors[0].window.p == 2);
    CHECK(chair.factors[0].window.dim == 2);

    CutProjectScheme s2 = scheme_from_catalog("sqrt2-phi");
    CHECK(s2.rank == 2);
    REQUIRE(s2.factors.size() == 2);
    CHECK(s2.factors[0].kind == InternalFactor::Kind::EuclideanLine);
    CHECK(s2.factors[0].interval.lo == qr(-1, -1));
    CHECK(s2.factors[0].interval.hi == qr(0));
    CHECK(s2.factors[1].kind == InternalFactor::Kind::ProfiniteMatrix);
    CHECK(s2.covolume == 2);
    CHECK(scheme_catalog_name(s2.lattice) == "sqrt2-phi");

    CHECK_THROWS_AS(scheme_from_catalog("nonsense"), std::invalid_argument);
}

TEST_CASE("physical coordinates") {
    CutProjectScheme z3 = scheme_from_catalog("diagonal-Z-3adic");
    CHECK(physical_coordinate(z3, {7}) == qr(7));
    CHECK_THROWS(physical_coordinate(z3, {1, 2}));
    CutProjectScheme s2 = scheme_from_catalog("sqrt2-phi");
    CHECK(physical_coordinate(s2, {3, -1}) == qr(3, -1));
    CutProjectScheme chair = scheme_from_catalog("chair");
    CHECK_THROWS(physical_coordinate(chair, {1, 2}));
}

TEST_CASE("star map truncations") {
    CutProjectScheme z3 = scheme_from_catalog("diagonal-Z-3adic");
    StarPoint p = star_map(z3, {7}, 2);
    REQUIRE(p.padic.size() == 1);
    CHECK(p.padic[0].residue == std::vector<Integer>{7});
    StarPoint n = star_map(z3, {-1}, 3);
    CHECK(n.padic[0].residue == std::vector<Integer>{26});

    CutProjectScheme chair = scheme_from_catalog("chair");
    StarPoint c = star_map(chair, {-3, 5}, 2);
    CHECK(c.padic[0].residue == std::vector<Integer>{1, 1});

    CutProjectScheme s2 = scheme_from_catalog("sqrt2-phi");
    StarPoint q = star_map(s2, {1, 0}, 1);
    REQUIRE(q.euclid.size() == 1);
    CHECK(q.euclid[0] == QuadRat(Rational(0), Rational(-1, 2)));
    REQUIRE(q.profinite.size() == 1);
    CHECK(q.profinite[0].residue == Vec2I(1, 0));
    // (2, 1) = phi * (1, 0) reduces to the origin class at level 1
    StarPoint q2 = star_map(s2, {2, 1}, 1);
    CHECK(q2.profinite[0].residue == Vec2I(0, 0));

    CHECK_THROWS(star_map(z3, {0}, 0));
}

TEST_CASE("star map is additive on lattice points") {
    std::mt19937_64 rng(46017);
    std::uniform_int_distribution<long> d(-1000000, 1000000);

    CutProjectScheme z3 = scheme_from_catalog("diagonal-Z-3adic");
    Integer m3 = int_pow(3, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        Integer x = d(rng), y = d(rng);
        StarPoint sx = star_map(z3, {x}, 5);
        StarPoint sy = star_map(z3, {y}, 5);
        StarPoint sxy = star_map(z3, {x + y}, 5);
        REQUIRE(mod_pos(sx.padic[0].residue[0] + sy.padic[0].residue[0], m3) ==
                sxy.padic[0].residue[0]);
    }

    CutProjectScheme s2 = scheme_from_catalog("sqrt2-phi");
    IntMatrix2 phi(2, 2, 1, 2);
    Hnf2 h = hnf_of(mat_pow(phi, 4));
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Integer> u{d(rng), d(rng)}, v{d(rng), d(rng)};
        StarPoint su = star_map(s2, u, 4);
        StarPoint sv = star_map(s2, v, 4);
        StarPoint suv = star_map(s2, {u[0] + v[0], u[1] + v[1]}, 4);
        REQUIRE(su.euclid[0] + sv.euclid[0] == suv.euclid[0]);
        REQUIRE(hnf_reduce(h, su.profinite[0].residue + sv.profinite[0].residue) ==
                suv.profinite[0].residue);
        // the physical and internal images together are additive, so the
        // lattice embedding itself is a homomorphism
        REQUIRE(physical_coordinate(s2, u) + physical_coordinate(s2, v) ==
                physical_coordinate(s2, {u[0] + v[0], u[1] + v[1]}));
    }
}

TEST_CASE("window acceptance and model set on the scalar scheme") {
    CutProjectScheme s = z3_scheme_with_window({Coset({1}, 1, 1)});
    CHECK(window_accepts(s, {1}));
    CHECK(window_accepts(s, {4}));
    CHECK(window_accepts(s, {-2}));
    CHECK(!window_accepts(s, {0}));
    CHECK(!window_accepts(s, {3}));

    ModelSetQuery q;
    q.lo = qr(0);
    q.hi = qr(10);
    std::vector<ModelPoint> pts = model_set_points(s, q);
    REQUIRE(pts.size() == 4);
    std::vector<Integer> xs;
    for (const ModelPoint& p : pts) xs.push_back(p.lattice[0]);
    CHECK(xs == std::vector<Integer>{1, 4, 7, 10});
    CHECK(density(s) == QuadRat(Rational(1, 3), 0));

    // worker count must not change the output
    std::vector<ModelPoint> pts4 = model_set_points(s, q, 4);
    REQUIRE(pts4.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts4[i].lattice == pts[i].lattice);

    CutProjectScheme whole = scheme_from_catalog("diagonal-Z-3adic");
    CHECK(window_accepts(whole, {12345}));
    CHECK(density(whole) == qr(1));
}

TEST_CASE("model set on the planar scheme") {
    CutProjectScheme s = scheme_from_catalog("chair");
    CosetUnion w = CosetUnion::padic(2, 2);
    w.cosets.push_back(Coset({0, 0}, 1, 1));
    s.factors[0] = InternalFactor::padic_factor(w);

    ModelSetQuery q;
    q.box_lo = Vec2I(-2, -2);
    q.box_hi = Vec2I(2, 2);
    std::vector<ModelPoint> pts = model_set_points(s, q);
    REQUIRE(pts.size() == 9);
    for (const ModelPoint& p : pts) {
        CHECK(mod_pos(p.xy.x, 2) == 0);
        CHECK(mod_pos(p.xy.y, 2) == 0);
    }
    CHECK(density(s) == QuadRat(Rational(1, 4), 0));
}

TEST_CASE("model set on the quadratic scheme") {
    CutProjectScheme s = scheme_from_catalog("sqrt2-phi");
    ModelSetQuery q;
    q.lo = qr(0);
    q.hi = qr(5);
    std::vector<ModelPoint> pts = model_set_points(s, q);
    std::vector<QuadRat> expected{qr(0),    qr(2, -1), qr(1),    qr(2),
                                  qr(3),    qr(2, 1),  qr(3, 1)};
    REQUIRE(pts.size() == expected.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].x == expected[i]);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].x < pts[i].x);

    // the closed strip admits its boundary: 2 - sqrt2 sits at beta = -1-sqrt2
    CHECK(window_accepts(s, {2, -1}));
    s.factors[0].interval.lo_closed = false;
    CHECK(!window_accepts(s, {2, -1}));
    std::vector<ModelPoint> pts_open = model_set_points(s, q);
    CHECK(pts_open.size() == expected.size() - 1);

    // strip length (1 + sqrt2) over covolume 2, whole profinite group
    CutProjectScheme fresh = scheme_from_catalog("sqrt2-phi");
    CHECK(density(fresh) == QuadRat(Rational(1, 2), Rational(1, 2)));

    // restricting the profinite factor to the phi-image classes keeps only
    // even first coordinates
    CosetUnion phi_cls = CosetUnion::profinite_matrix(IntMatrix2(2, 2, 1, 2));
    phi_cls.cosets.push_back(Coset({0, 0}, 1, 1));
    fresh.factors[1] = InternalFactor::profinite_factor(phi_cls);
    CHECK(window_accepts(fresh, {2, -1}));
    CHECK(!window_accepts(fresh, {1, 0}));
    CHECK(density(fresh) == QuadRat(Rational(1, 4), Rational(1, 4)));
}

TEST_CASE("regularity of rational boundary data") {
    CutProjectScheme s = scheme_from_catalog("diagonal-Z-3adic");
    RegularityVerdict good = regularity_check(s, {Rational(-1, 2), Rational(3, 2)});
    CHECK(good.status == RegularityStatus::Regular);
    CHECK(good.exact);

    RegularityVerdict bad = regularity_check(s, {Rational(1, 2), Rational(2)});
    CHECK(bad.status == RegularityStatus::NotRegular);
    REQUIRE(bad.offender.has_value());
    CHECK(*bad.offender == Rational(2));

    RegularityVerdict shifted = regularity_check(s, {Rational(-1, 2)}, Rational(1, 2));
    CHECK(shifted.status == RegularityStatus::NotRegular);

    CutProjectScheme chair = scheme_from_catalog("chair");
    CHECK(regularity_check(chair, {Rational(0)}).status == RegularityStatus::Undecided);

    PadicTrunc t = rational_to_trunc(Rational(-1, 2), 3, 4);
    RegularityVerdict trunc = regularity_check_trunc(s, {t});
    CHECK(trunc.status == RegularityStatus::Undecided);
    CHECK(!trunc.exact);
}

TEST_CASE("shift search") {
    CutProjectScheme s = scheme_from_catalog("diagonal-Z-3adic");
    CHECK(shift_search(s, {Rational(-1, 2)}, {Rational(0)}) == Rational(0));
    CHECK(shift_search(s, {Rational(-1, 2)}, {Rational(1, 2), Rational(1, 3)}) ==
          Rational(1, 3));
    CHECK_THROWS_AS(shift_search(s, {Rational(0)}, {Rational(1), Rational(2)}),
                    std::domain_error);
}

TEST_CASE("scheme json round trip") {
    CutProjectScheme s = z3_scheme_with_window({Coset({1}, 2, 1), Coset({4}, 3, 1)});
    std::string text = scheme_to_json(s);
    CutProjectScheme back = scheme_from_json(text);
    CHECK(back.lattice == s.lattice);
    REQUIRE(back.factors.size() == 1);
    CHECK(back.factors[0].window.cosets == s.factors[0].window.cosets);
    CHECK(scheme_to_json(back) == text);

    CutProjectScheme s2 = scheme_from_catalog("sqrt2-phi");
    s2.factors[0].interval.hi_closed = false;
    std::string text2 = scheme_to_json(s2);
    CutProjectScheme back2 = scheme_from_json(text2);
    CHECK(back2.factors[0].interval.lo == s2.factors[0].interval.lo);
    CHECK(back2.factors[0].interval.hi_closed == false);
    CHECK(back2.factors[1].window.cosets == s2.factors[1].window.cosets);
    CHECK(scheme_to_json(back2) == text2);

    CHECK_THROWS(scheme_from_json("{\"lattice\":\"no-such\"}"));
    CHECK_THROWS(scheme_from_json("{\"lattice\":\"diagonal-Z-3adic\",\"physical_dim\":2}"));
    // factor kind contradicting the lattice
    CHECK_THROWS(scheme_from_json(
        "{\"lattice\":\"diagonal-Z-3adic\",\"factors\":[{\"kind\":\"euclidean\"}]}"));
}
