#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicms/exactnum.hpp"

#include <random>

using namespace padicms;

TEST_CASE("integer helpers") {
    CHECK(int_pow(3, 0) == 1);
    CHECK(int_pow(3, 7) == 2187);
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_div(7, -2) == -4);
    CHECK(mod_pos(-7, 3) == 2);
    CHECK(mod_pos(9, 3) == 0);
    CHECK(isqrt_floor(0) == 0);
    CHECK(isqrt_floor(15) == 3);
    CHECK(isqrt_floor(16) == 4);
    Integer big = int_pow(10, 40) + 12345;
    Integer r = isqrt_floor(big);
    CHECK(r * r <= big);
    CHECK((r + 1) * (r + 1) > big);
}

TEST_CASE("extended gcd and modular inverse") {
    Integer x, y;
    CHECK(ext_gcd(12, 18, x, y) == 6);
    CHECK(12 * x + 18 * y == 6);
    CHECK(ext_gcd(-5, 3, x, y) == 1);
    CHECK(-5 * x + 3 * y == 1);
    CHECK(mod_inverse(2, 9) == 5);
    CHECK(mod_inverse(7, 3) == 1);
    CHECK_THROWS_AS(mod_inverse(3, 9), std::domain_error);
}

TEST_CASE("quadratic ring arithmetic") {
    QuadInt x(1, 1), y(2, -1);
    CHECK((x * y) == QuadInt(0, 1));        // (1+s)(2-s) = 2 - s + 2s - 2 = s
    CHECK((x + y) == QuadInt(3, 0));
    CHECK(x.conj() == QuadInt(1, -1));
    CHECK(quadint_str(QuadInt(2, 0)) == "2");
    CHECK(quadint_str(QuadInt(-1, -1)) == "-1-1*sqrt2");
    CHECK(quadint_str(QuadInt(0, 3)) == "3*sqrt2");
}

TEST_CASE("quadratic field comparisons are exact") {
    QuadRat sqrt2(Rational(0), Rational(1));
    // 577/408 is a close rational overestimate of sqrt2
    CHECK(QuadRat(Rational(577, 408), 0) > sqrt2);
    CHECK(QuadRat(Rational(1393, 985), 0) < sqrt2);
    CHECK(sign_of(QuadRat(Rational(-4), Rational(3))) > 0);  // 3 sqrt2 > 4
    CHECK(sign_of(QuadRat(Rational(4), Rational(-3))) < 0);
    CHECK(sign_of(QuadRat(Rational(-3), Rational(2))) < 0);  // 2 sqrt2 < 3
    CHECK(sign_of(QuadRat()) == 0);
    QuadRat lam(Rational(2), Rational(1));
    CHECK(lam * lam == QuadRat(Rational(6), Rational(4)));   // (2+s)^2 = 6+4s
    CHECK(lam * lam.conj() == QuadRat(Rational(2), 0));      // norm 4-2 = 2
    CHECK(lam.inverse() * lam == QuadRat(Rational(1), 0));
}

TEST_CASE("rational embedding of sqrt2 values") {
    QuadRat x(Rational(1), Rational(1)); // 1 + sqrt2 = 2.41421356...
    Rational approx = quad_embed_real(x, 12);
    Rational err = approx - Rational(2414213562373095049LL, 1000000000000000000LL);
    if (err < 0) err = -err;
    CHECK(err < Rational(1, 100000000000LL));
    CHECK(quad_embed_real(QuadRat(Rational(7, 3), 0), 5) == Rational(7, 3));
    CHECK(to_double(x) == doctest::Approx(2.414213562373095).epsilon(1e-14));
}

TEST_CASE("string forms") {
    CHECK(rational_str(Rational(-3, 7)) == "-3/7");
    CHECK(rational_str(Rational(4)) == "4");
    CHECK(quadrat_str(QuadRat(Rational(1, 2), Rational(-3, 4))) == "1/2 - 3/4*sqrt2");
    CHECK(quadrat_str(QuadRat(Rational(0), Rational(1))) == "1*sqrt2");
    CHECK(quadrat_str(QuadRat(Rational(-1), Rational(-1))) == "-1 - 1*sqrt2");
}

TEST_CASE("matrices and affine maps") {
    IntMatrix2 r(0, -1, 1, 0); // rotation by pi/2
    CHECK(mat_pow(r, 4) == IntMatrix2::identity());
    CHECK(r.det() == 1);
    CHECK((r * Vec2I(1, 0)) == Vec2I(0, 1));

    RatMatrix2 two_r(0, -2, 2, 0);
    AffineMap2 t(two_r, Vec2Q(Rational(1, 2), Rational(1, 2)));
    Vec2Q image = t.apply(Vec2Q(Rational(1), Rational(0)));
    CHECK(image == Vec2Q(Rational(1, 2), Rational(5, 2)));
    AffineMap2 back = t.inverse();
    CHECK(back.apply(image) == Vec2Q(Rational(1), Rational(0)));
    CHECK(affine_compose(back, t) == AffineMap2::identity());

    AffineMap2 shift(RatMatrix2::identity(), Vec2Q(Rational(1), Rational(-2)));
    CHECK(shift.apply_integer(Vec2I(3, 3)) == Vec2I(4, 1));
    AffineMap2 halver(RatMatrix2(Rational(1, 2), 0, 0, 1), Vec2Q());
    CHECK_THROWS_AS(halver.apply_integer(Vec2I(1, 1)), std::domain_error);
}

TEST_CASE("random consistency between exact sign and doubles") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
    for (int i = 0; i < 2000; ++i) {
        QuadRat x(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        double v = to_double(x);
        int s = sign_of(x);
        if (std::abs(v) > 1e-9) CHECK(s == (v > 0 ? 1 : -1));
    }
}
