#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <array>
#include <stdexcept>
#include <string>

namespace padicms {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer power with small non-negative exponent.
Integer int_pow(const Integer& base, int exp);

/// Floor division for arbitrary-precision integers (rounds toward -inf).
Integer floor_div(const Integer& a, const Integer& b);

/// Non-negative remainder, m > 0.
Integer mod_pos(const Integer& a, const Integer& m);

/// Extended gcd: returns g = gcd(a, b) and writes x, y with a*x + b*y = g.
Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y);

/// Modular inverse of a mod m; throws if gcd(a, m) != 1.
Integer mod_inverse(const Integer& a, const Integer& m);

/// Largest s with s*s <= n, exact; n must be non-negative.
Integer isqrt_floor(const Integer& n);

/// -1, 0, or 1.
int sign_of(const Rational& r);

/**
 * Element a + b*sqrt(2) of the quadratic ring Z[sqrt2].
 *
 * Arithmetic is exact; comparisons go through the rational field version
 * below. The Galois conjugate sends sqrt(2) to -sqrt(2).
 */
struct QuadInt {
    Integer a;
    Integer b;

    QuadInt() : a(0), b(0) {}
    QuadInt(Integer a0, Integer b0) : a(std::move(a0)), b(std::move(b0)) {}

    QuadInt conj() const { return QuadInt(a, -b); }
    bool is_zero() const { return a == 0 && b == 0; }

    friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
        return QuadInt(x.a + y.a, x.b + y.b);
    }
    friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
        return QuadInt(x.a - y.a, x.b - y.b);
    }
    friend QuadInt operator-(const QuadInt& x) { return QuadInt(-x.a, -x.b); }
    friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
        return QuadInt(x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    friend bool operator==(const QuadInt& x, const QuadInt& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }
};

/**
 * Element a + b*sqrt(2) of the field Q(sqrt2), with exact sign and order
 * comparisons (no floating point): the sign of a + b*sqrt2 with a, b of
 * opposite signs is decided by comparing a^2 against 2*b^2.
 */
struct QuadRat {
    Rational a;
    Rational b;

    QuadRat() : a(0), b(0) {}
    QuadRat(Rational a0, Rational b0) : a(std::move(a0)), b(std::move(b0)) {}
    explicit QuadRat(const QuadInt& q) : a(q.a), b(q.b) {}
    static QuadRat from_rational(const Rational& r) { return QuadRat(r, 0); }

    QuadRat conj() const { return QuadRat(a, -b); }
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    /// Field norm a^2 - 2 b^2 (product with the conjugate).
    Rational norm() const { return a * a - 2 * b * b; }

    QuadRat inverse() const;

    friend QuadRat operator+(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a + y.a, x.b + y.b);
    }
    friend QuadRat operator-(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a - y.a, x.b - y.b);
    }
    friend QuadRat operator-(const QuadRat& x) { return QuadRat(-x.a, -x.b); }
    friend QuadRat operator*(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    friend QuadRat operator/(const QuadRat& x, const QuadRat& y) {
        return x * y.inverse();
    }
    friend bool operator==(const QuadRat& x, const QuadRat& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QuadRat& x, const QuadRat& y) { return !(x == y); }
};

/// Exact sign of a + b*sqrt2: -1, 0, or 1.
int sign_of(const QuadRat& x);

inline bool operator<(const QuadRat& x, const QuadRat& y) { return sign_of(x - y) < 0; }
inline bool operator>(const QuadRat& x, const QuadRat& y) { return sign_of(x - y) > 0; }
inline bool operator<=(const QuadRat& x, const QuadRat& y) { return sign_of(x - y) <= 0; }
inline bool operator>=(const QuadRat& x, const QuadRat& y) { return sign_of(x - y) >= 0; }

/**
 * Rational approximation of a + b*sqrt2 with |error| < 10^-precision.
 * Uses an integer square root at a working scale wide enough for the
 * requested precision; no floating point is involved.
 */
Rational quad_embed_real(const QuadRat& x, int precision);

/// Double approximation (for reporting; exact paths never rely on it).
double to_double(const Rational& r);
double to_double(const QuadRat& x);

/// Compact form "a+b*sqrt2" (b omitted when 0), for CSV cells.
std::string quadint_str(const QuadInt& x);

/// Readable form "p/q + r/s*sqrt2" with spaces, for reports.
std::string quadrat_str(const QuadRat& x);

/// "p/q", or just "p" for integers.
std::string rational_str(const Rational& r);

struct Vec2I {
    Integer x;
    Integer y;

    Vec2I() : x(0), y(0) {}
    Vec2I(Integer x0, Integer y0) : x(std::move(x0)), y(std::move(y0)) {}

    friend Vec2I operator+(const Vec2I& u, const Vec2I& v) { return Vec2I(u.x + v.x, u.y + v.y); }
    friend Vec2I operator-(const Vec2I& u, const Vec2I& v) { return Vec2I(u.x - v.x, u.y - v.y); }
    friend bool operator==(const Vec2I& u, const Vec2I& v) { return u.x == v.x && u.y == v.y; }
    friend bool operator!=(const Vec2I& u, const Vec2I& v) { return !(u == v); }
    friend bool operator<(const Vec2I& u, const Vec2I& v) {
        return u.x < v.x || (u.x == v.x && u.y < v.y);
    }
};

struct Vec2Q {
    Rational x;
    Rational y;

    Vec2Q() : x(0), y(0) {}
    Vec2Q(Rational x0, Rational y0) : x(std::move(x0)), y(std::move(y0)) {}
    explicit Vec2Q(const Vec2I& v) : x(v.x), y(v.y) {}

    bool is_integral() const {
        return boost::multiprecision::denominator(x) == 1 &&
               boost::multiprecision::denominator(y) == 1;
    }
    Vec2I to_integer() const;

    friend Vec2Q operator+(const Vec2Q& u, const Vec2Q& v) { return Vec2Q(u.x + v.x, u.y + v.y); }
    friend Vec2Q operator-(const Vec2Q& u, const Vec2Q& v) { return Vec2Q(u.x - v.x, u.y - v.y); }
    friend bool operator==(const Vec2Q& u, const Vec2Q& v) { return u.x == v.x && u.y == v.y; }
};

/// 2x2 integer matrix acting on column vectors.
struct IntMatrix2 {
    Integer m[2][2];

    IntMatrix2() { m[0][0] = m[0][1] = m[1][0] = m[1][1] = 0; }
    IntMatrix2(Integer a, Integer b, Integer c, Integer d) {
        m[0][0] = std::move(a); m[0][1] = std::move(b);
        m[1][0] = std::move(c); m[1][1] = std::move(d);
    }
    static IntMatrix2 identity() { return IntMatrix2(1, 0, 0, 1); }

    Integer det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    IntMatrix2 adjugate() const { return IntMatrix2(m[1][1], -m[0][1], -m[1][0], m[0][0]); }

    friend IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y);
    friend Vec2I operator*(const IntMatrix2& x, const Vec2I& v) {
        return Vec2I(x.m[0][0] * v.x + x.m[0][1] * v.y,
                     x.m[1][0] * v.x + x.m[1][1] * v.y);
    }
    friend bool operator==(const IntMatrix2& x, const IntMatrix2& y);
};

IntMatrix2 mat_pow(const IntMatrix2& m, int exp);

/// 2x2 rational matrix.
struct RatMatrix2 {
    Rational m[2][2];

    RatMatrix2() { m[0][0] = m[0][1] = m[1][0] = m[1][1] = 0; }
    RatMatrix2(Rational a, Rational b, Rational c, Rational d) {
        m[0][0] = std::move(a); m[0][1] = std::move(b);
        m[1][0] = std::move(c); m[1][1] = std::move(d);
    }
    explicit RatMatrix2(const IntMatrix2& x) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m[i][j] = x.m[i][j];
    }
    static RatMatrix2 identity() { return RatMatrix2(1, 0, 0, 1); }

    Rational det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    RatMatrix2 inverse() const;

    friend RatMatrix2 operator*(const RatMatrix2& x, const RatMatrix2& y);
    friend Vec2Q operator*(const RatMatrix2& x, const Vec2Q& v) {
        return Vec2Q(x.m[0][0] * v.x + x.m[0][1] * v.y,
                     x.m[1][0] * v.x + x.m[1][1] * v.y);
    }
    friend bool operator==(const RatMatrix2& x, const RatMatrix2& y);
};

/**
 * Affine self-map of the plane x -> linear*x + shift, over the rationals.
 * Composition and inversion are exact; apply_integer checks that the image
 * is an integer vector and throws otherwise.
 */
struct AffineMap2 {
    RatMatrix2 linear;
    Vec2Q shift;

    AffineMap2() : linear(RatMatrix2::identity()), shift() {}
    AffineMap2(RatMatrix2 lin, Vec2Q sh) : linear(std::move(lin)), shift(std::move(sh)) {}
    static AffineMap2 identity() { return AffineMap2(); }

    Vec2Q apply(const Vec2Q& v) const { return linear * v + shift; }
    Vec2I apply_integer(const Vec2I& v) const;
    AffineMap2 inverse() const;

    friend bool operator==(const AffineMap2& f, const AffineMap2& g) {
        return f.linear == g.linear && f.shift == g.shift;
    }
};

/// g after f: (g o f)(x) = g(f(x)).
AffineMap2 affine_compose(const AffineMap2& g, const AffineMap2& f);

} // namespace padicms
