#include "padicms/exactnum.hpp"

#include <sstream>

namespace padicms {

Integer int_pow(const Integer& base, int exp) {
    if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
    Integer r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
    if (b == 0) throw std::invalid_argument("floor_div: zero divisor");
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Integer mod_pos(const Integer& a, const Integer& m) {
    if (m <= 0) throw std::invalid_argument("mod_pos: modulus must be positive");
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
    Integer old_r = a, r = b;
    Integer old_x = 1, xx = 0;
    Integer old_y = 0, yy = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer t;
        t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * xx; old_x = xx; xx = t;
        t = old_y - q * yy; old_y = yy; yy = t;
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    x = old_x;
    y = old_y;
    return old_r;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
    Integer x, y;
    Integer g = ext_gcd(mod_pos(a, m), m, x, y);
    if (g != 1) throw std::domain_error("mod_inverse: argument not invertible");
    return mod_pos(x, m);
}

Integer isqrt_floor(const Integer& n) {
    if (n < 0) throw std::invalid_argument("isqrt_floor: negative argument");
    if (n == 0) return 0;
    // Newton iteration from a power-of-two overestimate; from above the
    // sequence decreases strictly until it passes floor(sqrt(n)).
    Integer x = 1;
    while (x * x < n) x <<= 1;
    Integer next = (x + n / x) / 2;
    while (next < x) {
        x = next;
        next = (x + n / x) / 2;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

int sign_of(const Rational& r) {
    if (r == 0) return 0;
    return r < 0 ? -1 : 1;
}

QuadRat QuadRat::inverse() const {
    Rational n = norm();
    if (n == 0) throw std::domain_error("QuadRat::inverse: zero element");
    return QuadRat(a / n, -b / n);
}

int sign_of(const QuadRat& x) {
    int sa = sign_of(x.a), sb = sign_of(x.b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with 2 b^2, the larger term wins.
    Rational d = x.a * x.a - 2 * x.b * x.b;
    if (d == 0) return 0; // impossible for rational a, b unless both zero
    return sign_of(d) == 1 ? sa : sb;
}

Rational quad_embed_real(const QuadRat& x, int precision) {
    if (precision < 1) throw std::invalid_argument("quad_embed_real: precision must be >= 1");
    if (x.b == 0) return x.a;
    // Scale sqrt2 so the coefficient times the rounding error stays under
    // 10^-precision: |b| * 10^-P < 10^-precision.
    Integer bn = boost::multiprecision::numerator(x.b);
    Integer bd = boost::multiprecision::denominator(x.b);
    if (bn < 0) bn = -bn;
    int extra = 1;
    Integer mag = bn / bd + 1;
    while (mag > 0) { ++extra; mag /= 10; }
    int P = precision + extra;
    Integer scale = int_pow(10, P);
    Integer root = isqrt_floor(2 * scale * scale);
    Rational sqrt2_approx(root, scale);
    return x.a + x.b * sqrt2_approx;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

double to_double(const QuadRat& x) {
    return to_double(quad_embed_real(x, 30));
}

std::string quadint_str(const QuadInt& x) {
    std::ostringstream out;
    if (x.b == 0) {
        out << x.a;
    } else if (x.a == 0) {
        out << x.b << "*sqrt2";
    } else if (x.b > 0) {
        out << x.a << "+" << x.b << "*sqrt2";
    } else {
        out << x.a << "-" << -x.b << "*sqrt2";
    }
    return out.str();
}

std::string rational_str(const Rational& r) {
    std::ostringstream out;
    out << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        out << "/" << boost::multiprecision::denominator(r);
    return out.str();
}

std::string quadrat_str(const QuadRat& x) {
    if (x.b == 0) return rational_str(x.a);
    std::string root = rational_str(boost::multiprecision::abs(x.b)) + "*sqrt2";
    if (x.a == 0) return (x.b < 0 ? "-" : "") + root;
    return rational_str(x.a) + (x.b < 0 ? " - " : " + ") + root;
}

Vec2I Vec2Q::to_integer() const {
    if (!is_integral()) throw std::domain_error("Vec2Q::to_integer: non-integer vector");
    return Vec2I(boost::multiprecision::numerator(x), boost::multiprecision::numerator(y));
}

IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y) {
    IntMatrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
    return r;
}

bool operator==(const IntMatrix2& x, const IntMatrix2& y) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (x.m[i][j] != y.m[i][j]) return false;
    return true;
}

IntMatrix2 mat_pow(const IntMatrix2& m, int exp) {
    if (exp < 0) throw std::invalid_argument("mat_pow: negative exponent");
    IntMatrix2 r = IntMatrix2::identity();
    for (int i = 0; i < exp; ++i) r = r * m;
    return r;
}

RatMatrix2 RatMatrix2::inverse() const {
    Rational d = det();
    if (d == 0) throw std::domain_error("RatMatrix2::inverse: singular matrix");
    return RatMatrix2(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d);
}

RatMatrix2 operator*(const RatMatrix2& x, const RatMatrix2& y) {
    RatMatrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
    return r;
}

bool operator==(const RatMatrix2& x, const RatMatrix2& y) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (x.m[i][j] != y.m[i][j]) return false;
    return true;
}

Vec2I AffineMap2::apply_integer(const Vec2I& v) const {
    Vec2Q image = apply(Vec2Q(v));
    return image.to_integer();
}

AffineMap2 AffineMap2::inverse() const {
    RatMatrix2 inv = linear.inverse();
    Vec2Q s = inv * shift;
    return AffineMap2(inv, Vec2Q(-s.x, -s.y));
}

AffineMap2 affine_compose(const AffineMap2& g, const AffineMap2& f) {
    return AffineMap2(g.linear * f.linear, g.linear * f.shift + g.shift);
}

} // namespace padicms
