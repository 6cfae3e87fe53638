#include "scatter/torus.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

#include "scatter/errors.hpp"

namespace scatter {

BigFloat parse_decimal(const std::string& text) {
    const char* p = text.c_str();
    bool neg = false;
    if (*p == '+' || *p == '-') neg = (*p++ == '-');
    BigFloat mant = 0;
    int frac_digits = 0;
    bool any = false, seen_dot = false;
    for (; *p; ++p) {
        if (*p == '.') {
            if (seen_dot) throw UsageError("malformed decimal: " + text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(*p))) {
            mant = mant * 10 + (*p - '0');
            if (seen_dot) ++frac_digits;
            any = true;
        } else if (*p == 'e' || *p == 'E') {
            break;
        } else {
            throw UsageError("malformed decimal: " + text);
        }
    }
    long exp10 = -frac_digits;
    if (*p == 'e' || *p == 'E') {
        ++p;
        bool eneg = false;
        if (*p == '+' || *p == '-') eneg = (*p++ == '-');
        if (!std::isdigit(static_cast<unsigned char>(*p))) throw UsageError("malformed exponent: " + text);
        long e = 0;
        for (; std::isdigit(static_cast<unsigned char>(*p)); ++p) {
            e = e * 10 + (*p - '0');
            if (e > 100000) throw UsageError("exponent out of range: " + text);
        }
        exp10 += eneg ? -e : e;
    }
    if (*p || !any) throw UsageError("malformed decimal: " + text);
    BigFloat scale = 1, ten = 10;
    long e = exp10 < 0 ? -exp10 : exp10;
    while (e > 0) {
        if (e & 1) scale *= ten;
        ten *= ten;
        e >>= 1;
    }
    BigFloat v = exp10 < 0 ? mant / scale : mant * scale;
    return neg ? -v : v;
}

double to_double(BigFloat v) { return static_cast<double>(v); }

// ---------------------------------------------------------------------------
// Aspect
// ---------------------------------------------------------------------------

Aspect Aspect::rational(std::int64_t p, std::int64_t q) {
    if (q == 0) throw UsageError("aspect denominator is zero");
    if (p <= 0 || q < 0) throw UsageError("aspect parameter must be positive");
    std::int64_t g = std::gcd(p, q);
    Aspect a;
    a.exact = true;
    a.num = p / g;
    a.den = q / g;
    a.text = std::to_string(a.num) + (a.den == 1 ? "" : "/" + std::to_string(a.den));
    a.value = static_cast<BigFloat>(a.num) / static_cast<BigFloat>(a.den);
    return a;
}

Aspect Aspect::irrational(const std::string& decimal) {
    Aspect a;
    a.exact = false;
    a.text = decimal;
    a.value = parse_decimal(decimal);
    if (!(a.value > 0)) throw UsageError("aspect parameter must be positive: " + decimal);
    return a;
}

Aspect Aspect::from_string(const std::string& s) {
    if (s.empty()) throw UsageError("empty aspect parameter");
    if (s.find_first_of(".eE") != std::string::npos) return irrational(s);
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return rational(std::stoll(s), 1);
        return rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw UsageError("malformed aspect parameter: " + s);
    }
}

// ---------------------------------------------------------------------------
// TorusSpec
// ---------------------------------------------------------------------------

TorusSpec TorusSpec::square() { return rect2d(Aspect::rational(1, 1)); }

TorusSpec TorusSpec::rect2d(Aspect a2) {
    TorusSpec t;
    t.dimension = 2;
    t.a2 = std::move(a2);
    return t;
}

TorusSpec TorusSpec::box3d(Aspect a2, Aspect b2) {
    TorusSpec t;
    t.dimension = 3;
    t.a2 = std::move(a2);
    t.b2 = std::move(b2);
    return t;
}

double TorusSpec::area_or_volume() const {
    const double pi = std::numbers::pi;
    return dimension == 2 ? 4 * pi * pi : 8 * pi * pi * pi;
}

std::int64_t TorusSpec::key_scale() const {
    if (!exact()) throw UsageError("key_scale only defined for rational tori");
    if (dimension == 2) return a2.num * a2.den;
    // 3D: norms are K / (p1 q1 p2 q2).
    __int128 s = static_cast<__int128>(a2.num) * a2.den * b2.num * b2.den;
    if (s > static_cast<__int128>(1) << 62) throw UsageError("aspect fractions too large for exact keys");
    return static_cast<std::int64_t>(s);
}

std::string TorusSpec::describe() const {
    if (dimension == 2) return "2d torus, a^2 = " + a2.text + (a2.exact ? "" : " (irrational)");
    return "3d torus, a^2 = " + a2.text + ", b^2 = " + b2.text + (exact() ? "" : " (irrational)");
}

std::string TorusSpec::canonical_key() const {
    std::string s = "dim=" + std::to_string(dimension);
    s += "|a2=" + std::string(a2.exact ? "r:" : "d:") + a2.text;
    if (dimension == 3) s += "|b2=" + std::string(b2.exact ? "r:" : "d:") + b2.text;
    return s;
}

}  // namespace scatter
