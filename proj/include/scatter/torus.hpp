#pragma once

#include <cstdint>
#include <string>

#include "scatter/bigfloat.hpp"

namespace scatter {

// One squared aspect parameter (a^2 or b^2), either an exact positive
// rational p/q in lowest terms or a user-declared irrational given as a
// decimal string. The declaration matters: rational lattices get exact
// integer norm keys, irrational ones get orbit-grouped floating norms.
struct Aspect {
    bool exact = true;
    std::int64_t num = 1;
    std::int64_t den = 1;
    std::string text = "1";  // original input, preserved for caching/round-trips
    BigFloat value = 1;

    static Aspect rational(std::int64_t p, std::int64_t q);
    static Aspect irrational(const std::string& decimal);
    // "p/q" or bare integer -> rational; decimal point / exponent -> irrational
    static Aspect from_string(const std::string& s);
};

// Flat torus R^d / 2*pi*L0.
// 2D: L0 = Z(a,0) + Z(0,1/a), dual norms m^2/a^2 + n^2 a^2, area 4 pi^2.
// 3D: L0 = Z(a,0,0) + Z(0,b,0) + Z(0,0,1/(ab)), dual norms
//     m^2/a^2 + n^2/b^2 + k^2 a^2 b^2, volume 8 pi^3.
// Both have unit-covolume dual lattices.
struct TorusSpec {
    int dimension = 2;
    Aspect a2;
    Aspect b2;  // 3D only

    static TorusSpec square();
    static TorusSpec rect2d(Aspect a2);
    static TorusSpec box3d(Aspect a2, Aspect b2);

    bool exact() const { return dimension == 2 ? a2.exact : (a2.exact && b2.exact); }
    double area_or_volume() const;
    // Scale S such that exact rational norms are K/S with integer K.
    std::int64_t key_scale() const;
    std::string describe() const;
    // Stable string identifying the torus for cache keys and sidecars.
    std::string canonical_key() const;
};

}  // namespace scatter
