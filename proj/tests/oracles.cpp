#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

using scatter::TorusSpec;

namespace {

constexpr double kPi = std::numbers::pi;

double norm_of(const TorusSpec& t, std::int64_t m, std::int64_t n, std::int64_t k) {
    const long double A = static_cast<long double>(scatter::to_double(t.a2.value));
    if (t.dimension == 2)
        return static_cast<double>((long double)(m * m) / A + (long double)(n * n) * A);
    const long double B = static_cast<long double>(scatter::to_double(t.b2.value));
    return static_cast<double>((long double)(m * m) / A + (long double)(n * n) / B +
                               (long double)(k * k) * A * B);
}

template <typename Fn>
void for_each_vector(const TorusSpec& t, double x, Fn&& fn) {
    const double A = scatter::to_double(t.a2.value);
    const double B = t.dimension == 3 ? scatter::to_double(t.b2.value) : 1.0;
    const auto mmax = static_cast<std::int64_t>(std::sqrt(x * A) + 2);
    for (std::int64_t m = -mmax; m <= mmax; ++m) {
        const auto nmax = t.dimension == 2 ? static_cast<std::int64_t>(std::sqrt(x / A) + 2)
                                           : static_cast<std::int64_t>(std::sqrt(x * B) + 2);
        for (std::int64_t n = -nmax; n <= nmax; ++n) {
            if (t.dimension == 2) {
                const double v = norm_of(t, m, n, 0);
                if (v <= x) fn(m, n, std::int64_t{0}, v);
            } else {
                const auto kmax = static_cast<std::int64_t>(std::sqrt(x / (A * B)) + 2);
                for (std::int64_t k = -kmax; k <= kmax; ++k) {
                    const double v = norm_of(t, m, n, k);
                    if (v <= x) fn(m, n, k, v);
                }
            }
        }
    }
}

}  // namespace

std::int64_t brute_vector_count(const TorusSpec& torus, double x) {
    std::int64_t c = 0;
    if (x < 0) return 0;
    for_each_vector(torus, x, [&](std::int64_t, std::int64_t, std::int64_t, double) { ++c; });
    return c;
}

std::vector<std::pair<double, std::int64_t>> brute_norms(const TorusSpec& torus, double x) {
    std::vector<double> vals;
    for_each_vector(torus, x, [&](std::int64_t, std::int64_t, std::int64_t, double v) { vals.push_back(v); });
    std::sort(vals.begin(), vals.end());
    std::vector<std::pair<double, std::int64_t>> out;
    for (double v : vals) {
        if (!out.empty() && std::fabs(v - out.back().first) <= 1e-9)
            ++out.back().second;
        else
            out.emplace_back(v, 1);
    }
    return out;
}

double brute_secular_partial(const TorusSpec& torus, double lambda, double cutoff) {
    double s = 0;
    for_each_vector(torus, cutoff, [&](std::int64_t, std::int64_t, std::int64_t, double v) {
        s += 1.0 / (v - lambda) - v / (v * v + 1.0);
    });
    return s;
}

double brute_c0_partial(const TorusSpec& torus, double cutoff) {
    double s = 0;
    for_each_vector(torus, cutoff,
                    [&](std::int64_t, std::int64_t, std::int64_t, double v) { s += 1.0 / (v * v + 1.0); });
    return s;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

void fft2d(std::vector<std::complex<double>>& grid, std::size_t n, int sign) {
    auto fft1 = [&](std::complex<double>* a, std::size_t stride) {
        // bit reversal
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i * stride], a[j * stride]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const double ang = sign * 2 * kPi / static_cast<double>(len);
            const std::complex<double> wl(std::cos(ang), std::sin(ang));
            for (std::size_t i = 0; i < n; i += len) {
                std::complex<double> w(1, 0);
                for (std::size_t k = 0; k < len / 2; ++k) {
                    auto u = a[(i + k) * stride];
                    auto v = a[(i + k + len / 2) * stride] * w;
                    a[(i + k) * stride] = u + v;
                    a[(i + k + len / 2) * stride] = u - v;
                    w *= wl;
                }
            }
        }
    };
    for (std::size_t row = 0; row < n; ++row) fft1(grid.data() + row * n, 1);
    for (std::size_t col = 0; col < n; ++col) fft1(grid.data() + col, n);
}

namespace {
// evaluate G on an n x n grid of the fundamental domain via FFT
std::vector<std::complex<double>> state_grid(const scatter::GreensState& st, std::size_t n) {
    std::vector<std::complex<double>> grid(n * n, {0, 0});
    for (std::size_t i = 0; i < st.xi.size(); ++i) {
        const auto& xi = st.xi[i];
        if (std::abs(xi[0]) >= static_cast<std::int32_t>(n / 2) ||
            std::abs(xi[1]) >= static_cast<std::int32_t>(n / 2))
            throw std::runtime_error("grid too coarse for the coefficient cutoff");
        const auto mi = static_cast<std::size_t>((xi[0] % static_cast<std::int32_t>(n) +
                                                  static_cast<std::int32_t>(n)) %
                                                 static_cast<std::int32_t>(n));
        const auto ni = static_cast<std::size_t>((xi[1] % static_cast<std::int32_t>(n) +
                                                  static_cast<std::int32_t>(n)) %
                                                 static_cast<std::int32_t>(n));
        grid[mi * n + ni] += st.coeff[i];
    }
    fft2d(grid, n, +1);  // G(u,v) = sum c_{m,n} e^{+2 pi i (m u + n v)/n}
    return grid;
}
}  // namespace

double quadrature_norm_check(const scatter::GreensState& st, std::size_t n) {
    auto grid = state_grid(st, n);
    double mean = 0;
    for (const auto& g : grid) mean += std::norm(g);
    mean /= static_cast<double>(grid.size());
    return st.torus.area_or_volume() * mean / st.norm_sq;
}

std::complex<double> quadrature_position_moment(const scatter::GreensState& st,
                                                std::array<std::int32_t, 3> zeta, std::size_t n) {
    auto grid = state_grid(st, n);
    std::complex<double> acc{0, 0};
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            const double ph = 2 * kPi *
                              (static_cast<double>(zeta[0]) * static_cast<double>(u) +
                               static_cast<double>(zeta[1]) * static_cast<double>(v)) /
                              static_cast<double>(n);
            acc += std::complex<double>(std::cos(ph), std::sin(ph)) * std::norm(grid[u * n + v]);
        }
    acc /= static_cast<double>(n * n);
    // normalize by the same quadrature of |g|^2 so tails cancel
    double mean = 0;
    for (const auto& g : grid) mean += std::norm(g);
    mean /= static_cast<double>(grid.size());
    return acc / mean;
}

}  // namespace oracle
