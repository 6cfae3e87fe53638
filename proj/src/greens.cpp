#include "scatter/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "scatter/errors.hpp"

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t pack_key(std::int32_t m, std::int32_t n, std::int32_t k) {
    constexpr std::uint64_t bias = 1u << 20;
    return ((static_cast<std::uint64_t>(m) + bias) << 42) | ((static_cast<std::uint64_t>(n) + bias) << 21) |
           (static_cast<std::uint64_t>(k) + bias);
}

double density_coefficient(const NormTable& table) {
    if (table.torus().dimension == 2) return kPi;
    const double X = table.cutoff();
    return X >= 1 ? 3.0 * static_cast<double>(table.total_count()) / (2.0 * std::pow(X, 1.5)) : 2 * kPi;
}

std::complex<double> unit_direction_power(const TorusSpec& torus, const std::array<std::int32_t, 3>& xi,
                                          double norm, int k) {
    // hat(xi)/|xi| as a unit complex number for the 2D vector (m/a, n a)
    const double a = std::sqrt(to_double(torus.a2.value));
    const std::complex<double> z(xi[0] / a / std::sqrt(norm), xi[1] * a / std::sqrt(norm));
    std::complex<double> r{1, 0};
    const std::complex<double> base = k >= 0 ? z : std::conj(z);
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
}

}  // namespace

std::size_t GreensState::index_of(std::int32_t m, std::int32_t n, std::int32_t k) const {
    auto it = lookup_.find(pack_key(m, n, k));
    return it == lookup_.end() ? npos : it->second;
}

double GreensState::mass_fraction_at(double norm_value) const {
    double mass = 0;
    const double tol = 1e-9 * std::max(1.0, norm_value);
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (std::fabs(xi_norm[i] - norm_value) <= tol) mass += std::norm(coeff[i]);
    return mass / coeff_sum_sq;
}

GreensState build_greens_state(const NormTable& table, double lambda, std::array<double, 3> x0,
                               const GreensOptions& opt) {
    const TorusSpec& torus = table.torus();
    const double abs_l = std::fabs(lambda);
    double cutoff = opt.coefficient_cutoff;
    if (cutoff <= 0) cutoff = std::max({4 * abs_l, abs_l + 1e4, 1e3});

    if (table.cutoff() < std::max(lambda > 0 ? 2 * lambda : 0.0, 1e3))
        throw CutoffError("norm table cutoff too small for a state at lambda = " + std::to_string(lambda),
                          std::max(2 * lambda, 1e3));
    {
        const auto vals = table.values();
        auto it = std::upper_bound(vals.begin(), vals.end(), lambda);
        double nearest = it == vals.begin() ? vals.front() : *(it - 1);
        if (it != vals.end()) nearest = (lambda - *(it - 1) <= *it - lambda) ? *(it - 1) : *it;
        if (std::fabs(lambda - nearest) <= 1e-13 * std::max({1.0, std::fabs(lambda), nearest}))
            throw UsageError("lambda sits on a Laplace eigenvalue; the Green's function has a pole there");
    }

    GreensState st;
    st.torus = torus;
    st.lambda = lambda;
    st.x0 = x0;
    st.coeff_cutoff = cutoff;

    const int dim = torus.dimension;
    const BigFloat X = cutoff;
    const double A = to_double(torus.a2.value);
    const double B = dim == 3 ? to_double(torus.b2.value) : 1.0;
    const auto mmax = static_cast<std::int32_t>(std::sqrt(cutoff * A) + 2);
    const auto nmax3 = static_cast<std::int32_t>(std::sqrt(cutoff * B) + 2);
    const auto nmax2 = static_cast<std::int32_t>(std::sqrt(cutoff / A) + 2);
    const auto kmax = dim == 3 ? static_cast<std::int32_t>(std::sqrt(cutoff / (A * B)) + 2) : 0;

    for (std::int32_t m = -mmax; m <= mmax; ++m) {
        const std::int32_t ntop = dim == 2 ? nmax2 : nmax3;
        for (std::int32_t n = -ntop; n <= ntop; ++n) {
            for (std::int32_t k = -kmax; k <= kmax; ++k) {
                const BigFloat vq = orbit_norm(torus, std::abs(m), std::abs(n), std::abs(k));
                if (vq > X) continue;
                const double v = to_double(vq);
                const double phase = -2 * kPi * (m * x0[0] + n * x0[1] + k * x0[2]);
                const std::complex<double> c =
                    std::complex<double>(std::cos(phase), std::sin(phase)) / (v - lambda);
                st.lookup_.emplace(pack_key(m, n, k), static_cast<std::uint32_t>(st.xi.size()));
                st.xi.push_back({m, n, k});
                st.xi_norm.push_back(v);
                st.coeff.push_back(c);
                st.coeff_sum_sq += std::norm(c);
            }
        }
    }

    const double dens = density_coefficient(table);
    if (dim == 2) {
        st.tail_sum = kPi / (cutoff - lambda);
    } else {
        // c * int_X^inf sqrt(t)/(t-lambda)^2 dt, 64-pt quadrature via t = X/u^2
        double s = 0;
        const int N = 48;
        for (int i = 1; i <= N; ++i) {  // midpoint rule is ample for a diagnostic tail
            const double u = (i - 0.5) / N;
            const double t = cutoff / (u * u);
            const double d = t - lambda;
            s += std::sqrt(t) / (d * d) * 2 * cutoff / (u * u * u);
        }
        st.tail_sum = dens * s / N;
    }
    st.norm_sq = torus.area_or_volume() * (st.coeff_sum_sq + st.tail_sum);
    st.tail_mass = st.tail_sum / (st.coeff_sum_sq + st.tail_sum);
    return st;
}

// ---------------------------------------------------------------------------
// observables
// ---------------------------------------------------------------------------

Observable Observable::constant(std::complex<double> c) {
    Observable o;
    o.terms.push_back({{0, 0, 0}, 0, c});
    return o;
}

Observable Observable::position_mode(std::array<std::int32_t, 3> zeta) {
    Observable o;
    o.terms.push_back({zeta, 0, {1, 0}});
    return o;
}

Observable Observable::momentum_mode(int k) {
    Observable o;
    o.terms.push_back({{0, 0, 0}, k, {1, 0}});
    return o;
}

Observable Observable::cosine(std::array<std::int32_t, 3> zeta) {
    Observable o;
    o.terms.push_back({zeta, 0, {0.5, 0}});
    o.terms.push_back({{-zeta[0], -zeta[1], -zeta[2]}, 0, {0.5, 0}});
    return o;
}

MatrixElement matrix_element(const GreensState& state, const Observable& obs) {
    const int dim = state.torus.dimension;
    MatrixElement out;
    double abs_coeff_sum = 0;
    double missed = 0;
    const std::size_t zero_idx = state.index_of(0, 0, 0);

    for (const auto& term : obs.terms) {
        if (term.angular_k != 0 && dim != 2)
            throw UsageError("angular symbol components are defined for 2D states only");
        const double zeta_norm = to_double(
            orbit_norm(state.torus, std::abs(term.zeta[0]), std::abs(term.zeta[1]), std::abs(term.zeta[2])));
        if (zeta_norm > state.coeff_cutoff / 4)
            throw UsageError("observable support exceeds the coefficient cutoff margin");
        abs_coeff_sum += std::abs(term.coeff);

        std::complex<double> acc{0, 0};
        for (std::size_t i = 0; i < state.xi.size(); ++i) {
            const auto& xi = state.xi[i];
            if (xi[0] == 0 && xi[1] == 0 && xi[2] == 0) continue;  // zero mode handled separately
            const std::size_t src =
                state.index_of(xi[0] - term.zeta[0], xi[1] - term.zeta[1], xi[2] - term.zeta[2]);
            if (src == GreensState::npos) {
                missed += std::norm(state.coeff[i]);
                continue;
            }
            std::complex<double> contrib = state.coeff[src] * std::conj(state.coeff[i]);
            if (term.angular_k != 0)
                contrib *= unit_direction_power(state.torus, xi, state.xi_norm[i], term.angular_k);
            acc += contrib;
        }
        // zero output mode: only k = 0 symbol components act
        if (term.angular_k == 0 && zero_idx != GreensState::npos) {
            const std::size_t src = state.index_of(-term.zeta[0], -term.zeta[1], -term.zeta[2]);
            if (src != GreensState::npos)
                acc += state.coeff[src] * std::conj(state.coeff[zero_idx]);
        }
        out.value += term.coeff * acc;
    }
    out.value /= state.coeff_sum_sq;
    out.tail_bound = abs_coeff_sum * (2 * state.tail_mass + missed / state.coeff_sum_sq);
    return out;
}

std::vector<std::complex<double>> momentum_profile(const GreensState& state, int k_max) {
    if (state.torus.dimension != 2) throw UsageError("momentum profile is defined for 2D states only");
    if (k_max < 1) throw UsageError("k_max must be >= 1");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        std::complex<double> acc{0, 0};
        for (std::size_t i = 0; i < state.xi.size(); ++i) {
            const auto& xi = state.xi[i];
            if (xi[0] == 0 && xi[1] == 0 && xi[2] == 0) continue;
            acc += unit_direction_power(state.torus, xi, state.xi_norm[i], k) * std::norm(state.coeff[i]);
        }
        out.push_back(acc / state.coeff_sum_sq);
    }
    return out;
}

std::vector<ScanRow> equidistribution_scan(const NormTable& table,
                                           const std::vector<EigenvalueRecord>& eigenvalues,
                                           std::array<double, 3> x0,
                                           const std::vector<std::array<std::int32_t, 3>>& zetas,
                                           const ScanOptions& opt) {
    std::vector<ScanRow> rows(eigenvalues.size() * zetas.size());
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(eigenvalues.size(), 1)));
    auto work = [&](std::size_t e) {
        const auto& rec = eigenvalues[e];
        GreensState st = build_greens_state(table, rec.lambda, x0, opt.greens);
        for (std::size_t z = 0; z < zetas.size(); ++z) {
            MatrixElement me = matrix_element(st, Observable::position_mode(zetas[z]));
            rows[e * zetas.size() + z] = {rec.j, rec.lambda, zetas[z], me.value, me.tail_bound};
        }
    };
    if (threads <= 1) {
        for (std::size_t e = 0; e < eigenvalues.size(); ++e) work(e);
    } else {
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < threads; ++c)
            pool.emplace_back([&, c]() {
                for (std::size_t e = c; e < eigenvalues.size(); e += threads) work(e);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

}  // namespace scatter
