#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "scatter/norm_table.hpp"
#include "scatter/solver.hpp"

namespace scatter {

struct GreensOptions {
    double coefficient_cutoff = 0;  // 0 = max(4|lambda|, |lambda| + 1e4)
};

// Plane-wave expansion of the Green's function G_lambda(x, x0): coefficient
// of e^{i<xi,x>} is e^{-i<xi,x0>} / (|xi|^2 - lambda), retained for
// |xi|^2 <= coeff_cutoff. x0 is given in fractional coordinates of the
// fundamental domain, so phases are exp(-2*pi*i*(m u + n v [+ k w])).
struct GreensState {
    TorusSpec torus;
    double lambda = 0;
    std::array<double, 3> x0{0, 0, 0};
    double coeff_cutoff = 0;

    std::vector<std::array<std::int32_t, 3>> xi;  // integer coordinates
    std::vector<double> xi_norm;                  // |xi|^2
    std::vector<std::complex<double>> coeff;

    double coeff_sum_sq = 0;  // sum |c|^2
    double tail_sum = 0;      // density integral of 1/(t-lambda)^2 beyond cutoff
    double norm_sq = 0;       // area * (coeff_sum_sq + tail_sum) = ||G||^2 (up to remainder)
    double tail_mass = 0;     // tail_sum / (coeff_sum_sq + tail_sum)

    std::size_t index_of(std::int32_t m, std::int32_t n, std::int32_t k) const;  // npos if absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // Mass fraction carried by coefficients with |xi|^2 == the nearest norm
    // to the given energy (tolerance-matched against table values).
    double mass_fraction_at(double norm_value) const;

  private:
    friend GreensState build_greens_state(const NormTable&, double, std::array<double, 3>,
                                          const GreensOptions&);
    std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

GreensState build_greens_state(const NormTable& table, double lambda, std::array<double, 3> x0,
                               const GreensOptions& opt = {});

// Symbol on the unit cotangent bundle with finite Fourier support:
// a(x, phi) = sum hat_a(zeta, k) e^{i<zeta,x> + i k phi}.
struct ObservableTerm {
    std::array<std::int32_t, 3> zeta{0, 0, 0};
    int angular_k = 0;
    std::complex<double> coeff{1, 0};
};

struct Observable {
    std::vector<ObservableTerm> terms;

    static Observable constant(std::complex<double> c = 1.0);
    static Observable position_mode(std::array<std::int32_t, 3> zeta);  // e^{i<zeta,x>}
    static Observable momentum_mode(int k);                             // e^{i k phi}
    // real cosine symbol cos(<zeta,x>) as a Hermitian pair
    static Observable cosine(std::array<std::int32_t, 3> zeta);
};

struct MatrixElement {
    std::complex<double> value{0, 0};
    double tail_bound = 0;  // coefficient-tail uncertainty
};

// <Op(a) g, g> for the normalized state g = G/||G||. The quantisation acts
// on Fourier coefficients by hat_f(xi - zeta) shifts with angular factor
// (hat_xi/|xi|)^k; the zero mode takes only k = 0 contributions. Normalized
// so the constant symbol returns exactly 1. Angular factors (k != 0) are 2D
// only.
MatrixElement matrix_element(const GreensState& state, const Observable& obs);

// Angular moments <Op(e^{i k phi}) g, g> for k = 1..k_max (2D only).
std::vector<std::complex<double>> momentum_profile(const GreensState& state, int k_max);

struct ScanRow {
    std::int64_t j = 0;
    double lambda = 0;
    std::array<std::int32_t, 3> zeta{0, 0, 0};
    std::complex<double> value{0, 0};
    double tail_bound = 0;
};

struct ScanOptions {
    unsigned threads = 0;
    GreensOptions greens;
};

// Position-observable matrix elements M_j(zeta) for each eigenvalue and each
// zeta. Rows ordered by (j, zeta-index) regardless of thread count.
std::vector<ScanRow> equidistribution_scan(const NormTable& table,
                                           const std::vector<EigenvalueRecord>& eigenvalues,
                                           std::array<double, 3> x0,
                                           const std::vector<std::array<std::int32_t, 3>>& zetas,
                                           const ScanOptions& opt = {});

}  // namespace scatter
