#pragma once

// Independent reference implementations used only by tests. Everything here
// works directly from the torus parameters with its own loops, bypassing
// NormTable / SecularSeries internals.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "scatter/greens.hpp"
#include "scatter/torus.hpp"

namespace oracle {

// #{xi in dual lattice : |xi|^2 <= x} by a signed double loop
std::int64_t brute_vector_count(const scatter::TorusSpec& torus, double x);

// distinct norms <= x with multiplicities, grouped at 1e-9 absolute
std::vector<std::pair<double, std::int64_t>> brute_norms(const scatter::TorusSpec& torus, double x);

// partial secular sum over all vectors with |xi|^2 <= cutoff (no tail):
// sum (1/(|xi|^2 - lambda) - |xi|^2/(|xi|^4 + 1))
double brute_secular_partial(const scatter::TorusSpec& torus, double lambda, double cutoff);

// sum over vectors with |xi|^2 <= cutoff of r/(n^2+1) (partial c0)
double brute_c0_partial(const scatter::TorusSpec& torus, double cutoff);

// adaptive Simpson on [a, b]
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

// in-place radix-2 FFT, sign=+1 applies e^{+i 2 pi jk/N}
void fft2d(std::vector<std::complex<double>>& grid, std::size_t n, int sign);

// ||g||^2 by grid quadrature for a normalized 2D state: returns
// area * mean |G(x)|^2 / norm_sq, which should approach 1 up to tail mass
double quadrature_norm_check(const scatter::GreensState& state, std::size_t grid = 512);

// grid quadrature of e^{i<zeta,x>} |g|^2 d(mu) for a 2D state
std::complex<double> quadrature_position_moment(const scatter::GreensState& state,
                                                std::array<std::int32_t, 3> zeta,
                                                std::size_t grid = 512);

}  // namespace oracle
