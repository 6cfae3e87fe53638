#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "scatter/norm_table.hpp"

namespace scatter {

struct SecularValue {
    double lambda = 0;
    double value = 0;
    double tail_error_bound = 0;
};

struct C0Result {
    double value = 0;    // partial + tail
    double partial = 0;  // sum over the table
    double tail = 0;     // density integral beyond the cutoff
    double tail_error_bound = 0;
};

// The spectral function
//     S(lambda) = sum_j r(n_j) [ 1/(n_j - lambda) - n_j/(n_j^2 + 1) ],
// evaluated as the partial sum over the table plus a closed-form density
// integral over (cutoff, infinity). The counting density is pi in 2D and
// c*sqrt(t) in 3D with c calibrated from the table itself. New eigenvalues
// solve S(lambda) = c0 tan(phi/2) (fixed extension parameter) or, windowed,
// = 1/alpha (fixed physical coupling).
//
// Strictly increasing from -inf to +inf between consecutive poles, with
// S -> -inf as lambda -> -inf, so every target has exactly one root per
// interval plus one ground state.
class SecularSeries {
  public:
    explicit SecularSeries(const NormTable& table);
    ~SecularSeries();
    SecularSeries(SecularSeries&&) noexcept;
    SecularSeries& operator=(SecularSeries&&) noexcept;

    const NormTable& table() const { return *table_; }
    // Density coefficient of the counting measure: 2D returns pi; 3D returns
    // the empirical c with counting(x) ~ (2c/3) x^(3/2).
    double density_coefficient() const { return density_; }

    C0Result c0() const;

    // Full evaluation with preconditions (lambda off every pole, cutoff
    // adequate). Throws UsageError / CutoffError.
    SecularValue eval(double lambda) const;

    // Raw exact partial sum + tail, no precondition checks.
    double value_exact(double lambda) const;
    // Block-moment accelerated evaluation; |result - exact| <= *abs_err.
    double value_fast(double lambda, double* abs_err = nullptr) const;
    // d/dlambda S = sum r/(n-lambda)^2 + tail'.
    double derivative(double lambda) const;

    double tail(double lambda) const;
    double tail_derivative(double lambda) const;
    double tail_error_bound(double lambda) const;

    // sum over entries with index in [lo, hi) of r [1/(n-l) - n/(n^2+1)].
    double windowed_value(double lambda, std::size_t lo, std::size_t hi) const;
    double windowed_derivative(double lambda, std::size_t lo, std::size_t hi) const;
    // Index range of norms with |n - anchor| < radius.
    std::pair<std::size_t, std::size_t> window_around(double anchor, double radius) const;

    // Lemma-style check (2D only): sum over |n_j - lambda| >= lambda^delta of
    // r [1/(n-l) - n/(n^2+1)], plus pi log lambda. Should stay O(1).
    double truncation_discrepancy(double lambda, double delta) const;

    // Nearest table entry; used for pole detection.
    std::size_t nearest_index(double lambda) const;

    bool fast_eval_available() const;

  private:
    struct MomentTree;
    void require_off_pole(double lambda) const;
    void require_cutoff(double lambda) const;

    const NormTable* table_;
    double density_ = 0;
    double const_part_ = 0;  // sum r * n/(n^2+1) over the table
    double remainder_scale_ = 0;  // empirical constant for tail error bounds
    std::unique_ptr<MomentTree> tree_;
};

}  // namespace scatter
