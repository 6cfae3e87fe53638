#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scatter/norm_table.hpp"
#include "scatter/solver.hpp"

namespace scatter {

struct Histogram {
    double lo = 0;
    double hi = 5;
    std::vector<std::int64_t> counts;
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;

    double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    // Density normalized over the in-range mass, so it integrates to exactly 1.
    std::vector<double> densities() const;
};

enum class ReferenceCdf {
    Poisson,      // 1 - e^{-s}
    SemiPoisson,  // density 4 s e^{-2s}, cdf 1 - (1 + 2s) e^{-2s}
};

double reference_cdf(ReferenceCdf ref, double s);

// Sup distance between the empirical cdf of the sample and the reference.
double ks_distance(std::span<const double> sample, ReferenceCdf ref);
// Two-sample sup distance (ties handled by grouping).
double ks_distance(std::span<const double> a, std::span<const double> b);

struct SpacingReport {
    double x = 0;
    std::int64_t count = 0;       // number of gaps used
    double mean_spacing = 0;
    std::vector<double> normalized;
    Histogram histogram;
    double ks_vs_poisson = 0;
    double ks_vs_semipoisson = 0;
};

struct SpacingOptions {
    int bins = 50;
    double hist_max = 5.0;
};

// Consecutive spacings of the entries <= x of a strictly increasing
// sequence, normalized to mean exactly 1. Needs at least 10 gaps.
SpacingReport spacing_report(std::span<const double> sorted_values, double x,
                             const SpacingOptions& opt = {});

struct GapReport {
    double x = 0;
    std::int64_t count = 0;        // N(x), distinct norms <= x
    double mean_d = 0;             // <n_j - lambda_j>
    double mean_delta = 0;         // <n_j - n_{j-1}>
    double ratio = 0;              // mean_d / mean_delta
    double log_weighted_ratio = 0; // mean_d * log(x) / mean_delta
};

// Means follow the counting convention <f_j>_x = (1/N(x)) sum_{n_j<=x} f_j.
// Requires an eigenvalue for every interval with n_j <= x; missing intervals
// raise CoverageError listing the gaps.
GapReport gap_report(const NormTable& norms, std::span<const EigenvalueRecord> eigenvalues,
                     double x);

// KS distance between the normalized spacing samples of two sequences,
// both restricted to entries <= x.
double compare_spacings(std::span<const double> seq_a, std::span<const double> seq_b, double x);

// Unit-rate Poisson process (exponential gaps), deterministic per seed.
std::vector<double> sample_poisson_process(std::size_t n, std::uint64_t seed);

// Least-squares slope of y against x.
double fitted_slope(std::span<const double> x, std::span<const double> y);

}  // namespace scatter
