#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "scatter/torus.hpp"

namespace scatter {

struct BuildOptions {
    // Two norms from different symmetry orbits closer than this (relative)
    // are reported as a PrecisionError, never merged.
    double collision_rel_tol = 1e-15;
};

struct CircleLawReport {
    double x = 0;
    std::int64_t lattice_count = 0;   // sum of multiplicities up to x
    double remainder = 0;             // lattice_count - pi*x (2D)
    double huxley_exponent = 131.0 / 416.0;
    std::int64_t distinct_count = 0;  // number of distinct norms <= x
};

// Sorted table of distinct dual-lattice norms n_0=0 < n_1 < ... <= cutoff
// with multiplicities r(n_j). Immutable after construction; safe to share
// across threads.
class NormTable {
  public:
    static NormTable build(const TorusSpec& torus, double cutoff, const BuildOptions& opt = {});

    const TorusSpec& torus() const { return torus_; }
    double cutoff() const { return cutoff_; }
    bool exact() const { return exact_; }
    double collision_rel_tol() const { return collision_rel_tol_; }

    std::size_t size() const { return value_.size(); }
    double value(std::size_t i) const { return value_[i]; }
    std::int64_t mult(std::size_t i) const { return mult_[i]; }
    std::int64_t key(std::size_t i) const { return key_[i]; }  // exact tables only
    const std::array<std::int32_t, 3>& orbit(std::size_t i) const { return orbit_[i]; }

    std::span<const double> values() const { return value_; }
    std::span<const double> mults_f() const { return multf_; }
    std::span<const std::int64_t> mults() const { return mult_; }

    // #entries with value <= x (index one past the last such entry).
    std::size_t upper_index(double x) const;
    // Counting function sum_{n_j<=x} r(n_j); throws CoverageError if x > cutoff.
    std::int64_t counting(double x) const;
    // N(x) = #{n_j <= x}.
    std::int64_t distinct_counting(double x) const;
    CircleLawReport circle_law_report(double x) const;

    // Total lattice points in the table (counting(cutoff)).
    std::int64_t total_count() const { return cum_.empty() ? 0 : cum_.back(); }

  private:
    friend NormTable load_table(const std::string& path);
    NormTable() = default;
    void finalize(const BuildOptions& opt);  // sort, collision-check, prefix sums

    TorusSpec torus_;
    double cutoff_ = 0;
    bool exact_ = true;
    double collision_rel_tol_ = 1e-15;
    std::vector<double> value_;
    std::vector<std::int64_t> key_;                    // exact: scaled integer keys
    std::vector<std::array<std::int32_t, 3>> orbit_;   // irrational: (|m|,|n|,|k|)
    std::vector<std::int64_t> mult_;
    std::vector<double> multf_;
    std::vector<std::int64_t> cum_;  // cumulative multiplicities
};

// Value of one dual-lattice vector's squared norm, computed in extended
// precision from the aspect parameters (k ignored for 2D).
BigFloat orbit_norm(const TorusSpec& torus, std::int64_t m, std::int64_t n, std::int64_t k);

}  // namespace scatter
