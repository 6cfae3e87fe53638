#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scatter/secular.hpp"

namespace scatter {

struct WeakCoupling {
    double phi = 0;  // extension parameter, strictly inside (-pi, pi)
};

enum class WindowPolicy {
    AnchoredRight,  // norms with |n - n_j| < n_j^delta, frozen per interval
    FullTable,      // whole table + tail (used for weak/strong cross-checks)
};

struct StrongCoupling {
    double alpha = 1;   // physical coupling, nonzero
    double delta = 0.5; // window exponent in (131/416, 1)
    WindowPolicy window = WindowPolicy::AnchoredRight;
};

using Coupling = std::variant<WeakCoupling, StrongCoupling>;

struct EigenvalueRecord {
    std::int64_t j = 0;                // interval index; j=0 is the ground state
    double lambda = 0;
    std::optional<double> left_norm;   // n_{j-1}; absent for j=0
    double right_norm = 0;             // n_j
    double d = 0;                      // n_j - lambda, strictly positive
    double residual = 0;               // |secular(lambda) - target|
};

enum class IntervalIssueKind {
    WindowEmpty,     // anchored window contains no norms (ground interval)
    NoRootInWindow,  // windowed sum bounded below above the target
    NoGroundState,   // no sign change down to the search floor
};

struct IntervalIssue {
    std::int64_t j = 0;
    IntervalIssueKind kind = IntervalIssueKind::WindowEmpty;
    std::string detail;
};

struct SolveResult {
    std::vector<EigenvalueRecord> records;  // ascending by j
    std::vector<IntervalIssue> issues;
    double target = 0;
    double c0 = 0;          // weak coupling only; 0 otherwise
};

struct SolveOptions {
    unsigned threads = 0;          // 0 = hardware concurrency
    double ground_floor = -1e12;   // leftward search limit for the ground state
};

// Index of the last norm <= x (intervals j = 1..that index, plus ground j=0).
std::int64_t last_interval_index(const NormTable& table, double x);

// One eigenvalue per interlacing interval j in [j_begin, j_end], j=0 meaning
// the ground state. Bisection to width 1e-10*max(1,|lambda|) plus one Newton
// polish with the analytic derivative. Deterministic for any thread count.
SolveResult solve_weak(const SecularSeries& series, WeakCoupling coupling, std::int64_t j_begin,
                       std::int64_t j_end, const SolveOptions& opt = {});
SolveResult solve_strong(const SecularSeries& series, StrongCoupling coupling, std::int64_t j_begin,
                         std::int64_t j_end, const SolveOptions& opt = {});
SolveResult solve(const SecularSeries& series, const Coupling& coupling, std::int64_t j_begin,
                  std::int64_t j_end, const SolveOptions& opt = {});

// Grid scan oracle: all sign changes of (secular - target) on [lo, hi] with
// the given step, poles excluded, each refined by bisection to interval
// width 1e-10. Uses only the exact evaluator.
std::vector<double> brute_force_roots(const SecularSeries& series, double target, double lo,
                                      double hi, double grid_step);

}  // namespace scatter
