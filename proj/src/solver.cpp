#include "scatter/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "scatter/errors.hpp"

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHuxley = 131.0 / 416.0;

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned c = 0; c < threads; ++c)
        pool.emplace_back([&, c]() {
            for (std::size_t i = c; i < n; i += threads) fn(i);
        });
    for (auto& t : pool) t.join();
}

// Local derivative for the Newton polish: exact over a window around lambda
// plus the density integral of 1/(t-lambda)^2 over the rest. The far part is
// negligible next to the bracketing poles; a slightly approximate derivative
// only dampens the polish step.
double local_derivative(const SecularSeries& s, double lambda) {
    const double W = 10.0;
    const auto [lo, hi] = s.window_around(lambda, W);
    double d = s.windowed_derivative(lambda, lo, hi);
    const double dim = s.table().torus().dimension;
    const double dens = dim == 2 ? kPi : s.density_coefficient() * std::sqrt(std::max(lambda, 1.0));
    d += 2.0 * dens / W;
    return d;
}

struct RootSpec {
    std::function<double(double)> f;           // monotone increasing on the bracket
    std::function<double(double)> fprime;
    double target = 0;
};

// Bisection to width 1e-10 * max(1, scale), then one Newton polish step.
// Both bracket values must already straddle the target.
double bisect_polish(const RootSpec& r, double lo, double hi, double scale, double* residual) {
    const double tol = 1e-10 * std::max(1.0, std::fabs(scale));
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating resolution
        if (r.f(mid) < r.target)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    const double fp = r.fprime(x);
    if (std::isfinite(fp) && fp > 0) {
        const double step = (r.f(x) - r.target) / fp;
        const double cand = x - step;
        if (cand > lo && cand < hi) x = cand;
    }
    if (residual) *residual = std::fabs(r.f(x) - r.target);
    return x;
}

// Move from the interval interior toward the pole at `pole_end` until f is on
// the required side of the target. sign=-1: need f < target (left pole),
// sign=+1: need f > target (right pole).
double approach_pole(const RootSpec& r, double interior, double pole_end, int sign) {
    double x = interior;
    for (int i = 0; i < 200; ++i) {
        const double v = r.f(x);
        if ((sign < 0 && v < r.target) || (sign > 0 && v > r.target)) return x;
        const double next = pole_end + (x - pole_end) * 0.25;
        if (next == x || next == pole_end)
            throw Error("bracket failure approaching pole at " + std::to_string(pole_end) +
                        " (table/tolerance bug)");
        x = next;
    }
    throw Error("bracket failure near pole at " + std::to_string(pole_end));
}

EigenvalueRecord make_record(std::int64_t j, double lambda, std::optional<double> left, double right,
                             double residual) {
    if ((left && !(lambda > *left && lambda < right)) || (!left && !(lambda < right)))
        throw Error("solver produced a root outside its interval (tolerance bug)");
    EigenvalueRecord rec;
    rec.j = j;
    rec.lambda = lambda;
    rec.left_norm = left;
    rec.right_norm = right;
    rec.d = right - lambda;
    rec.residual = residual;
    return rec;
}

// Ground state: f increases from -inf (lambda -> -inf) to +inf (lambda -> n0
// from below). Doubling bracket expansion (-1, -2, -4, ...) per the floor.
std::optional<EigenvalueRecord> solve_ground(const RootSpec& r, double floor_limit,
                                             std::vector<IntervalIssue>& issues) {
    double hi = -1.0 / (1 << 20);
    for (int i = 0; i < 300 && r.f(hi) <= r.target; ++i) hi *= 0.25;
    double lo = -1;
    while (r.f(lo) >= r.target) {
        lo *= 2;
        if (lo < floor_limit) {
            issues.push_back({0, IntervalIssueKind::NoGroundState,
                              "no sign change above the search floor " + std::to_string(floor_limit)});
            return std::nullopt;
        }
    }
    if (hi <= lo) hi = lo * 0.5;
    double residual = 0;
    const double lambda = bisect_polish(r, lo, hi, lo, &residual);
    return make_record(0, lambda, std::nullopt, 0.0, residual);
}

struct SlotResult {
    std::optional<EigenvalueRecord> record;
    std::optional<IntervalIssue> issue;
};

void require_range(const NormTable& t, std::int64_t j_begin, std::int64_t j_end) {
    if (j_begin < 0 || j_end < j_begin || j_end >= static_cast<std::int64_t>(t.size()))
        throw UsageError("interval range [" + std::to_string(j_begin) + ", " + std::to_string(j_end) +
                         "] outside the table (" + std::to_string(t.size()) + " norms)");
    const double top = t.value(static_cast<std::size_t>(j_end));
    const double need = std::max(2 * top, 1e3);
    if (t.cutoff() < need)
        throw CutoffError("table cutoff " + std::to_string(t.cutoff()) +
                              " insufficient to solve up to n_j = " + std::to_string(top) +
                              " (need >= " + std::to_string(need) + ")",
                          need);
}

}  // namespace

std::int64_t last_interval_index(const NormTable& table, double x) {
    const auto idx = table.upper_index(x);
    if (idx == 0) throw CoverageError("no norms at or below " + std::to_string(x));
    return static_cast<std::int64_t>(idx) - 1;
}

SolveResult solve_weak(const SecularSeries& series, WeakCoupling coupling, std::int64_t j_begin,
                       std::int64_t j_end, const SolveOptions& opt) {
    if (!(coupling.phi > -kPi && coupling.phi < kPi))
        throw UsageError("phi must lie strictly inside (-pi, pi); phi = pi is the unperturbed Laplacian");
    const NormTable& t = series.table();
    require_range(t, j_begin, j_end);

    SolveResult out;
    const C0Result c0 = series.c0();
    out.c0 = c0.value;
    out.target = c0.value * std::tan(coupling.phi / 2);

    const bool fast = series.fast_eval_available();
    RootSpec base;
    base.target = out.target;
    base.f = [&series, fast](double x) { return fast ? series.value_fast(x) : series.value_exact(x); };
    base.fprime = [&series](double x) { return local_derivative(series, x); };

    const auto n_slots = static_cast<std::size_t>(j_end - j_begin + 1);
    std::vector<SlotResult> slots(n_slots);
    parallel_for(n_slots, opt.threads, [&](std::size_t s) {
        const std::int64_t j = j_begin + static_cast<std::int64_t>(s);
        if (j == 0) {
            std::vector<IntervalIssue> local;
            auto rec = solve_ground(base, opt.ground_floor, local);
            if (rec) slots[s].record = *rec;
            if (!local.empty()) slots[s].issue = local.front();
            return;
        }
        const double left = t.value(static_cast<std::size_t>(j - 1));
        const double right = t.value(static_cast<std::size_t>(j));
        const double width = right - left;
        const double lo = approach_pole(base, left + width * 0.25, left, -1);
        const double hi = approach_pole(base, right - width * 0.25, right, +1);
        double residual = 0;
        const double lambda = bisect_polish(base, lo, hi, right, &residual);
        slots[s].record = make_record(j, lambda, left, right, residual);
    });
    for (auto& s : slots) {
        if (s.record) out.records.push_back(*s.record);
        if (s.issue) out.issues.push_back(*s.issue);
    }
    return out;
}

SolveResult solve_strong(const SecularSeries& series, StrongCoupling coupling, std::int64_t j_begin,
                         std::int64_t j_end, const SolveOptions& opt) {
    if (coupling.alpha == 0) throw UsageError("alpha must be nonzero");
    if (!(coupling.delta > kHuxley && coupling.delta < 1))
        throw UsageError("delta must lie in (131/416, 1)");
    const NormTable& t = series.table();
    require_range(t, j_begin, j_end);

    SolveResult out;
    out.target = 1.0 / coupling.alpha;

    const bool fast = series.fast_eval_available();
    const bool full = coupling.window == WindowPolicy::FullTable;

    const auto n_slots = static_cast<std::size_t>(j_end - j_begin + 1);
    std::vector<SlotResult> slots(n_slots);
    parallel_for(n_slots, opt.threads, [&](std::size_t s) {
        const std::int64_t j = j_begin + static_cast<std::int64_t>(s);
        if (j == 0) {
            if (!full) {
                // anchored window |n - n_0| < n_0^delta has radius 0
                slots[s].issue = IntervalIssue{0, IntervalIssueKind::WindowEmpty,
                                               "anchored window at n_0 = 0 has radius 0^delta = 0"};
                return;
            }
            RootSpec r;
            r.target = out.target;
            r.f = [&series, fast](double x) { return fast ? series.value_fast(x) : series.value_exact(x); };
            r.fprime = [&series](double x) { return local_derivative(series, x); };
            std::vector<IntervalIssue> local;
            auto rec = solve_ground(r, opt.ground_floor, local);
            if (rec) slots[s].record = *rec;
            if (!local.empty()) slots[s].issue = local.front();
            return;
        }
        const double left = t.value(static_cast<std::size_t>(j - 1));
        const double right = t.value(static_cast<std::size_t>(j));
        const double width = right - left;

        RootSpec r;
        r.target = out.target;
        std::size_t wlo = 0, whi = t.size();
        if (full) {
            r.f = [&series, fast](double x) { return fast ? series.value_fast(x) : series.value_exact(x); };
            r.fprime = [&series](double x) { return local_derivative(series, x); };
        } else {
            const double radius = std::pow(right, coupling.delta);
            std::tie(wlo, whi) = series.window_around(right, radius);
            if (wlo >= whi) {
                slots[s].issue =
                    IntervalIssue{j, IntervalIssueKind::WindowEmpty,
                                  "window around n_j = " + std::to_string(right) + " holds no norms"};
                return;
            }
            r.f = [&series, wlo, whi](double x) { return series.windowed_value(x, wlo, whi); };
            r.fprime = [&series, wlo, whi](double x) { return series.windowed_derivative(x, wlo, whi); };
        }

        const bool left_pole_in = full || wlo <= static_cast<std::size_t>(j - 1);
        double lo;
        if (left_pole_in) {
            lo = approach_pole(r, left + width * 0.25, left, -1);
        } else {
            // windowed sum is finite at the left endpoint; no root when the
            // whole branch starts above the target
            lo = left;
            if (r.f(lo) >= r.target) {
                slots[s].issue = IntervalIssue{
                    j, IntervalIssueKind::NoRootInWindow,
                    "windowed value at the left endpoint already exceeds 1/alpha (low interval)"};
                return;
            }
        }
        const double hi = approach_pole(r, right - width * 0.25, right, +1);
        double residual = 0;
        const double lambda = bisect_polish(r, lo, hi, right, &residual);
        slots[s].record = make_record(j, lambda, left, right, residual);
    });
    for (auto& s : slots) {
        if (s.record) out.records.push_back(*s.record);
        if (s.issue) out.issues.push_back(*s.issue);
    }
    return out;
}

SolveResult solve(const SecularSeries& series, const Coupling& coupling, std::int64_t j_begin,
                  std::int64_t j_end, const SolveOptions& opt) {
    if (std::holds_alternative<WeakCoupling>(coupling))
        return solve_weak(series, std::get<WeakCoupling>(coupling), j_begin, j_end, opt);
    return solve_strong(series, std::get<StrongCoupling>(coupling), j_begin, j_end, opt);
}

std::vector<double> brute_force_roots(const SecularSeries& series, double target, double lo, double hi,
                                      double grid_step) {
    if (!(grid_step > 0) || !(hi > lo)) throw UsageError("bad grid for brute_force_roots");
    if (hi > series.table().cutoff())
        throw CoverageError("grid interval exceeds the table cutoff");
    std::vector<double> roots;
    const auto n_steps = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
    double g0 = lo;
    double f0 = series.value_exact(g0) - target;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double g1 = std::min(lo + static_cast<double>(i) * grid_step, hi);
        const double f1 = series.value_exact(g1) - target;
        // a sign change across a pole is not a root
        const auto [plo, phi_] = series.window_around(0.5 * (g0 + g1), 0.5 * (g1 - g0) + 1e-300);
        const bool pole_inside = plo < phi_;
        if (!pole_inside && std::signbit(f0) != std::signbit(f1) && std::isfinite(f0) && std::isfinite(f1)) {
            double a = g0, b = g1;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                const double fm = series.value_exact(mid) - target;
                if (std::signbit(fm) == std::signbit(f0))
                    a = mid;
                else
                    b = mid;
            }
            roots.push_back(0.5 * (a + b));
        }
        g0 = g1;
        f0 = f1;
        if (g1 >= hi) break;
    }
    return roots;
}

}  // namespace scatter
