#include "scatter/secular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "scatter/errors.hpp"

namespace scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHuxley = 131.0 / 416.0;

// 64-point Gauss-Legendre on (0,1); nodes via Newton on P_n.
struct GaussLegendre {
    std::array<double, 64> x{}, w{};
    GaussLegendre() {
        const int N = 64;
        for (int i = 0; i < N; ++i) {
            double t = std::cos(kPi * (i + 0.75) / (N + 0.5));
            double p0 = 0, dp = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1;
                double p1 = 0;
                for (int j = 0; j < N; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
                }
                dp = N * (t * p0 - p1) / (t * t - 1);
                double dt = p0 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-16) break;
            }
            x[static_cast<std::size_t>(i)] = 0.5 * (t + 1);
            w[static_cast<std::size_t>(i)] = 0.5 / ((1 - t * t) * dp * dp) * 2;
        }
    }
};

const GaussLegendre& gl64() {
    static const GaussLegendre g;
    return g;
}

// integral over (X, inf) of g(t) dt via t = X / u^2 (works when the
// integrand decays at least like t^{-3/2})
template <typename F>
double integrate_beyond(double X, F&& g) {
    const auto& q = gl64();
    double s = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double u = q.x[i];
        const double t = X / (u * u);
        s += q.w[i] * g(t) * 2.0 * X / (u * u * u);
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// block-moment tree: dyadic blocks over [0, cutoff], each holding centered
// power sums M_p = sum r (n - c)^p, p <= kMomentOrder. Far blocks contribute
// through the expansion 1/(n-lambda) = sum (-1)^p (n-c)^p / (c-lambda)^{p+1},
// truncated with a computable error bound.
// ---------------------------------------------------------------------------

struct SecularSeries::MomentTree {
    static constexpr int kMomentOrder = 8;
    static constexpr double kRatio = 4.0;  // use a block only when |c-lambda| >= ratio * halfwidth

    struct Node {
        std::size_t lo = 0, hi = 0;  // entry index range
        std::array<double, kMomentOrder + 1> M{};
    };

    double x_max = 0;
    int depth = 0;                         // leaves = 2^depth blocks
    std::vector<std::vector<Node>> level;  // level[0] = leaves ... level[depth] = root

    void build(std::span<const double> values, std::span<const double> mults, double cutoff) {
        x_max = std::max(cutoff, 1.0);
        const double target_leaves = std::clamp(static_cast<double>(values.size()) / 8.0, 64.0, 2097152.0);
        depth = static_cast<int>(std::ceil(std::log2(target_leaves)));
        const std::size_t nleaves = std::size_t{1} << depth;
        const double h = x_max / static_cast<double>(nleaves);

        level.assign(static_cast<std::size_t>(depth) + 1, {});
        auto& leaves = level[0];
        leaves.resize(nleaves);
        std::size_t idx = 0;
        for (std::size_t b = 0; b < nleaves; ++b) {
            const double right = (b + 1 == nleaves) ? std::numeric_limits<double>::infinity()
                                                    : h * static_cast<double>(b + 1);
            leaves[b].lo = idx;
            const double c = h * (static_cast<double>(b) + 0.5);
            auto& M = leaves[b].M;
            while (idx < values.size() && values[idx] < right) {
                const double d = values[idx] - c;
                double pw = mults[idx];
                for (int p = 0; p <= kMomentOrder; ++p) {
                    M[static_cast<std::size_t>(p)] += pw;
                    pw *= d;
                }
                ++idx;
            }
            leaves[b].hi = idx;
        }
        // combine upward; shifting a centered moment by s uses the binomial
        // recombination M'_p = sum_q C(p,q) s^{p-q} M_q
        static const auto binom = [] {
            std::array<std::array<double, kMomentOrder + 1>, kMomentOrder + 1> c{};
            for (int p = 0; p <= kMomentOrder; ++p) {
                c[static_cast<std::size_t>(p)][0] = 1;
                for (int q = 1; q <= p; ++q)
                    c[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
                        c[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(q - 1)] +
                        (q <= p - 1 ? c[static_cast<std::size_t>(p - 1)][static_cast<std::size_t>(q)] : 0);
            }
            return c;
        }();
        for (int l = 1; l <= depth; ++l) {
            const std::size_t nb = std::size_t{1} << (depth - l);
            const double w = x_max / static_cast<double>(nb);
            auto& cur = level[static_cast<std::size_t>(l)];
            const auto& prev = level[static_cast<std::size_t>(l - 1)];
            cur.resize(nb);
            for (std::size_t b = 0; b < nb; ++b) {
                Node& nd = cur[b];
                nd.lo = prev[2 * b].lo;
                nd.hi = prev[2 * b + 1].hi;
                const double c = w * (static_cast<double>(b) + 0.5);
                for (int child = 0; child < 2; ++child) {
                    const Node& ch = prev[2 * b + child];
                    if (ch.lo == ch.hi) continue;
                    const double cc = (w / 2) * (static_cast<double>(2 * b + child) + 0.5);
                    const double s = cc - c;
                    double spow[kMomentOrder + 1];
                    spow[0] = 1;
                    for (int p = 1; p <= kMomentOrder; ++p) spow[p] = spow[p - 1] * s;
                    for (int p = kMomentOrder; p >= 0; --p) {
                        double acc = 0;
                        for (int q = 0; q <= p; ++q)
                            acc += binom[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] *
                                   spow[p - q] * ch.M[static_cast<std::size_t>(q)];
                        nd.M[static_cast<std::size_t>(p)] += acc;
                    }
                }
            }
        }
    }

    // sum of r/(n - lambda) over all entries, with accumulated bound on the
    // truncation error of far-block expansions
    double pole_sum(std::span<const double> values, std::span<const double> mults, double lambda,
                    double* abs_err) const {
        double total = 0, err = 0;
        // iterative descent, root first
        std::vector<std::pair<int, std::size_t>> stack;
        stack.emplace_back(depth, 0);
        while (!stack.empty()) {
            auto [l, b] = stack.back();
            stack.pop_back();
            const auto& nd = level[static_cast<std::size_t>(l)][b];
            if (nd.lo == nd.hi) continue;
            const double w = x_max / static_cast<double>(std::size_t{1} << (depth - l));
            const double c = w * (static_cast<double>(b) + 0.5);
            const double D = c - lambda;
            const bool last_block = (l == 0) && (b + 1 == level[0].size());
            // the rightmost leaf is open-ended (holds everything past its edge)
            if (!last_block && std::fabs(D) >= kRatio * (w / 2)) {
                // Horner in u = 1/(c-lambda) with alternating signs:
                // sum_p (-1)^p M_p u^{p+1}
                const double u = 1.0 / D;
                double acc = 0;
                for (int p = kMomentOrder; p >= 0; --p) {
                    const double m = (p % 2 == 0) ? nd.M[static_cast<std::size_t>(p)]
                                                  : -nd.M[static_cast<std::size_t>(p)];
                    acc = m + acc * u;
                }
                total += acc * u;
                // first omitted term has p = kMomentOrder + 1
                const double q = (w / 2) * std::fabs(u);
                double qp = 1;
                for (int p = 0; p <= kMomentOrder; ++p) qp *= q;
                err += nd.M[0] * qp / (std::fabs(D) * (1 - q));
                continue;
            }
            if (l == 0) {
                for (std::size_t i = nd.lo; i < nd.hi; ++i) total += mults[i] / (values[i] - lambda);
                continue;
            }
            stack.emplace_back(l - 1, 2 * b);
            stack.emplace_back(l - 1, 2 * b + 1);
        }
        if (abs_err) *abs_err = err;
        return total;
    }
};

// ---------------------------------------------------------------------------
// SecularSeries
// ---------------------------------------------------------------------------

SecularSeries::SecularSeries(const NormTable& table) : table_(&table) {
    const auto vals = table.values();
    const auto mults = table.mults_f();
    double c = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) c += mults[i] * vals[i] / (vals[i] * vals[i] + 1.0);
    const_part_ = c;

    const double X = table.cutoff();
    if (table.torus().dimension == 2) {
        density_ = kPi;
    } else {
        // counting(x) ~ (2c/3) x^{3/2}; calibrate c against the table
        density_ = X >= 1 ? 3.0 * static_cast<double>(table.total_count()) / (2.0 * std::pow(X, 1.5))
                          : 2 * kPi;
    }

    // empirical remainder constant for tail error bounds
    const double gamma = table.torus().dimension == 2 ? kHuxley : 2.0 / 3.0;
    remainder_scale_ = 1.0;
    if (X >= 4) {
        for (int i = 0; i < 24; ++i) {
            const double x = std::exp(std::log(std::max(2.0, X / 256.0)) +
                                      (std::log(X) - std::log(std::max(2.0, X / 256.0))) * i / 23.0);
            const double lead = table.torus().dimension == 2
                                    ? kPi * x
                                    : 2.0 * density_ / 3.0 * std::pow(x, 1.5);
            const double dev = std::fabs(static_cast<double>(table.counting(x)) - lead) / std::pow(x, gamma);
            remainder_scale_ = std::max(remainder_scale_, dev);
        }
    }

    if (vals.size() >= 4096) {
        tree_ = std::make_unique<MomentTree>();
        tree_->build(vals, mults, X);
    }
}

SecularSeries::~SecularSeries() = default;
SecularSeries::SecularSeries(SecularSeries&&) noexcept = default;
SecularSeries& SecularSeries::operator=(SecularSeries&&) noexcept = default;

bool SecularSeries::fast_eval_available() const { return tree_ != nullptr; }

std::size_t SecularSeries::nearest_index(double lambda) const {
    const auto vals = table_->values();
    std::size_t i = table_->upper_index(lambda);
    if (i == 0) return 0;
    if (i >= vals.size()) return vals.size() - 1;
    return (lambda - vals[i - 1] <= vals[i] - lambda) ? i - 1 : i;
}

void SecularSeries::require_off_pole(double lambda) const {
    if (table_->size() == 0) return;
    const double n = table_->value(nearest_index(lambda));
    if (std::fabs(lambda - n) <= 1e-13 * std::max({1.0, std::fabs(lambda), std::fabs(n)}))
        throw UsageError("lambda = " + std::to_string(lambda) + " is at (or numerically at) the pole n = " +
                         std::to_string(n));
}

void SecularSeries::require_cutoff(double lambda) const {
    const double X = table_->cutoff();
    const double need = std::max(lambda > 0 ? 2 * lambda : 0.0, 1e3);
    if (X < need)
        throw CutoffError("table cutoff " + std::to_string(X) + " insufficient for lambda = " +
                              std::to_string(lambda) + " (need >= " + std::to_string(need) + ")",
                          need);
}

double SecularSeries::tail(double lambda) const {
    const double X = table_->cutoff();
    if (table_->torus().dimension == 2) return kPi * std::log(std::sqrt(X * X + 1.0) / (X - lambda));
    const double c = density_;
    return integrate_beyond(X, [lambda, c](double t) {
        return c * std::sqrt(t) * (1.0 + t * lambda) / ((t - lambda) * (t * t + 1.0));
    });
}

double SecularSeries::tail_derivative(double lambda) const {
    const double X = table_->cutoff();
    if (table_->torus().dimension == 2) return kPi / (X - lambda);
    const double c = density_;
    return integrate_beyond(X, [lambda, c](double t) {
        const double d = t - lambda;
        return c * std::sqrt(t) / (d * d);
    });
}

double SecularSeries::tail_error_bound(double lambda) const {
    const double X = table_->cutoff();
    if (lambda >= X) return std::numeric_limits<double>::infinity();
    const double gamma = table_->torus().dimension == 2 ? kHuxley : 2.0 / 3.0;
    const double fX = std::fabs((1.0 + X * lambda) / ((X - lambda) * (X * X + 1.0)));
    const double F = lambda > 0 ? 1.0 / (1.0 - lambda / X) : 1.0;
    const double integral = F * F * std::pow(X, gamma - 1.0) / (1.0 - gamma) +
                            2.0 * std::pow(X, gamma - 2.0) / (2.0 - gamma);
    return remainder_scale_ * (std::pow(X, gamma) * fX + integral);
}

double SecularSeries::value_exact(double lambda) const {
    const auto vals = table_->values();
    const auto mults = table_->mults_f();
    double s = 0;
    const std::size_t n = vals.size();
    const double* vp = vals.data();
    const double* mp = mults.data();
    for (std::size_t i = 0; i < n; ++i) s += mp[i] / (vp[i] - lambda);
    return s - const_part_ + tail(lambda);
}

double SecularSeries::value_fast(double lambda, double* abs_err) const {
    if (!tree_) {
        if (abs_err) *abs_err = 0;
        return value_exact(lambda);
    }
    double err = 0;
    const double s = tree_->pole_sum(table_->values(), table_->mults_f(), lambda, &err);
    if (abs_err) *abs_err = err;
    return s - const_part_ + tail(lambda);
}

double SecularSeries::derivative(double lambda) const {
    const auto vals = table_->values();
    const auto mults = table_->mults_f();
    double s = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double d = vals[i] - lambda;
        s += mults[i] / (d * d);
    }
    return s + tail_derivative(lambda);
}

SecularValue SecularSeries::eval(double lambda) const {
    require_cutoff(lambda);
    require_off_pole(lambda);
    SecularValue out;
    out.lambda = lambda;
    out.value = value_exact(lambda);
    out.tail_error_bound = tail_error_bound(lambda);
    return out;
}

C0Result SecularSeries::c0() const {
    const auto vals = table_->values();
    const auto mults = table_->mults_f();
    C0Result r;
    for (std::size_t i = 0; i < vals.size(); ++i) r.partial += mults[i] / (vals[i] * vals[i] + 1.0);
    const double X = table_->cutoff();
    if (table_->torus().dimension == 2) {
        r.tail = kPi * (kPi / 2 - std::atan(X));
    } else {
        const double c = density_;
        r.tail = integrate_beyond(X, [c](double t) { return c * std::sqrt(t) / (t * t + 1.0); });
    }
    const double gamma = table_->torus().dimension == 2 ? kHuxley : 2.0 / 3.0;
    if (X >= 1)
        r.tail_error_bound = remainder_scale_ * (std::pow(X, gamma) / (X * X + 1.0) +
                                                 2.0 * std::pow(X, gamma - 2.0) / (2.0 - gamma));
    else
        r.tail_error_bound = std::numeric_limits<double>::infinity();
    r.value = r.partial + r.tail;
    return r;
}

std::pair<std::size_t, std::size_t> SecularSeries::window_around(double anchor, double radius) const {
    const auto vals = table_->values();
    // strict inequality |n - anchor| < radius on both sides
    const auto lo = std::upper_bound(vals.begin(), vals.end(), anchor - radius);
    const auto hi = std::lower_bound(lo, vals.end(), anchor + radius);
    return {static_cast<std::size_t>(lo - vals.begin()), static_cast<std::size_t>(hi - vals.begin())};
}

double SecularSeries::windowed_value(double lambda, std::size_t lo, std::size_t hi) const {
    const auto vals = table_->values();
    const auto mults = table_->mults_f();
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i)
        s += mults[i] * (1.0 / (vals[i] - lambda) - vals[i] / (vals[i] * vals[i] + 1.0));
    return s;
}

double SecularSeries::windowed_derivative(double lambda, std::size_t lo, std::size_t hi) const {
    const auto vals = table_->values();
    const auto mults = table_->mults_f();
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double d = vals[i] - lambda;
        s += mults[i] / (d * d);
    }
    return s;
}

double SecularSeries::truncation_discrepancy(double lambda, double delta) const {
    if (table_->torus().dimension != 2)
        throw UsageError("truncation discrepancy is defined for 2D tori only");
    if (lambda < 10) throw UsageError("truncation check needs lambda >= 10");
    if (!(delta > kHuxley && delta < 1))
        throw UsageError("window exponent must lie in (131/416, 1)");
    const double w = std::pow(lambda, delta);
    const double need = std::max(2 * lambda, lambda + 10 * w);
    if (table_->cutoff() < need)
        throw CutoffError("table cutoff insufficient for the truncation check (need >= " +
                              std::to_string(need) + ")",
                          need);
    const auto [lo, hi] = window_around(lambda, w);
    return value_exact(lambda) - windowed_value(lambda, lo, hi) + kPi * std::log(lambda);
}

}  // namespace scatter
