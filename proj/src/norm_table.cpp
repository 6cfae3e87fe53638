#include "scatter/norm_table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "scatter/errors.hpp"

namespace scatter {

namespace {

// floor(sqrt(v)) for nonnegative v, safe against double rounding
std::int64_t isqrt_floor(double v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(v));
    while (r > 0 && static_cast<double>(r) * r > v) --r;
    while (static_cast<double>(r + 1) * (r + 1) <= v) ++r;
    return r;
}

void check_cutoff(double cutoff) {
    if (!std::isfinite(cutoff) || cutoff < 0) throw UsageError("cutoff must be finite and nonnegative");
}

std::int64_t orbit_weight(std::int64_t m, std::int64_t n, std::int64_t k) {
    return (m > 0 ? 2 : 1) * (n > 0 ? 2 : 1) * (k > 0 ? 2 : 1);
}

struct IrrEntry {
    BigFloat value;
    std::array<std::int32_t, 3> orbit;
    std::int64_t mult;
};

}  // namespace

BigFloat orbit_norm(const TorusSpec& torus, std::int64_t m, std::int64_t n, std::int64_t k) {
    BigFloat A = torus.a2.value;
    BigFloat mm = static_cast<BigFloat>(m) * m;
    BigFloat nn = static_cast<BigFloat>(n) * n;
    if (torus.dimension == 2) return mm / A + nn * A;
    BigFloat B = torus.b2.value;
    BigFloat kk = static_cast<BigFloat>(k) * k;
    return mm / A + nn / B + kk * A * B;
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

NormTable NormTable::build(const TorusSpec& torus, double cutoff, const BuildOptions& opt) {
    check_cutoff(cutoff);
    if (torus.dimension != 2 && torus.dimension != 3) throw UsageError("dimension must be 2 or 3");
    NormTable t;
    t.torus_ = torus;
    t.cutoff_ = cutoff;
    t.exact_ = torus.exact();
    t.collision_rel_tol_ = opt.collision_rel_tol;

    if (t.exact_) {
        const std::int64_t scale = torus.key_scale();
        // Inclusion: norm <= cutoff  <=>  key <= floor(cutoff * scale).
        BigFloat bound = static_cast<BigFloat>(cutoff) * scale;
        if (bound > static_cast<BigFloat>(1.5e18)) throw UsageError("cutoff too large for exact keys");
        auto key_max = static_cast<std::int64_t>(bound);
        while (static_cast<BigFloat>(key_max) > bound) --key_max;
        while (static_cast<BigFloat>(key_max + 1) <= bound) ++key_max;

        std::unordered_map<std::int64_t, std::int64_t> acc;
        acc.reserve(static_cast<std::size_t>(std::max<double>(16.0, cutoff)));
        if (torus.dimension == 2) {
            const std::int64_t p = torus.a2.num, q = torus.a2.den;
            const std::int64_t cm = q * q, cn = p * p;  // key = cm m^2 + cn n^2
            const std::int64_t mmax = isqrt_floor(static_cast<double>(key_max) / cm);
            for (std::int64_t m = 0; m <= mmax; ++m) {
                const std::int64_t base = cm * m * m;
                const std::int64_t nmax = isqrt_floor(static_cast<double>(key_max - base) / cn);
                for (std::int64_t n = 0; n <= nmax; ++n) acc[base + cn * n * n] += orbit_weight(m, n, 0);
            }
        } else {
            const std::int64_t p1 = torus.a2.num, q1 = torus.a2.den;
            const std::int64_t p2 = torus.b2.num, q2 = torus.b2.den;
            const std::int64_t cm = q1 * q1 * p2 * q2, cn = q2 * q2 * p1 * q1, ck = p1 * p1 * p2 * p2;
            const std::int64_t mmax = isqrt_floor(static_cast<double>(key_max) / cm);
            for (std::int64_t m = 0; m <= mmax; ++m) {
                const std::int64_t bm = cm * m * m;
                const std::int64_t nmax = isqrt_floor(static_cast<double>(key_max - bm) / cn);
                for (std::int64_t n = 0; n <= nmax; ++n) {
                    const std::int64_t bn = bm + cn * n * n;
                    const std::int64_t kmax = isqrt_floor(static_cast<double>(key_max - bn) / ck);
                    for (std::int64_t k = 0; k <= kmax; ++k) acc[bn + ck * k * k] += orbit_weight(m, n, k);
                }
            }
        }
        std::vector<std::pair<std::int64_t, std::int64_t>> entries(acc.begin(), acc.end());
        std::sort(entries.begin(), entries.end());
        t.key_.reserve(entries.size());
        t.value_.reserve(entries.size());
        t.mult_.reserve(entries.size());
        for (const auto& [key, mult] : entries) {
            t.key_.push_back(key);
            t.value_.push_back(to_double(static_cast<BigFloat>(key) / scale));
            t.mult_.push_back(mult);
        }
    } else {
        std::vector<IrrEntry> entries;
        const BigFloat X = cutoff;
        if (torus.dimension == 2) {
            const BigFloat A = torus.a2.value;
            entries.reserve(static_cast<std::size_t>(cutoff * std::numbers::pi / 4 + 64));
            for (std::int64_t m = 0;; ++m) {
                const BigFloat base = (static_cast<BigFloat>(m) * m) / A;
                if (base > X) break;
                for (std::int64_t n = 0;; ++n) {
                    const BigFloat v = base + (static_cast<BigFloat>(n) * n) * A;
                    if (v > X) break;
                    entries.push_back({v,
                                       {static_cast<std::int32_t>(m), static_cast<std::int32_t>(n), 0},
                                       orbit_weight(m, n, 0)});
                }
            }
        } else {
            const BigFloat A = torus.a2.value, B = torus.b2.value, C = A * B;
            for (std::int64_t m = 0;; ++m) {
                const BigFloat bm = (static_cast<BigFloat>(m) * m) / A;
                if (bm > X) break;
                for (std::int64_t n = 0;; ++n) {
                    const BigFloat bn = bm + (static_cast<BigFloat>(n) * n) / B;
                    if (bn > X) break;
                    for (std::int64_t k = 0;; ++k) {
                        const BigFloat v = bn + (static_cast<BigFloat>(k) * k) * C;
                        if (v > X) break;
                        entries.push_back({v,
                                           {static_cast<std::int32_t>(m), static_cast<std::int32_t>(n),
                                            static_cast<std::int32_t>(k)},
                                           orbit_weight(m, n, k)});
                    }
                }
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const IrrEntry& a, const IrrEntry& b) { return a.value < b.value; });
        // Orbits are the atoms here. Two distinct orbits indistinguishable at
        // the grouping tolerance cannot be certified distinct or equal, so
        // stop rather than corrupt r(n).
        for (std::size_t i = 1; i < entries.size(); ++i) {
            const BigFloat gap = entries[i].value - entries[i - 1].value;
            const BigFloat tol = static_cast<BigFloat>(opt.collision_rel_tol) *
                                 std::max<BigFloat>(entries[i].value, 1);
            if (gap <= tol) {
                std::ostringstream os;
                const auto& oa = entries[i - 1].orbit;
                const auto& ob = entries[i].orbit;
                os << "norm collision on declared-irrational lattice: orbits (" << oa[0] << "," << oa[1]
                   << "," << oa[2] << ") and (" << ob[0] << "," << ob[1] << "," << ob[2]
                   << ") agree to within " << opt.collision_rel_tol << " relative near norm "
                   << to_double(entries[i].value) << "; the aspect parameter is not irrational enough "
                   << "to resolve (a^4 may be rational)";
                throw PrecisionError(os.str(), to_double(entries[i - 1].value), to_double(entries[i].value));
            }
        }
        t.value_.reserve(entries.size());
        t.orbit_.reserve(entries.size());
        t.mult_.reserve(entries.size());
        for (const auto& e : entries) {
            t.value_.push_back(to_double(e.value));
            t.orbit_.push_back(e.orbit);
            t.mult_.push_back(e.mult);
        }
    }
    t.finalize(opt);
    return t;
}

void NormTable::finalize(const BuildOptions&) {
    if (value_.empty() || value_.front() != 0.0 || mult_.front() != 1)
        throw Error("internal: table must start with the zero norm");
    for (std::size_t i = 1; i < value_.size(); ++i)
        if (!(value_[i - 1] < value_[i]))
            throw PrecisionError("distinct norms indistinguishable in double precision near " +
                                     std::to_string(value_[i]),
                                 value_[i - 1], value_[i]);
    multf_.resize(mult_.size());
    cum_.resize(mult_.size());
    std::int64_t run = 0;
    for (std::size_t i = 0; i < mult_.size(); ++i) {
        multf_[i] = static_cast<double>(mult_[i]);
        run += mult_[i];
        cum_[i] = run;
    }
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

std::size_t NormTable::upper_index(double x) const {
    return static_cast<std::size_t>(std::upper_bound(value_.begin(), value_.end(), x) - value_.begin());
}

std::int64_t NormTable::counting(double x) const {
    if (x > cutoff_)
        throw CoverageError("counting(" + std::to_string(x) + ") beyond table cutoff " +
                            std::to_string(cutoff_));
    const std::size_t idx = upper_index(x);
    return idx == 0 ? 0 : cum_[idx - 1];
}

std::int64_t NormTable::distinct_counting(double x) const {
    if (x > cutoff_)
        throw CoverageError("distinct_counting(" + std::to_string(x) + ") beyond table cutoff " +
                            std::to_string(cutoff_));
    return static_cast<std::int64_t>(upper_index(x));
}

CircleLawReport NormTable::circle_law_report(double x) const {
    if (torus_.dimension != 2) throw UsageError("circle law report is a 2D diagnostic");
    CircleLawReport r;
    r.x = x;
    r.lattice_count = counting(x);
    r.remainder = static_cast<double>(r.lattice_count) - std::numbers::pi * x;
    r.distinct_count = distinct_counting(x);
    return r;
}

}  // namespace scatter
