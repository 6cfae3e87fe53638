#include "scatter/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "scatter/errors.hpp"

namespace scatter {

std::vector<double> Histogram::densities() const {
    std::int64_t inside = 0;
    for (auto c : counts) inside += c;
    std::vector<double> d(counts.size(), 0.0);
    if (inside == 0) return d;
    const double w = bin_width();
    for (std::size_t i = 0; i < counts.size(); ++i)
        d[i] = static_cast<double>(counts[i]) / (static_cast<double>(inside) * w);
    return d;
}

double reference_cdf(ReferenceCdf ref, double s) {
    if (s <= 0) return 0;
    switch (ref) {
        case ReferenceCdf::Poisson: return 1.0 - std::exp(-s);
        case ReferenceCdf::SemiPoisson: return 1.0 - (1.0 + 2.0 * s) * std::exp(-2.0 * s);
    }
    return 0;
}

double ks_distance(std::span<const double> sample, ReferenceCdf ref) {
    if (sample.empty()) throw UsageError("KS distance of an empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    const auto n = static_cast<double>(s.size());
    double d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = reference_cdf(ref, s[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw UsageError("KS distance of an empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double d = 0;
    std::size_t i = 0, j = 0;
    // step through the merged value set, consuming ties together
    while (i < sa.size() || j < sb.size()) {
        double v;
        if (i < sa.size() && (j >= sb.size() || sa[i] <= sb[j]))
            v = sa[i];
        else
            v = sb[j];
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(sa.size());
        const double fb = static_cast<double>(j) / static_cast<double>(sb.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

SpacingReport spacing_report(std::span<const double> sorted_values, double x, const SpacingOptions& opt) {
    if (opt.bins < 1 || !(opt.hist_max > 0)) throw UsageError("bad histogram layout");
    SpacingReport r;
    r.x = x;
    std::vector<double> gaps;
    for (std::size_t i = 1; i < sorted_values.size() && sorted_values[i] <= x; ++i) {
        const double g = sorted_values[i] - sorted_values[i - 1];
        if (!(g > 0)) throw UsageError("sequence must be strictly increasing");
        gaps.push_back(g);
    }
    if (gaps.size() < 10)
        throw UsageError("need at least 10 gaps below x = " + std::to_string(x) + ", have " +
                         std::to_string(gaps.size()));
    r.count = static_cast<std::int64_t>(gaps.size());
    double sum = 0;
    for (double g : gaps) sum += g;
    r.mean_spacing = sum / static_cast<double>(gaps.size());
    r.normalized.reserve(gaps.size());
    for (double g : gaps) r.normalized.push_back(g / r.mean_spacing);

    r.histogram.lo = 0;
    r.histogram.hi = opt.hist_max;
    r.histogram.counts.assign(static_cast<std::size_t>(opt.bins), 0);
    const double w = r.histogram.bin_width();
    for (double s : r.normalized) {
        if (s < 0) {
            ++r.histogram.underflow;
        } else if (s >= opt.hist_max) {
            ++r.histogram.overflow;
        } else {
            ++r.histogram.counts[static_cast<std::size_t>(s / w)];
        }
    }
    r.ks_vs_poisson = ks_distance(r.normalized, ReferenceCdf::Poisson);
    r.ks_vs_semipoisson = ks_distance(r.normalized, ReferenceCdf::SemiPoisson);
    return r;
}

GapReport gap_report(const NormTable& norms, std::span<const EigenvalueRecord> eigenvalues, double x) {
    const auto idx = norms.upper_index(x);
    if (idx == 0) throw CoverageError("no norms at or below x");
    const auto count = static_cast<std::int64_t>(idx);  // N(x), includes n_0 = 0

    // eigenvalue for interval j must exist for every n_j <= x
    std::vector<const EigenvalueRecord*> by_j(idx, nullptr);
    for (const auto& r : eigenvalues)
        if (r.j >= 0 && r.j < static_cast<std::int64_t>(idx)) by_j[static_cast<std::size_t>(r.j)] = &r;
    std::ostringstream missing;
    int nmissing = 0;
    for (std::size_t j = 0; j < idx; ++j)
        if (!by_j[j]) {
            if (nmissing < 16) missing << (nmissing ? "," : "") << j;
            ++nmissing;
        }
    if (nmissing)
        throw CoverageError("gap report needs an eigenvalue for every interval with n_j <= x; missing j = {" +
                            missing.str() + (nmissing > 16 ? ",..." : "") + "}");

    GapReport g;
    g.x = x;
    g.count = count;
    double sum_d = 0, sum_delta = 0;
    for (std::size_t j = 0; j < idx; ++j) {
        sum_d += norms.value(j) - by_j[j]->lambda;
        if (j >= 1) sum_delta += norms.value(j) - norms.value(j - 1);
    }
    g.mean_d = sum_d / static_cast<double>(count);
    g.mean_delta = sum_delta / static_cast<double>(count);
    g.ratio = g.mean_d / g.mean_delta;
    g.log_weighted_ratio = g.ratio * std::log(x);
    return g;
}

double compare_spacings(std::span<const double> seq_a, std::span<const double> seq_b, double x) {
    SpacingReport a = spacing_report(seq_a, x);
    SpacingReport b = spacing_report(seq_b, x);
    return ks_distance(a.normalized, b.normalized);
}

std::vector<double> sample_poisson_process(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> pts;
    pts.reserve(n);
    double t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        t += exp1(rng);
        pts.push_back(t);
    }
    return pts;
}

double fitted_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw UsageError("slope needs matched samples of size >= 2");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw UsageError("slope undefined for constant abscissae");
    return sxy / sxx;
}

}  // namespace scatter
