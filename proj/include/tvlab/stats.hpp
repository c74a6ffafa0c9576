#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace tvlab {

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double se = 0.0;     ///< sample std / sqrt(n)
    double ci_lo = 0.0;  ///< mean - 1.96 se
    double ci_hi = 0.0;
};

inline SummaryStats summarize(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("summarize: need at least 2 samples");
    SummaryStats s;
    s.n = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    const double var = ss / static_cast<double>(s.n - 1);
    s.se = std::sqrt(var / static_cast<double>(s.n));
    s.ci_lo = s.mean - 1.96 * s.se;
    s.ci_hi = s.mean + 1.96 * s.se;
    return s;
}

/// Survival function of the Kolmogorov distribution, P(K > lambda).
/// Dual-series evaluation: the theta-function form for small lambda, the
/// alternating exponential series otherwise.
inline double kolmogorov_survival(double lambda) {
    if (lambda <= 1e-10) return 1.0;
    if (lambda < 1.18) {
        const double y = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                           (y + std::pow(y, 9.0) + std::pow(y, 25.0) + std::pow(y, 49.0));
        return 1.0 - cdf;
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::max(sum, 0.0);
}

struct KsResult {
    double d = 0.0;        ///< sup |ECDF_a - ECDF_b|
    double p_value = 1.0;  ///< asymptotic, with effective size na*nb/(na+nb)
    double effective_n = 0.0;
};

inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.d = d;
    r.effective_n = na * nb / (na + nb);
    r.p_value = kolmogorov_survival(std::sqrt(r.effective_n) * d);
    return r;
}

}  // namespace tvlab
