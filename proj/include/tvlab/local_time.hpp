#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvlab/path.hpp"

namespace tvlab {

/// Sawtooth map: distance to the nearest even lattice point 2kc, shifted to
/// take values in [-c/2, c/2]. Periodic with period 2c; -c/2 on the even
/// lattice, +c/2 on the odd one.
inline double sawtooth(double x, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("sawtooth: c must be > 0");
    const double k = std::floor((x + c) / (2.0 * c));
    return std::abs(x - 2.0 * c * k) - 0.5 * c;
}

/// Left derivative of the sawtooth: +1 on (2kc, (2k+1)c], -1 on ((2k-1)c, 2kc].
inline int sawtooth_left_derivative(double x, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("sawtooth_left_derivative: c must be > 0");
    double y = std::fmod(x, 2.0 * c);
    if (y <= 0.0) y += 2.0 * c;  // y in (0, 2c]
    return y <= c ? +1 : -1;
}

enum class LocalTimeEstimator { crossing, occupation };

/// Local times estimated on the lattice {kc}. levels[j] is the nondecreasing
/// process at sample times for level (k_min + j) * c; all-zero levels at the
/// edges are trimmed off.
struct LatticeLocalTimes {
    double c = 0.0;
    double eps = 0.0;
    LocalTimeEstimator estimator = LocalTimeEstimator::occupation;
    int k_min = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> levels;

    int k_of(std::size_t j) const { return k_min + static_cast<int>(j); }
};

namespace detail {

/// Crossing-count local time at one level: 2*eps times the number of
/// completed interpolated upcrossings of the strip [a, a+eps]. The factor
/// matches the excursion rate n+(max >= eps) = 1/(2 eps), so the estimate
/// converges to the semimartingale local time as dt -> 0 at fixed eps.
/// At finite dt it undercounts: strip re-entries shorter than the grid
/// resolution are merged (relative bias on the order of sqrt(dt)/eps).
inline std::vector<double> crossing_process(const SampledPath& path, double a, double eps) {
    const std::size_t n = path.size();
    std::vector<double> out(n, 0.0);
    bool armed = path.values[0] <= a;
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double v = path.values[i];
        if (armed) {
            if (v >= a + eps) {
                acc += 2.0 * eps;
                armed = false;
            }
        } else if (v <= a) {
            armed = true;
        }
        out[i] = acc;
    }
    return out;
}

/// Occupation-time local time at one level: Leb{s <= t : |f(s)-a| <= eps}
/// over 2*eps, computed exactly on the linear interpolation.
inline std::vector<double> occupation_process(const SampledPath& path, double a, double eps) {
    const std::size_t n = path.size();
    std::vector<double> out(n, 0.0);
    const double lo_band = a - eps, hi_band = a + eps;
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double v0 = path.values[i - 1], v1 = path.values[i];
        const double seg = path.times[i] - path.times[i - 1];
        const double lo = std::min(v0, v1), hi = std::max(v0, v1);
        if (hi == lo) {
            if (lo >= lo_band && lo <= hi_band) acc += seg;
        } else {
            const double ov = std::min(hi, hi_band) - std::max(lo, lo_band);
            if (ov > 0.0) acc += ov / (hi - lo) * seg;
        }
        out[i] = acc / (2.0 * eps);
    }
    return out;
}

}  // namespace detail

/// Single-level local time process at sample times.
inline std::vector<double> local_time_process(const SampledPath& path, double level,
                                              double eps, LocalTimeEstimator est) {
    if (!(eps > 0.0)) throw std::invalid_argument("local_time: eps must be > 0");
    return est == LocalTimeEstimator::crossing
               ? detail::crossing_process(path, level, eps)
               : detail::occupation_process(path, level, eps);
}

inline LatticeLocalTimes lattice_local_times(const SampledPath& path, double c,
                                             LocalTimeEstimator est, double eps) {
    if (!(c > 0.0)) throw std::invalid_argument("lattice_local_times: c must be > 0");
    if (!(eps > 0.0) || eps > 0.25 * c)
        throw std::invalid_argument("lattice_local_times: need 0 < eps <= c/4");
    const auto [mn_it, mx_it] = std::minmax_element(path.values.begin(), path.values.end());
    const int k_lo = static_cast<int>(std::floor((*mn_it - eps) / c));
    const int k_hi = static_cast<int>(std::ceil((*mx_it + eps) / c));
    LatticeLocalTimes lt;
    lt.c = c;
    lt.eps = eps;
    lt.estimator = est;
    lt.times = path.times;
    std::vector<std::pair<int, std::vector<double>>> rows;
    for (int k = k_lo; k <= k_hi; ++k) {
        auto proc = local_time_process(path, k * c, eps, est);
        if (proc.back() > 0.0) rows.emplace_back(k, std::move(proc));
    }
    if (rows.empty()) {
        lt.k_min = 0;
        return lt;
    }
    lt.k_min = rows.front().first;
    // keep a contiguous k-range so k_of() stays an offset
    const int k_max = rows.back().first;
    lt.levels.assign(static_cast<std::size_t>(k_max - lt.k_min + 1),
                     std::vector<double>(path.size(), 0.0));
    for (auto& [k, proc] : rows) lt.levels[static_cast<std::size_t>(k - lt.k_min)] = std::move(proc);
    return lt;
}

/// The even/odd lattice sums: x = sum_k L^{2kc} - sum_k L^{(2k+1)c},
/// y = sum_k L^{kc}. Pointwise |x| <= y.
struct XYProcesses {
    std::vector<double> x;
    std::vector<double> y;
};

inline XYProcesses build_xy(const LatticeLocalTimes& lt) {
    XYProcesses xy;
    const std::size_t n = lt.times.size();
    xy.x.assign(n, 0.0);
    xy.y.assign(n, 0.0);
    for (std::size_t j = 0; j < lt.levels.size(); ++j) {
        const bool even = lt.k_of(j) % 2 == 0;
        const auto& proc = lt.levels[j];
        for (std::size_t i = 0; i < n; ++i) {
            xy.y[i] += proc[i];
            xy.x[i] += even ? proc[i] : -proc[i];
        }
    }
    return xy;
}

/// Left-point Riemann-Ito sum: cumulative sum of integrand(t_i) * df over
/// segments. integrand is sampled at the same grid (the last entry is not
/// used).
inline std::vector<double> discretized_ito_integral(const SampledPath& path,
                                                    std::span<const double> integrand) {
    if (integrand.size() != path.size())
        throw std::invalid_argument("ito_integral: integrand/path grid mismatch");
    std::vector<double> out(path.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        acc += integrand[i - 1] * (path.values[i] - path.values[i - 1]);
        out[i] = acc;
    }
    return out;
}

/// Sup-norm residual of the Ito-Tanaka identity for the sawtooth map:
/// F_c(f_t) - F_c(f_0) = int d-F_c(f) df + X_t, with X estimated from
/// lattice local times. The F_c(f_0) term makes the identity hold at t = 0.
inline double tanaka_residual(const SampledPath& path, double c, double eps,
                              LocalTimeEstimator est = LocalTimeEstimator::occupation) {
    const std::size_t n = path.size();
    std::vector<double> deriv(n);
    for (std::size_t i = 0; i < n; ++i)
        deriv[i] = static_cast<double>(sawtooth_left_derivative(path.values[i], c));
    const std::vector<double> ito = discretized_ito_integral(path, deriv);
    const XYProcesses xy = build_xy(lattice_local_times(path, c, est, eps));
    const double f0 = sawtooth(path.values[0], c);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lhs = sawtooth(path.values[i], c) - f0;
        r = std::max(r, std::abs(lhs - ito[i] - xy.x[i]));
    }
    return r;
}

}  // namespace tvlab
