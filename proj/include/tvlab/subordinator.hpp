#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tvlab {

/// Laplace exponent of the inverse of the lattice local-time clock:
/// sqrt(2q) * tanh(c * sqrt(q/2)). Zero at q = 0; saturates to sqrt(2q)
/// for large c*sqrt(q).
inline double levy_exponent(double c, double q) {
    if (!(c > 0.0)) throw std::invalid_argument("levy_exponent: c must be > 0");
    if (q < 0.0) throw std::invalid_argument("levy_exponent: q must be >= 0");
    if (q == 0.0) return 0.0;
    return std::sqrt(2.0 * q) * std::tanh(c * std::sqrt(0.5 * q));
}

/// Scale function W^(q)(x) = sqrt(2/q) sinh(sqrt(2q) x); analytic limit 2x
/// at q = 0.
inline double scale_w(double q, double x) {
    if (q < 0.0 || x < 0.0) throw std::invalid_argument("scale_w: need q >= 0, x >= 0");
    if (q == 0.0) return 2.0 * x;
    return std::sqrt(2.0 / q) * std::sinh(std::sqrt(2.0 * q) * x);
}

/// Scale function Z^(q)(x) = cosh(sqrt(2q) x); 1 at q = 0.
inline double scale_z(double q, double x) {
    if (q < 0.0 || x < 0.0) throw std::invalid_argument("scale_z: need q >= 0, x >= 0");
    if (q == 0.0) return 1.0;
    return std::cosh(std::sqrt(2.0 * q) * x);
}

/// The two excursion integrals behind the exponent:
///   I1 = 1/c - sqrt(2q)/sinh(sqrt(2q) c)   (excursions reaching the band edge)
///   I2 = sqrt(2q) coth(sqrt(2q) c) - 1/c   (excursions ending inside)
/// Their sum equals levy_exponent(c, q) via (cosh u - 1)/sinh u = tanh(u/2).
/// q = 0 returns (0, 0) by continuity. Small u switches to series to avoid
/// cancellation in the 1/c terms.
inline std::pair<double, double> excursion_terms(double c, double q) {
    if (!(c > 0.0)) throw std::invalid_argument("excursion_terms: c must be > 0");
    if (q < 0.0) throw std::invalid_argument("excursion_terms: q must be >= 0");
    if (q == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(2.0 * q);
    const double u = s * c;
    if (u < 1e-3) {
        const double u2 = u * u;
        const double i1 = (u2 / 6.0 - 7.0 * u2 * u2 / 360.0) / c;
        const double i2 = (u2 / 3.0 - u2 * u2 / 45.0) / c;
        return {i1, i2};
    }
    const double i1 = 1.0 / c - s / std::sinh(u);
    const double i2 = s / std::tanh(u) - 1.0 / c;
    return {i1, i2};
}

/// Sample of the generalized inverse: first time the linearly interpolated
/// nondecreasing process reaches `level`; censored if it never does within
/// the recorded horizon.
struct InverseSample {
    double level = 0.0;
    double time = 0.0;
    bool censored = false;
    double horizon = 0.0;
};

inline InverseSample inverse_process(std::span<const double> times,
                                     std::span<const double> running, double level) {
    if (times.size() != running.size() || times.empty())
        throw std::invalid_argument("inverse_process: bad grids");
    if (running.front() != 0.0)
        throw std::invalid_argument("inverse_process: running process must start at 0");
    if (level < 0.0) throw std::invalid_argument("inverse_process: level must be >= 0");
    InverseSample s;
    s.level = level;
    s.horizon = times.back();
    if (level == 0.0) {
        s.time = times.front();
        return s;
    }
    double prev = 0.0;
    for (std::size_t i = 1; i < running.size(); ++i) {
        if (running[i] < prev)
            throw std::invalid_argument("inverse_process: running process decreases");
        if (running[i] >= level) {
            const double w = (level - prev) / (running[i] - prev);
            s.time = times[i - 1] + w * (times[i] - times[i - 1]);
            return s;
        }
        prev = running[i];
    }
    s.censored = true;
    s.time = times.back();
    return s;
}

/// Phi^c(q/c) for each c; converges to q as c -> 0 (unit-drift limit).
inline std::vector<double> small_c_drift_values(double q, std::span<const double> cs) {
    std::vector<double> out;
    out.reserve(cs.size());
    for (const double c : cs) out.push_back(levy_exponent(c, q / c));
    return out;
}

}  // namespace tvlab
