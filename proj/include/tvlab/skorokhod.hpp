#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tvlab/path.hpp"

namespace tvlab {

enum class Trigger { up, down, none };

/// Starting level of the lazy minimizer, fixed by whichever of the first
/// drawup / drawdown times comes first. trigger == none means the whole
/// path fits inside one tube (max - min < c) and x = f(a).
struct Anchor {
    double x;
    Trigger trigger;
    double trigger_time;  ///< quiet NaN when trigger == none
};

/// Solution of the two-sided Skorokhod problem on a band of width c:
/// g = anchor.x + up - down stays within c/2 of f, pushes are minimal and
/// act only at the band edges. residual = f - g.
struct TubeSolution {
    Anchor anchor;
    std::vector<double> g;
    std::vector<double> up;        ///< cumulative upward push, nondecreasing
    std::vector<double> down;      ///< cumulative downward push, nondecreasing
    std::vector<double> residual;  ///< f - g, within [-c/2, c/2]
};

namespace detail {

/// The exact anchor always lies in [f(a) - c/2, f(a) + c/2]; the rounded
/// one can stick out by an ulp (it often sits exactly on the edge), so the
/// offset from f(a) is clamped before reflecting.
inline double clamp_anchor(double x, double f0, double half) {
    const double d = std::min(std::max(x - f0, -half), half);
    return f0 + d;
}

}  // namespace detail

inline Anchor select_anchor(const SampledPath& path, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("select_anchor: c must be > 0");
    const double half = 0.5 * c;
    const double f0 = path.values.front();
    const auto tu = first_drawup_time(path, c);
    const auto td = first_drawdown_time(path, c);
    if (!tu && !td) {
        // Tube never forced (range < c). The lazy start is f(a) moved the
        // least distance into the intersection of all tubes, so g stays
        // constant and no push ever occurs.
        const auto [mn_it, mx_it] = std::minmax_element(path.values.begin(), path.values.end());
        const double x = std::min(std::max(f0, *mx_it - half), *mn_it + half);
        return Anchor{detail::clamp_anchor(x, f0, half), Trigger::none,
                      std::numeric_limits<double>::quiet_NaN()};
    }
    // Ties cannot occur: each linear segment is monotone, so only one of
    // drawup/drawdown can increase on it.
    if (tu && td && tu->time == td->time)
        throw std::logic_error("select_anchor: simultaneous drawup/drawdown");
    const bool up_first = tu && (!td || tu->time < td->time);
    if (up_first)
        return Anchor{detail::clamp_anchor(tu->level - half, f0, half), Trigger::up, tu->time};
    return Anchor{detail::clamp_anchor(td->level + half, f0, half), Trigger::down, td->time};
}

/// Unique tube solution started at x: a single left-to-right pass clamping
/// g into [f(t_i) - c/2, f(t_i) + c/2]. Exact for piecewise-linear f since
/// extrema of f - g on a segment occur at its endpoints.
inline TubeSolution reflect(const SampledPath& path, double c, double x) {
    if (!(c > 0.0)) throw std::invalid_argument("reflect: c must be > 0");
    const double half = 0.5 * c;
    // tolerate boundary values up to rounding of f(a) +- c/2
    const double f0 = path.values.front();
    const double tol = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(f0) + half);
    if (std::abs(x - f0) > half + tol)
        throw std::invalid_argument("reflect: x outside the initial tube");
    const std::size_t n = path.size();
    TubeSolution sol;
    sol.anchor = Anchor{x, Trigger::none, std::numeric_limits<double>::quiet_NaN()};
    sol.g.resize(n);
    sol.up.assign(n, 0.0);
    sol.down.assign(n, 0.0);
    sol.residual.resize(n);
    double g = x, u = 0.0, d = 0.0;
    sol.g[0] = g;
    sol.residual[0] = path.values[0] - g;
    for (std::size_t i = 1; i < n; ++i) {
        const double lo = path.values[i] - half;
        const double hi = path.values[i] + half;
        if (g < lo) {
            u += lo - g;
            g = lo;
        } else if (g > hi) {
            d += g - hi;
            g = hi;
        }
        sol.g[i] = g;
        sol.up[i] = u;
        sol.down[i] = d;
        sol.residual[i] = path.values[i] - g;
    }
    return sol;
}

/// Skorokhod solution with the lazy anchor rule; the returned g is the
/// minimizer of total variation over the tube ||g - f||_inf <= c/2, and
/// up + down at the endpoint equals the truncated variation.
inline TubeSolution solve(const SampledPath& path, double c) {
    const Anchor a = select_anchor(path, c);
    TubeSolution sol = reflect(path, c, a.x);
    sol.anchor = a;
    return sol;
}

/// Online version of solve() for reducers that stream samples and stop
/// early. Before the trigger no push can occur, so the anchor can be fixed
/// the moment the first drawup/drawdown crossing is detected; from then on
/// the clamp recursion is identical to reflect(). Produces the same up/down
/// values as solve() on the same samples.
class StreamingTube {
public:
    StreamingTube(double c, double t0, double f0)
        : c_(c), half_(0.5 * c), f0_(f0), mn_(f0), mx_(f0), prev_t_(t0), prev_f_(f0) {
        if (!(c > 0.0)) throw std::invalid_argument("StreamingTube: c must be > 0");
    }

    void step(double t, double f) {
        if (!triggered_) {
            if (f > prev_f_ && f - mn_ >= c_) {
                // crossing level mn_ + c, matching first_drawup_time
                anchor_x_ = detail::clamp_anchor((mn_ + c_) - half_, f0_, half_);
                const double frac = (mn_ + c_ - prev_f_) / (f - prev_f_);
                trigger_time_ = prev_t_ + frac * (t - prev_t_);
                trigger_ = Trigger::up;
                triggered_ = true;
                g_ = anchor_x_;
            } else if (f < prev_f_ && mx_ - f >= c_) {
                anchor_x_ = detail::clamp_anchor((mx_ - c_) + half_, f0_, half_);
                const double frac = (prev_f_ - (mx_ - c_)) / (prev_f_ - f);
                trigger_time_ = prev_t_ + frac * (t - prev_t_);
                trigger_ = Trigger::down;
                triggered_ = true;
                g_ = anchor_x_;
            }
            mn_ = std::min(mn_, f);
            mx_ = std::max(mx_, f);
        }
        if (triggered_) {
            const double lo = f - half_;
            const double hi = f + half_;
            if (g_ < lo) {
                up_ += lo - g_;
                g_ = lo;
            } else if (g_ > hi) {
                down_ += g_ - hi;
                g_ = hi;
            }
        }
        prev_t_ = t;
        prev_f_ = f;
    }

    bool triggered() const { return triggered_; }
    Trigger trigger() const { return trigger_; }
    double trigger_time() const { return trigger_time_; }
    double anchor_x() const { return anchor_x_; }
    double up() const { return up_; }
    double down() const { return down_; }
    double ttv() const { return up_ + down_; }
    double g() const { return g_; }

private:
    double c_, half_, f0_;
    double mn_, mx_;
    double prev_t_, prev_f_;
    bool triggered_ = false;
    Trigger trigger_ = Trigger::none;
    double trigger_time_ = std::numeric_limits<double>::quiet_NaN();
    double anchor_x_ = 0.0;
    double g_ = 0.0, up_ = 0.0, down_ = 0.0;
};

}  // namespace tvlab
