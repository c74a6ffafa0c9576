#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tvlab/path.hpp"
#include "tvlab/rng.hpp"

namespace tvlab {

/// Configuration of one simulated Brownian path on a uniform grid.
/// (seed, path_index) fully determines the path; extending the horizon
/// continues the same increment stream, so a longer run of the same path
/// is a prefix-preserving extension.
struct SimConfig {
    double horizon = 1.0;   ///< T > 0
    double dt = 1e-4;       ///< step, 0 < dt <= T
    std::uint64_t seed = 7;
    std::uint64_t path_index = 0;

    void validate() const {
        if (!(horizon > 0.0)) throw std::invalid_argument("sim: horizon must be > 0");
        if (!(dt > 0.0) || dt > horizon)
            throw std::invalid_argument("sim: need 0 < dt <= horizon");
    }

    /// Number of grid steps: floor(T/dt), with a guard against the usual
    /// floating-point shortfall when T/dt is integral.
    std::size_t steps() const {
        return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    }
};

/// Incremental Brownian sample generator; used by reducers that stop early
/// or extend the horizon without materializing the whole path.
class BrownianStream {
public:
    explicit BrownianStream(const SimConfig& cfg)
        : gauss_(cfg.seed, cfg.path_index), dt_(cfg.dt), sqrt_dt_(std::sqrt(cfg.dt)) {
        cfg.validate();
    }

    double dt() const { return dt_; }
    double time() const { return t_; }
    double value() const { return v_; }

    /// Advance one step; returns the new value.
    double step() {
        v_ += sqrt_dt_ * gauss_.next();
        t_ += dt_;
        return v_;
    }

private:
    GaussianStream gauss_;
    double dt_, sqrt_dt_;
    double t_ = 0.0;
    double v_ = 0.0;
};

/// Brownian path started at 0 on the uniform grid {0, dt, ..., steps*dt}.
inline SampledPath generate_bm(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.steps();
    std::vector<double> times(n + 1), values(n + 1);
    BrownianStream bm(cfg);
    times[0] = 0.0;
    values[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        values[i] = bm.step();
        times[i] = static_cast<double>(i) * cfg.dt;
    }
    return SampledPath(std::move(times), std::move(values));
}

}  // namespace tvlab
