#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tvlab/path.hpp"
#include "tvlab/skorokhod.hpp"

namespace tvlab {

/// Truncated variation of a path at band c, together with the one-sided
/// split and the running process at sample times.
struct TruncVarResult {
    double c;
    double ttv;
    double utv;
    double dtv;
    std::vector<double> running_ttv;  ///< nondecreasing, starts at 0
};

/// TTV/UTV/DTV via the Skorokhod solution: ttv = up + down at the endpoint,
/// with the running process up(t) + down(t). c = 0 falls back to plain
/// total variation.
inline TruncVarResult ttv_stream(const SampledPath& path, double c) {
    if (c < 0.0) throw std::invalid_argument("ttv_stream: c must be >= 0");
    TruncVarResult r;
    r.c = c;
    const std::size_t n = path.size();
    if (c == 0.0) {
        r.running_ttv.resize(n);
        double tv = 0.0, up = 0.0, down = 0.0;
        r.running_ttv[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double d = path.values[i] - path.values[i - 1];
            tv += std::abs(d);
            (d >= 0.0 ? up : down) += std::abs(d);
            r.running_ttv[i] = tv;
        }
        r.ttv = tv;
        r.utv = up;
        r.dtv = down;
        return r;
    }
    const TubeSolution sol = solve(path, c);
    r.utv = sol.up.back();
    r.dtv = sol.down.back();
    r.ttv = r.utv + r.dtv;
    r.running_ttv.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.running_ttv[i] = sol.up[i] + sol.down[i];
    return r;
}

/// Jump-sequence overload: discrete data with no time semantics. The
/// truncated variation only samples finitely many points, so it equals the
/// TTV of the linear interpolation on any strictly increasing grid.
inline TruncVarResult ttv_stream(const std::vector<double>& jumps, double c) {
    std::vector<double> times(jumps.size());
    std::iota(times.begin(), times.end(), 0.0);
    return ttv_stream(SampledPath(std::move(times), jumps), c);
}

enum class TvMode { ttv, utv, dtv };

struct OracleTriple {
    double ttv;
    double utv;
    double dtv;
};

/// Exhaustive supremum of sum(phi_c(increments)) over all increasing-index
/// subsequences, by full 2^n subset enumeration. Deliberately not the
/// streaming algorithm, so the two routes have independent failure modes.
inline OracleTriple ttv_oracle_all(const SampledPath& path, double c) {
    if (c < 0.0) throw std::invalid_argument("ttv_oracle: c must be >= 0");
    const std::size_t n = path.size();
    if (n > 16) throw std::length_error("ttv_oracle: more than 16 samples");
    OracleTriple best{0.0, 0.0, 0.0};
    const auto& v = path.values;
    const std::uint32_t full = static_cast<std::uint32_t>(1u << n);
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        double sum_ttv = 0.0, sum_utv = 0.0, sum_dtv = 0.0;
        double prev = 0.0;
        bool have_prev = false;
        for (std::uint32_t m = mask; m != 0; m &= m - 1) {
            const unsigned i = static_cast<unsigned>(std::countr_zero(m));
            if (have_prev) {
                const double d = v[i] - prev;
                sum_ttv += std::max(std::abs(d) - c, 0.0);
                sum_utv += std::max(d - c, 0.0);
                sum_dtv += std::max(-d - c, 0.0);
            }
            prev = v[i];
            have_prev = true;
        }
        best.ttv = std::max(best.ttv, sum_ttv);
        best.utv = std::max(best.utv, sum_utv);
        best.dtv = std::max(best.dtv, sum_dtv);
    }
    return best;
}

inline double ttv_oracle(const SampledPath& path, double c, TvMode mode) {
    const OracleTriple t = ttv_oracle_all(path, c);
    switch (mode) {
        case TvMode::ttv: return t.ttv;
        case TvMode::utv: return t.utv;
        default: return t.dtv;
    }
}

/// For a competitor g on the same grid: (sup |f - g|, total variation of g).
/// For g = solve(f, c).g this gives (<= c/2, TTV).
inline std::pair<double, double>
variational_residual(const SampledPath& f, const SampledPath& g, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("variational_residual: c must be > 0");
    if (f.times != g.times)
        throw std::invalid_argument("variational_residual: mismatched grids");
    double sup_dev = 0.0, tv = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sup_dev = std::max(sup_dev, std::abs(f.values[i] - g.values[i]));
        if (i > 0) tv += std::abs(g.values[i] - g.values[i - 1]);
    }
    return {sup_dev, tv};
}

}  // namespace tvlab
