#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tvlab {

/// A continuous path given by samples; semantics are the piecewise-linear
/// interpolation of (times, values). Times are strictly increasing and all
/// entries finite. Crossing-type queries locate hits inside segments exactly.
struct SampledPath {
    std::vector<double> times;
    std::vector<double> values;

    SampledPath() = default;
    SampledPath(std::vector<double> t, std::vector<double> v)
        : times(std::move(t)), values(std::move(v)) {
        validate();
    }

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.empty()) throw std::invalid_argument("path: no samples");
        if (times.size() != values.size())
            throw std::invalid_argument("path: times/values length mismatch");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
                throw std::invalid_argument("path: non-finite entry");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw std::invalid_argument("path: times not strictly increasing");
        }
    }

    /// Linear interpolation; t must lie in [times.front(), times.back()].
    double value_at(double t) const {
        if (t < times.front() || t > times.back())
            throw std::invalid_argument("value_at: time outside path domain");
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.end()) return values.back();
        std::size_t i = static_cast<std::size_t>(it - times.begin());
        if (i == 0) return values.front();
        const double t0 = times[i - 1], t1 = times[i];
        const double w = (t - t0) / (t1 - t0);
        return values[i - 1] + w * (values[i] - values[i - 1]);
    }
};

enum class CrossingKind { drawup, drawdown, level_passage };

struct Crossing {
    double time;
    double level;  ///< interpolated path value at `time`
    CrossingKind kind;
};

/// Running minimum and maximum of the interpolated path at sample times.
/// For piecewise-linear paths these equal the extrema over sample values.
inline std::pair<std::vector<double>, std::vector<double>>
running_extrema(const SampledPath& path) {
    std::vector<double> mn(path.size()), mx(path.size());
    double lo = path.values.front(), hi = lo;
    for (std::size_t i = 0; i < path.size(); ++i) {
        lo = std::min(lo, path.values[i]);
        hi = std::max(hi, path.values[i]);
        mn[i] = lo;
        mx[i] = hi;
    }
    return {std::move(mn), std::move(mx)};
}

/// First time the drawup f(t) - min_{[a,t]} f reaches c, located exactly
/// within the segment where it happens. Drawup can only grow on rising
/// segments, so it suffices to test each segment against the running
/// minimum at its left endpoint.
inline std::optional<Crossing> first_drawup_time(const SampledPath& path, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("first_drawup_time: c must be > 0");
    double mn = path.values.front();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double v0 = path.values[i], v1 = path.values[i + 1];
        if (v1 > v0 && v1 - mn >= c) {
            const double level = mn + c;
            const double t0 = path.times[i], t1 = path.times[i + 1];
            const double t = t0 + (level - v0) / (v1 - v0) * (t1 - t0);
            return Crossing{t, level, CrossingKind::drawup};
        }
        mn = std::min(mn, v1);
    }
    return std::nullopt;
}

/// First time the drawdown max_{[a,t]} f - f(t) reaches c. Mirror of
/// first_drawup_time under f -> -f.
inline std::optional<Crossing> first_drawdown_time(const SampledPath& path, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("first_drawdown_time: c must be > 0");
    double mx = path.values.front();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double v0 = path.values[i], v1 = path.values[i + 1];
        if (v1 < v0 && mx - v1 >= c) {
            const double level = mx - c;
            const double t0 = path.times[i], t1 = path.times[i + 1];
            const double t = t0 + (v0 - level) / (v0 - v1) * (t1 - t0);
            return Crossing{t, level, CrossingKind::drawdown};
        }
        mx = std::max(mx, v1);
    }
    return std::nullopt;
}

/// Earliest interpolated hitting time of `level`; none if never hit.
inline std::optional<Crossing> first_passage(const SampledPath& path, double level) {
    if (path.values.front() == level)
        return Crossing{path.times.front(), level, CrossingKind::level_passage};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double d0 = path.values[i] - level;
        const double d1 = path.values[i + 1] - level;
        if (d0 * d1 <= 0.0 && d0 != d1) {
            const double t0 = path.times[i], t1 = path.times[i + 1];
            const double t = t0 + d0 / (d0 - d1) * (t1 - t0);
            return Crossing{t, level, CrossingKind::level_passage};
        }
    }
    return std::nullopt;
}

// --- CSV path format: header "time,value", one pair per row, '.' decimal ---

inline SampledPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time,value")
        throw std::invalid_argument("csv: expected header 'time,value', got '" + line + "'");
    std::vector<double> times, values;
    std::size_t lineno = 1;
    auto parse = [&](const char* first, const char* last, double& out) {
        auto [p, ec] = std::from_chars(first, last, out);
        if (ec != std::errc{} || p != last)
            throw std::invalid_argument("csv: bad number on line " + std::to_string(lineno));
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("csv: missing comma on line " + std::to_string(lineno));
        double t, v;
        parse(line.data(), line.data() + comma, t);
        parse(line.data() + comma + 1, line.data() + line.size(), v);
        if (!times.empty() && !(t > times.back()))
            throw std::invalid_argument("csv: times not strictly increasing at line " +
                                        std::to_string(lineno));
        times.push_back(t);
        values.push_back(v);
    }
    return SampledPath(std::move(times), std::move(values));
}

inline SampledPath read_path_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::invalid_argument("cannot open '" + filename + "'");
    return read_path_csv(in);
}

inline void write_path_csv(std::ostream& out, const SampledPath& path) {
    out << "time,value\n";
    char buf[64];
    for (std::size_t i = 0; i < path.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.times[i], path.values[i]);
        out << buf;
    }
}

}  // namespace tvlab
