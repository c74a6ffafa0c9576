#pragma once

#include <cmath>
#include <cstdint>

namespace tvlab {

/// SplitMix64: seed expander (Steele, Lea, Flood).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ keyed by (master seed, stream index). Streams with distinct
/// indices are statistically independent and reproducible regardless of the
/// order in which they are drawn, which is what makes ensemble runs
/// bit-stable across thread counts.
class Xoshiro256pp {
public:
    Xoshiro256pp(std::uint64_t master_seed, std::uint64_t stream_index) {
        SplitMix64 sm(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1));
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

/// Standard normal deviates via the Marsaglia polar method.
class GaussianStream {
public:
    GaussianStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : rng_(master_seed, stream_index) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * rng_.uniform01() - 1.0;
            v = 2.0 * rng_.uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    Xoshiro256pp rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tvlab
