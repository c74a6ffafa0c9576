#pragma once

#include <vector>

#include "tvlab/path.hpp"
#include "tvlab/rng.hpp"

namespace tvtest {

/// Path on the integer grid 0..n-1.
inline tvlab::SampledPath mk(std::vector<double> values) {
    std::vector<double> times(values.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i);
    return tvlab::SampledPath(std::move(times), std::move(values));
}

/// Random path for property tests: length in [2, max_len], values iid
/// uniform on [-1, 1].
inline tvlab::SampledPath random_path(std::uint64_t seed, std::uint64_t index,
                                      int max_len = 12) {
    tvlab::Xoshiro256pp rng(seed, index);
    const int len = 2 + static_cast<int>(rng.uniform01() * (max_len - 1));
    std::vector<double> values(static_cast<std::size_t>(len));
    for (auto& v : values) v = 2.0 * rng.uniform01() - 1.0;
    return mk(std::move(values));
}

}  // namespace tvtest
