#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace tvlab {

/// Number of worker threads to use; requested <= 0 picks a hardware default.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Deterministic index-parallel map: applies f(index) for index in [0, count)
/// and collects results in index order. Results are identical for any thread
/// count because each task depends only on its index. The first failing task
/// aborts the job, reporting its index.
template <typename F>
auto run_indexed(int count, int threads, F&& f)
    -> std::vector<std::invoke_result_t<F&, int>> {
    using R = std::invoke_result_t<F&, int>;
    if (count < 1) throw std::invalid_argument("run_indexed: count must be >= 1");
    std::vector<R> out(static_cast<std::size_t>(count));
    threads = std::min(resolve_threads(threads), count);
    std::exception_ptr error;
    int error_index = -1;
    std::mutex err_mu;
    auto worker = [&](int first, int last) {
        for (int i = first; i < last; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = f(i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!error) {
                    error = std::current_exception();
                    error_index = i;
                }
                return;
            }
        }
    };
    if (threads == 1) {
        worker(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (count + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int first = t * chunk;
            const int last = std::min(count, first + chunk);
            if (first >= last) break;
            pool.emplace_back(worker, first, last);
        }
        for (auto& th : pool) th.join();
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const std::exception& e) {
            throw std::runtime_error("ensemble task " + std::to_string(error_index) +
                                     " failed: " + e.what());
        }
    }
    return out;
}

}  // namespace tvlab
