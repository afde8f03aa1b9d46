// Deterministic fork-join helper used for per-realization work.
//
// Results must be written to preallocated per-index slots; any reduction
// across indices happens sequentially afterwards so the outcome does not
// depend on the worker count.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace g2sim {

/// Number of workers actually used for `requested` (0 means all hardware threads).
inline std::size_t effective_threads(std::size_t requested, std::size_t n_items) {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    std::size_t n = requested == 0 ? hw : requested;
    if (n > n_items)
        n = n_items;
    return n == 0 ? 1 : n;
}

/// Runs body(i) for i in [0, n). Exceptions from workers are rethrown (first one wins).
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
    const std::size_t workers = effective_threads(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(run);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace g2sim
