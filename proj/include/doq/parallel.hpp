#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace doq {

/// Worker cap: DOQ_MAX_THREADS if set (>=1), else hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("DOQ_MAX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, n). Work is pre-partitioned into contiguous
/// index blocks, so results written by index are independent of scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i)
                body(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace doq
