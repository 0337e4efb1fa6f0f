#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sar {

inline unsigned hardware_jobs(int requested = 0) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Static block partition of [0, n) over worker threads. Each index is
/// processed exactly once and each worker owns a contiguous block, so any
/// per-index reduction order is fixed regardless of thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int jobs = 0) {
    const unsigned workers = std::min<std::size_t>(hardware_jobs(jobs), n == 0 ? 1 : n);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace sar
