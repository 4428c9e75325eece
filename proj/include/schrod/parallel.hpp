#pragma once

// Deterministic data-parallel helper.  Work is split into fixed per-thread
// ranges; every output element is computed independently of the split, so
// results are bit-identical for any thread count.  SCHRO_THREADS caps the
// pool (0 or unset means auto).

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace schrod {

inline unsigned max_threads() {
    static const unsigned cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        if (const char* env = std::getenv("SCHRO_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0) return static_cast<unsigned>(v);
        }
        return hw;
    }();
    return cached;
}

/// Runs fn(begin, end) over disjoint chunks of [begin, end).  Small ranges
/// stay on the calling thread.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t, std::size_t)>& fn,
                         std::size_t min_parallel = 1u << 15) {
    const std::size_t count = end - begin;
    const unsigned threads = max_threads();
    if (threads <= 1 || count < min_parallel) {
        fn(begin, end);
        return;
    }
    const std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned ti = 0; ti < threads; ++ti) {
        const std::size_t lo = begin + ti * chunk;
        if (lo >= end) break;
        const std::size_t hi = std::min(end, lo + chunk);
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace schrod
