// ---------------------------------------------------------------------------
// parallel.hpp
// Minimal deterministic work partitioning. Thread count comes from
// WASSHEAT_THREADS (falling back to hardware concurrency). Results must be
// written into per-index slots by the callers; reductions then run in fixed
// index order, so the thread count changes wall time only, never values.
// ---------------------------------------------------------------------------
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

#include "wassheat/types.hpp"

namespace wassheat {

inline int thread_count() {
    if (const char* env = std::getenv("WASSHEAT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int T = std::min(thread_count(), std::max(n, 1));
    if (T <= 1 || n < 2) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const int chunk = (n + T - 1) / T;
    for (int t = 0; t < T; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &failed] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                failed.store(true);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw Error("parallel_for: worker threw");
}

}  // namespace wassheat
