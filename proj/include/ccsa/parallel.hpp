#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace ccsa {

/// Worker count: --threads flag beats the CCSA_THREADS env var beats the
/// hardware default.
inline int resolve_thread_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CCSA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * @brief Runs fn(chunk) for chunk = 0..num_chunks-1 across `threads` workers.
 *
 * The chunk decomposition is fixed by the caller, not by the thread count, so
 * results that are reduced per chunk stay identical for any --threads value.
 */
inline void parallel_for_chunks(int num_chunks, int threads,
                                const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, num_chunks));
    if (threads == 1) {
        for (int c = 0; c < num_chunks; ++c) fn(c);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            while (true) {
                const int c = next.fetch_add(1);
                if (c >= num_chunks) break;
                fn(c);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace ccsa
