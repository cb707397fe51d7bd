#pragma once

// Minimal index-parallel loop. Thread count is capped by HARDYOPT_THREADS;
// results are written to caller-owned slots by index, so scheduling cannot
// change the outcome.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hardyopt {

inline int thread_budget() {
    if (const char* env = std::getenv("HARDYOPT_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const int budget = thread_budget();
    if (budget <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(budget, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace hardyopt
