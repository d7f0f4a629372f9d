#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace qet {

// Pairwise (cascade) summation. The split points depend only on the length,
// so the result is a pure function of the input sequence.
inline double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t kLeaf = 8;
    if (v.size() <= kLeaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// claimed by exactly one thread; callers write into pre-sized slots so the
// outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t threads = std::min<std::size_t>(workers, n);
    // Each thread stops at its first failure; the failure at the lowest index
    // is rethrown so the reported error does not depend on scheduling.
    std::vector<std::exception_ptr> failure(threads);
    std::vector<std::size_t> failed_at(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    body(i);
                } catch (...) {
                    failure[t] = std::current_exception();
                    failed_at[t] = i;
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    std::size_t first = threads;
    for (std::size_t t = 0; t < threads; ++t)
        if (failure[t] && (first == threads || failed_at[t] < failed_at[first])) first = t;
    if (first < threads) std::rethrow_exception(failure[first]);
}

// Sum of term(i) over [0, n) using fixed-size blocks reduced pairwise. The
// block layout is independent of the worker count.
inline double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& term,
                                unsigned workers = 1, std::size_t block = 4096) {
    const std::size_t blocks = (n + block - 1) / block;
    std::vector<double> partial(blocks, 0.0);
    parallel_for(blocks, workers, [&](std::size_t b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(n, lo + block);
        std::vector<double> terms(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) terms[i - lo] = term(i);
        partial[b] = pairwise_sum(terms);
    });
    return pairwise_sum(partial);
}

}  // namespace qet
