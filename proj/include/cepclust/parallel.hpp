#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace cepclust {

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// interleaved schedule. Each index is visited exactly once. If any call
/// throws, the exception from the smallest failing index is rethrown after all
/// workers join, so the reported failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::mutex mu;
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto worker = [&](std::size_t t) {
        for (std::size_t i = t; i < count; i += threads) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads - 1);
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker, t);
        worker(0);
    }
    if (failure) std::rethrow_exception(failure);
}

inline std::size_t default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace cepclust
