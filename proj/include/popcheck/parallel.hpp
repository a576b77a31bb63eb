#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace popcheck {

/// Runs body(i) for i in [0, n) on up to `threads` workers with static
/// contiguous chunks. Results must be written by index, so the outcome does
/// not depend on scheduling. The first exception (by chunk) is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 64));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(n, begin + chunk);
                try {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace popcheck
