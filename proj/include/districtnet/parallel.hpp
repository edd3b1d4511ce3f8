#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace districtnet {

/// Run fn(i) for i in [0, count) across worker threads. Results must be
/// written to pre-sized slots so the output order is deterministic.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned max_threads = 0) {
    unsigned n_threads = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (n_threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    n_threads = std::min<std::size_t>(n_threads, count);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += n_threads) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace districtnet
