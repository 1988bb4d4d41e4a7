#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace entloc {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// assigned round-robin; callers write results into per-index slots, so the
/// outcome does not depend on scheduling.
inline void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    const int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
}

}  // namespace entloc
