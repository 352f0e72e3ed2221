#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pcurv/types.hpp"

namespace pcurv {

/// Worker count: PCURV_WORKERS if set, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("PCURV_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count). Tasks must write only to their own slot;
/// results are then independent of scheduling and worker count. The first
/// exception thrown by any task is rethrown on the caller's thread.
template <typename Fn>
void parallel_for(Index count, Fn&& fn, int workers = 0) {
    if (workers <= 0) workers = worker_count();
    if (workers == 1 || count <= 1) {
        for (Index i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const Index i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pcurv
