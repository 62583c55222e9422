#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypx {

// Worker count for parallel_for; 0 means hardware concurrency.
void set_threads(int n);
int threads();

// Runs body(i) for i in [0, n). Each index writes only its own outputs, so the
// result does not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(size_t n, Body&& body) {
    const size_t workers = std::min<size_t>(static_cast<size_t>(std::max(1, threads())), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace hypx
