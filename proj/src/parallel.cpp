#include "hypx/parallel.hpp"

namespace hypx {

namespace {

std::atomic<int> g_threads{1};

}  // namespace

void set_threads(int n) {
    if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    g_threads.store(n);
}

int threads() { return g_threads.load(); }

}  // namespace hypx
