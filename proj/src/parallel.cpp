#include "lcorr/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace lcorr {

std::size_t thread_count() {
    if (const char* env = std::getenv("LCORR_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<std::size_t> partition_bounds(std::size_t n, std::size_t workers) {
    if (workers == 0) workers = 1;
    if (workers > n) workers = n == 0 ? 1 : n;
    std::vector<std::size_t> bounds(workers + 1);
    for (std::size_t b = 0; b <= workers; ++b) bounds[b] = n * b / workers;
    return bounds;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    auto bounds = partition_bounds(n, thread_count());
    std::size_t blocks = bounds.size() - 1;
    if (blocks <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        workers.emplace_back([&, b] {
            try {
                for (std::size_t i = bounds[b]; i < bounds[b + 1]; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace lcorr
