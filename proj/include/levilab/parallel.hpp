#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace levilab {

/// Worker count: `requested` if positive, else hardware concurrency, and
/// never more than LEVILAB_THREADS when that is set.
inline int resolve_threads(int requested = 0) {
    int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("LEVILAB_THREADS")) {
        try {
            int c = std::stoi(cap);
            if (c > 0) n = std::min(n, c);
        } catch (const std::exception&) {
            // Unparseable cap: ignore.
        }
    }
    return std::max(1, n);
}

/// Runs fn(i) for i in [0, count). Results must be written by index; the
/// first exception by index is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
    std::vector<std::exception_ptr> errors(count);
    auto run_one = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, count); ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) run_one(i);
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace levilab
