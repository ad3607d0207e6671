#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wilberforce {

/// Evaluates fn(i) for i in [0, n) on a small thread pool. Results are stored
/// by index, so the output order never depends on scheduling. The first
/// exception (lowest index) is rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned max_threads = 0) {
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> out(n);
    unsigned threads = max_threads != 0 ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t i) {
        try {
            out[i] = fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                    run(i);
            });
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace wilberforce
