#ifndef THINFILM_PARALLEL_HPP
#define THINFILM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace thinfilm {

inline int resolve_workers(int requested)
{
    if (requested > 0)
        return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each task writes only its own
/// output slot, so results do not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body)
{
    const auto w = static_cast<std::size_t>(std::max(1, std::min<int>(resolve_workers(workers), static_cast<int>(std::max<std::size_t>(n, 1)))));
    if (w <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(w - 1);
    for (std::size_t t = 0; t + 1 < w; ++t)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace thinfilm

#endif
