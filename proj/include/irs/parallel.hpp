#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irs {

inline int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0, n) on `jobs` workers pulling from a shared counter.
// Results must be written to per-index slots so the outcome does not depend
// on scheduling.  The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(long n, int jobs, F&& f) {
    jobs = resolve_jobs(jobs);
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    if (jobs > n) jobs = static_cast<int>(n);

    std::atomic<long> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;

    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) error = std::current_exception();
                next.store(n, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(jobs - 1);
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace irs
