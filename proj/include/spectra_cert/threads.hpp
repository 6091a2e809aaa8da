#pragma once

// Bounded parallel loop. SPECTRA_CERT_THREADS caps the worker count.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spectra_cert {

inline int thread_cap() {
    if (const char* env = std::getenv("SPECTRA_CERT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

// Runs fn(i) for i in [0, n). Tasks must be independent; exceptions from
// workers are rethrown (first one wins). Nested calls run serially so
// layered parallelism (sweep trials over k-means restarts) cannot
// oversubscribe.
template <typename Fn>
inline void parallel_for(int n, Fn&& fn) {
    const int workers = detail::inside_parallel_region ? 1 : std::min(n, thread_cap());
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            detail::inside_parallel_region = true;
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace spectra_cert
