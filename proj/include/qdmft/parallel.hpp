#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qdmft {

// Runs fn(i) for i in [0, n). Each item must write only to its own output
// slot; reductions happen afterwards in index order so results do not depend
// on the worker count.
inline void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<long> next(0);
    std::atomic<bool> failed(false);
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n || failed.load())
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int count = static_cast<int>(std::min<long>(workers, n));
    pool.reserve(count);
    for (int w = 0; w < count; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failed.load() && error)
        std::rethrow_exception(error);
}

} // namespace qdmft
