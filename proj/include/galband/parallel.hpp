#ifndef GALBAND_PARALLEL_HPP
#define GALBAND_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace galband {

/// Worker count: GALBAND_THREADS caps it, hardware concurrency is the default.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("GALBAND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0 && v < 1024)
            return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
    }
    return hw;
}

/// Index-parallel loop over [0, n); fn(i) must not touch shared mutable
/// state.  The first exception wins and is rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(thread_budget(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        std::size_t i;
        while ((i = next.fetch_add(1)) < n) {
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
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace galband

#endif // GALBAND_PARALLEL_HPP
