#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace awesom {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> value{0};
    return value;
}
}  // namespace detail

/// Number of worker threads used by the data-parallel kernels.
/// Resolution order: set_num_threads(), AWESOM_THREADS, hardware concurrency.
inline unsigned num_threads() {
    if (unsigned v = detail::thread_setting().load(); v != 0) return v;
    if (const char* env = std::getenv("AWESOM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// 0 restores the default resolution.
inline void set_num_threads(unsigned n) { detail::thread_setting().store(n); }

/// Calls body(begin, end) over [0, n) split into chunks of `grain` items.
/// Chunk boundaries depend only on n and grain, never on the thread count,
/// so per-chunk reductions combined in chunk order are schedule-independent.
template <class Body>
void parallel_for(std::size_t n, std::size_t grain, Body&& body) {
    if (n == 0) return;
    grain = std::max<std::size_t>(grain, 1);
    const std::size_t chunks = (n + grain - 1) / grain;
    const std::size_t workers = std::min<std::size_t>(num_threads(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c * grain, std::min(n, (c + 1) * grain));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunks) return;
            try {
                body(c * grain, std::min(n, (c + 1) * grain));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
    }
    if (failure) std::rethrow_exception(failure);
}

/// Number of chunks parallel_for produces for (n, grain).
inline std::size_t chunk_count(std::size_t n, std::size_t grain) {
    grain = std::max<std::size_t>(grain, 1);
    return (n + grain - 1) / grain;
}

}  // namespace awesom
