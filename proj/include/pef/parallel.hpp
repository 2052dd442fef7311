#ifndef PEF_PARALLEL_HPP
#define PEF_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace pef {

namespace detail {
inline std::atomic<unsigned>& thread_cap_storage() {
    static std::atomic<unsigned> cap{1};
    return cap;
}
} // namespace detail

/** Global cap on worker threads (CLI --threads). Default 1. */
inline void set_thread_cap(unsigned n) { detail::thread_cap_storage() = n == 0 ? 1 : n; }
inline unsigned thread_cap() { return detail::thread_cap_storage().load(); }

/** Runs fn(i) for i in [begin, end). Indices are split into contiguous
 * chunks, one per worker; every index is visited exactly once, so disjoint
 * writes stay deterministic for any thread count. */
inline void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    const unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(n));
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        const int lo = begin + static_cast<int>(static_cast<long long>(n) * t / workers);
        const int hi = begin + static_cast<int>(static_cast<long long>(n) * (t + 1) / workers);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace pef

#endif
