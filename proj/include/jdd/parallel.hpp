#ifndef JDD_PARALLEL_HPP
#define JDD_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace jdd {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * Runs fn(index) for index in [0, count) across up to `threads` workers.
 *
 * Work items must write to disjoint state; the partitioning is static
 * (worker t takes indices t, t+T, t+2T, ...), so outputs are identical for
 * any thread count as long as each item is a pure function of its index.
 */
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    int nt = resolve_threads(threads);
    if (nt <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (static_cast<std::size_t>(nt) > count) nt = static_cast<int>(count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = static_cast<std::size_t>(t); i < count;
                     i += static_cast<std::size_t>(nt)) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace jdd

#endif // JDD_PARALLEL_HPP
