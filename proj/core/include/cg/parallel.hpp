#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cg {

// Splits [0, n) into contiguous chunks, one per thread; f(begin, end).
// The first exception thrown by a worker is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    std::size_t t = std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, std::max<std::size_t>(n, 1));
    if (t == 1) {
        f(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(t);
    for (std::size_t k = 0; k < t; ++k) {
        std::size_t lo = n * k / t, hi = n * (k + 1) / t;
        pool.emplace_back([&, k, lo, hi] {
            try {
                f(lo, hi);
            } catch (...) {
                errs[k] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace cg
