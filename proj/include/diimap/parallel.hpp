#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace diimap {

// Runs fn over [0, count) split into at most `threads` contiguous chunks.
// The partition depends only on count and threads, and chunks write disjoint
// state, so results are independent of scheduling. threads <= 1 runs inline.
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn) {
    if (count == 0) return;
    std::size_t want = threads < 1 ? 1 : static_cast<std::size_t>(threads);
    if (want > count) want = count;
    if (want <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(want);
    const std::size_t base = count / want;
    const std::size_t extra = count % want;
    std::size_t begin = 0;
    for (std::size_t t = 0; t < want; ++t) {
        const std::size_t len = base + (t < extra ? 1 : 0);
        pool.emplace_back([&fn, begin, len] { fn(begin, begin + len); });
        begin += len;
    }
    for (auto& th : pool) th.join();
}

}  // namespace diimap
