#include "decon/parallel.hpp"

#include <algorithm>

namespace decon {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    if (workers == 0) workers = 1;
    const std::size_t n_chunks = std::min<std::size_t>(workers, count);
    if (n_chunks == 1) {
        fn(0, count, 0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(n_chunks);
    const std::size_t per = count / n_chunks;
    const std::size_t extra = count % n_chunks;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < n_chunks; ++k) {
        const std::size_t end = begin + per + (k < extra ? 1 : 0);
        threads.emplace_back([&fn, begin, end, k] { fn(begin, end, k); });
        begin = end;
    }
    for (auto& t : threads) t.join();
}

unsigned default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : std::min(hc, 8u);
}

}  // namespace decon
