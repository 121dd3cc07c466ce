#include "aniso/parallel.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace aniso {

namespace {

std::atomic<int> g_threads{0};

int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

int num_threads() {
    int t = g_threads.load(std::memory_order_relaxed);
    return t > 0 ? t : default_threads();
}

void set_num_threads(int n) {
    if (n < 1) throw std::invalid_argument("thread count must be >= 1");
    g_threads.store(n, std::memory_order_relaxed);
}

void parallel_blocks(std::int64_t nblocks, const std::function<void(std::int64_t)>& fn) {
    if (nblocks <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(num_threads(), nblocks));
    if (workers <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) return;
            fn(b);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace aniso
