#include "sdp/threads.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sdp {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) {
    g_threads.store(std::max(1, n));
}

int threads() {
    return g_threads.load();
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int nt = std::min(threads(), count);
    if (nt <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace sdp
