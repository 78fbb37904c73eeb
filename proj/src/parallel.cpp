#include "absw/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace absw {

int default_jobs() {
    if (const char* env = std::getenv("ABSW_JOBS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> threads;
    const std::size_t nThreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    threads.reserve(nThreads);
    for (std::size_t t = 0; t < nThreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

} // namespace absw
