#include "padicms/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace padicms {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PADIC_MODELSET_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min<unsigned>(hw, 8));
}

void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_body) {
    if (end <= begin) return;
    std::int64_t total = end - begin;
    if (threads <= 1 || total == 1) {
        chunk_body(begin, end);
        return;
    }
    std::int64_t workers = std::min<std::int64_t>(threads, total);
    std::int64_t chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (std::int64_t w = 0; w < workers; ++w) {
        std::int64_t lo = begin + w * chunk;
        std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &chunk_body] { chunk_body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

} // namespace padicms
