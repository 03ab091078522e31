#include "gaborlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gaborlab {

int default_workers() {
    if (const char* env = std::getenv("GABORLAB_WORKERS")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

int resolve_workers(int requested) { return requested > 0 ? requested : default_workers(); }

void run_chunked(std::uint64_t total, int workers,
                 const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    workers = resolve_workers(workers);
    if (total == 0) return;
    if ((std::uint64_t)workers > total) workers = (int)total;
    if (workers == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t base = total / workers, extra = total % workers;
    std::uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        std::uint64_t len = base + (w < (int)extra ? 1 : 0);
        std::uint64_t end = begin + len;
        pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace gaborlab
