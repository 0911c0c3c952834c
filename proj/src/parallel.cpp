#include "rosenblatt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rosen {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void set_default_threads(unsigned n) { g_threads.store(n); }

void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body, unsigned threads) {
    if (count == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    std::size_t n_chunks = (count + chunk - 1) / chunk;
    unsigned n_threads = threads == 0 ? default_threads() : threads;
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_chunks));

    auto run = [&](std::size_t c) { body(c * chunk, std::min(count, (c + 1) * chunk)); };
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run(c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t c; (c = next.fetch_add(1)) < n_chunks;) {
                try {
                    run(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rosen
