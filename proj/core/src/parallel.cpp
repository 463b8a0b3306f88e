#include "stablenoise/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace stablenoise {

int default_threads() {
    if (const char* e = std::getenv("STABLENOISE_THREADS")) {
        try {
            const int t = std::stoi(e);
            if (t > 0) return t;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (threads <= 0) threads = default_threads();
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (t <= 1) {
        body(0, n);
        return;
    }
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t b = n * i / t, e = n * (i + 1) / t;
        pool.emplace_back([&, b, e] {
            try {
                body(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<double> replicate(std::size_t n, int threads, const std::function<double(std::uint64_t)>& f,
                              std::uint64_t first) {
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = f(first + i);
    });
    return out;
}

}  // namespace stablenoise
