/*******************************************************************************
 * @file:   parallel.cc
 * @brief:  Static-chunked parallel loop over std::thread.
 ******************************************************************************/
#include "batchcut/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace batchcut {
namespace {
std::atomic<std::size_t> thread_override{0};

std::size_t threads_from_env() {
    if (const char* env = std::getenv("BATCHCUT_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) {
                return static_cast<std::size_t>(value);
            }
        } catch (const std::exception&) {
            // fall through to hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}
} // namespace

std::size_t num_threads() {
    const std::size_t forced = thread_override.load();
    return forced > 0 ? forced : threads_from_env();
}

void set_num_threads(const std::size_t threads) {
    thread_override.store(threads);
}

void parallel_for(const std::size_t n, const std::size_t grain, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) {
        return;
    }
    const std::size_t max_chunks = std::max<std::size_t>(1, n / std::max<std::size_t>(grain, 1));
    const std::size_t threads    = std::min(num_threads(), max_chunks);
    if (threads <= 1) {
        body(0, n);
        return;
    }

    std::exception_ptr       error;
    std::mutex               error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end   = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        workers.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& worker: workers) {
        worker.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace batchcut
