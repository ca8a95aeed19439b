#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace tdeg {

template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn)
{
    std::vector<T> out(count);
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace tdeg
