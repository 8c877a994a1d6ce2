#pragma once

#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace sopbench {

// Order-preserving parallel map: results[i] = fn(i) for i in [0, n).
// Workers pull indices from a shared counter; the output vector is indexed,
// so result order never depends on scheduling. The first exception thrown by
// any worker is rethrown on the calling thread after all workers join.
template <typename Fn>
auto parallel_map_indexed(size_t n, int jobs, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, size_t>> {
    using R = std::invoke_result_t<Fn&, size_t>;
    std::vector<R> results(n);
    if (n == 0) return results;
    if (jobs < 1) jobs = 1;
    size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
    if (workers == 1) {
        for (size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

// Simple counting semaphore (runtime-sized); bounds in-flight remote calls.
class Semaphore {
public:
    explicit Semaphore(int count) : count_(count) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return count_ > 0; });
        --count_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++count_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
};

class SemaphoreGuard {
public:
    explicit SemaphoreGuard(Semaphore& s) : sem_(s) { sem_.acquire(); }
    ~SemaphoreGuard() { sem_.release(); }
    SemaphoreGuard(const SemaphoreGuard&) = delete;
    SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

private:
    Semaphore& sem_;
};

}  // namespace sopbench
