// thread_pool.hpp — Small persistent worker pool with a chunked parallel_for.
// Work items write disjoint output slots, so results are deterministic
// regardless of scheduling.

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aggspec {

class ThreadPool {
public:
    // n = 0 picks hardware_concurrency(). One lane is the calling thread,
    // so n - 1 workers are spawned.
    explicit ThreadPool(unsigned n = 0) {
        if (n == 0) n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
        lanes_ = n;
        for (unsigned i = 0; i + 1 < n; ++i)
            workers_.emplace_back([this] { worker_loop(); });
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stop_ = true;
        }
        cv_start_.notify_all();
        for (auto& w : workers_) w.join();
    }

    unsigned lanes() const { return lanes_; }

    // body(begin, end) is called on half-open index ranges covering [0, count).
    void parallel_for(std::size_t count,
                      const std::function<void(std::size_t, std::size_t)>& body,
                      std::size_t min_chunk = 1024) {
        if (count == 0) return;
        const std::size_t per_lane = (count + lanes_ - 1) / lanes_;
        std::size_t chunk = std::max<std::size_t>(min_chunk, (per_lane + 3) / 4);
        if (workers_.empty() || count <= chunk) {
            body(0, count);
            return;
        }
        {
            std::lock_guard<std::mutex> lock(mutex_);
            body_ = &body;
            count_ = count;
            chunk_ = chunk;
            next_.store(0, std::memory_order_relaxed);
            active_ = static_cast<unsigned>(workers_.size());
            ++generation_;
        }
        cv_start_.notify_all();
        run_chunks(body, count, chunk);
        std::unique_lock<std::mutex> lock(mutex_);
        cv_done_.wait(lock, [this] { return active_ == 0; });
        body_ = nullptr;
        if (error_) {
            auto e = error_;
            error_ = nullptr;
            std::rethrow_exception(e);
        }
    }

private:
    void run_chunks(const std::function<void(std::size_t, std::size_t)>& body,
                    std::size_t count, std::size_t chunk) {
        for (;;) {
            const std::size_t begin = next_.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= count) break;
            const std::size_t end = std::min(begin + chunk, count);
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex_);
                if (!error_) error_ = std::current_exception();
            }
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(std::size_t, std::size_t)>* body = nullptr;
            std::size_t count = 0, chunk = 0;
            {
                std::unique_lock<std::mutex> lock(mutex_);
                cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                body = body_;
                count = count_;
                chunk = chunk_;
            }
            if (body) run_chunks(*body, count, chunk);
            {
                std::lock_guard<std::mutex> lock(mutex_);
                if (--active_ == 0) cv_done_.notify_all();
            }
        }
    }

    std::vector<std::thread> workers_;
    unsigned lanes_{1};
    std::mutex mutex_;
    std::condition_variable cv_start_, cv_done_;
    const std::function<void(std::size_t, std::size_t)>* body_{nullptr};
    std::size_t count_{0}, chunk_{0};
    std::atomic<std::size_t> next_{0};
    unsigned active_{0};
    std::uint64_t generation_{0};
    bool stop_{false};
    std::exception_ptr error_;
};

} // namespace aggspec
