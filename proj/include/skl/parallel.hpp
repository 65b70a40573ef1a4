#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace skl {

/// Index-ordered parallel map. Results land in slot i regardless of which
/// worker produced them, so output is identical for any worker count; tasks
/// must be pure functions of their index.
class WorkerPool {
public:
    explicit WorkerPool(int workers = 1) : workers_(workers < 1 ? 1 : workers) {}

    int workers() const { return workers_; }

    template <typename T>
    std::vector<T> map(std::size_t count, const std::function<T(std::size_t)>& fn) const {
        std::vector<T> out(count);
        if (workers_ == 1 || count <= 1) {
            for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
            return out;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto body = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> threads;
        const int n = static_cast<int>(std::min<std::size_t>(count, workers_));
        threads.reserve(static_cast<std::size_t>(n));
        for (int w = 0; w < n; ++w) threads.emplace_back(body);
        for (auto& t : threads) t.join();
        if (error) std::rethrow_exception(error);
        return out;
    }

    void for_each(std::size_t count, const std::function<void(std::size_t)>& fn) const {
        map<char>(count, [&](std::size_t i) {
            fn(i);
            return '\0';
        });
    }

    static int resolve_auto() {
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : static_cast<int>(hc > 64 ? 64 : hc);
    }

private:
    int workers_;
};

}  // namespace skl
