#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace amc
{
    /// Runs body(i) for i in [0, count) on up to jobs threads, handing out
    /// indices in increasing order. The first exception is rethrown.
    template <typename Body_>
    auto parallel_indices(std::size_t count, unsigned jobs, Body_ && body) -> void
    {
        jobs = std::max(1u, jobs);
        if (jobs == 1 || count <= 1) {
            for (std::size_t i = 0 ; i < count ; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        for (unsigned t = 0 ; t < std::min<std::size_t>(jobs, count) ; ++t)
            workers.emplace_back([&] {
                try {
                    for (std::size_t i ; (i = next++) < count ; )
                        body(i);
                }
                catch (...) {
                    std::lock_guard<std::mutex> guard(failure_mutex);
                    if (! failure)
                        failure = std::current_exception();
                    next = count;
                }
            });
        for (auto & w : workers)
            w.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    /// Keeps the smallest key published by any worker; workers can consult
    /// bound() to skip work that cannot beat it.
    template <typename Key_, typename Value_>
    class MinimumReducer
    {
        private:
            std::mutex _mutex;
            bool _have = false;
            Key_ _key{};
            Value_ _value{};
            std::atomic<std::size_t> _bound_hint;

        public:
            explicit MinimumReducer(std::size_t no_bound) : _bound_hint(no_bound) { }

            auto publish(const Key_ & key, Value_ value, std::size_t hint) -> void
            {
                std::lock_guard<std::mutex> guard(_mutex);
                if (! _have || key < _key) {
                    _have = true;
                    _key = key;
                    _value = std::move(value);
                    std::size_t cur = _bound_hint.load();
                    while (hint < cur && ! _bound_hint.compare_exchange_weak(cur, hint))
                        ;
                }
            }

            auto bound() const -> std::size_t { return _bound_hint.load(); }
            auto have() const -> bool { return _have; }
            auto value() const -> const Value_ & { return _value; }
    };
}
