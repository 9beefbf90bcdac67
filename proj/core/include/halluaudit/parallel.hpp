#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace halluaudit {

// Applies fn(i) for i in [0, count) across up to `width` threads. Results
// land at their input index, so assembly order never depends on scheduling.
// The first exception wins and is rethrown after all workers join.
template <typename Fn>
void parallel_for_index(std::size_t count, int width, Fn&& fn) {
    if (count == 0) return;
    std::size_t workers = std::min<std::size_t>(count, std::max(1, width));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::once_flag error_once;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::call_once(error_once, [&] { first_error = std::current_exception(); });
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, int width, Fn&& fn)
    -> std::vector<decltype(fn(inputs.front()))> {
    using Out = decltype(fn(inputs.front()));
    std::vector<Out> out(inputs.size());
    parallel_for_index(inputs.size(), width, [&](std::size_t i) { out[i] = fn(inputs[i]); });
    return out;
}

}  // namespace halluaudit
