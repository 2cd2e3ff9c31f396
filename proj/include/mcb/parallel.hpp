// parallel.hpp
// Reduction helper for the substate loops. The default policy accumulates
// in index order and is bit-reproducible; the parallel policy splits the
// range into contiguous chunks across threads and adds the chunk partials
// in chunk order, so results may differ from the deterministic mode by
// roundoff (and with the machine's thread count).

#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mcb {

enum class ExecPolicy { deterministic, parallel };

template <typename Fn>
double reduce_indexed(std::int64_t count, ExecPolicy policy, Fn&& fn) {
    if (policy == ExecPolicy::deterministic || count < 2) {
        double sum = 0.0;
        for (std::int64_t i = 0; i < count; ++i) sum += fn(i);
        return sum;
    }

    const unsigned hw = std::thread::hardware_concurrency();
    const std::int64_t workers =
        std::min<std::int64_t>(count, hw == 0 ? 2 : static_cast<std::int64_t>(hw));
    std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            const std::int64_t begin = count * w / workers;
            const std::int64_t end = count * (w + 1) / workers;
            try {
                double sum = 0.0;
                for (std::int64_t i = begin; i < end; ++i) sum += fn(i);
                partial[static_cast<std::size_t>(w)] = sum;
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    double sum = 0.0;
    for (double p : partial) sum += p;
    return sum;
}

} // namespace mcb
