#include "toricstab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#ifdef __FAST_MATH__
#error "fast-math breaks compensated summation"
#endif

namespace toricstab {

namespace {

int initial_threads() {
    if (const char* env = std::getenv("TORICSTAB_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

std::atomic<int> g_threads{initial_threads()};

}  // namespace

int thread_count() { return g_threads.load(); }

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_block = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(count, begin + block);
        if (begin < end) pool.emplace_back(run_block, begin, end);
    }
    run_block(0, std::min(count, block));
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.carry_);
}

double compensated_sum(std::span<const double> values) {
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value();
}

}  // namespace toricstab
