#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace toricstab {

/// Worker count used by parallel_for. Defaults to TORICSTAB_THREADS, else 1.
int thread_count();
void set_thread_count(int threads);

/// Runs fn(i) for i in [0, count) on up to thread_count() threads. Work is
/// split into contiguous blocks; callers write results into per-index slots so
/// the outcome does not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x);
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    void merge(const CompensatedSum& other);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Compensated sum of values in index order.
double compensated_sum(std::span<const double> values);

}  // namespace toricstab
