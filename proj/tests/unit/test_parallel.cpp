#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "toricstab/parallel.hpp"

using namespace toricstab;
using namespace toricstab::testing;

TEST_CASE("compensated sum recovers small terms") {
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(v) == 2.0);
    CompensatedSum a, b;
    a.add(1e16);
    a.add(1.0);
    b.add(-1e16);
    b.add(1.0);
    a.merge(b);
    CHECK(a.value() == 2.0);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    for (int t : {1, 3, 8}) {
        ThreadScope scope(t);
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
        for (int h : hits) CHECK(h == 1);
        CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                            if (i == 37) throw std::runtime_error("boom");
                        }),
                        std::runtime_error);
    }
    ThreadScope scope(4);
    parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
    set_thread_count(0);
    CHECK(thread_count() == 1);
}
