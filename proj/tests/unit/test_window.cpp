#include "doctest.h"
#include "gpor/window.hpp"

using namespace gpor;

TEST_CASE("push appends and reports sizes") {
    WindowBuffer b(3, 2);
    CHECK(b.empty());
    b.push({1.0, 0.0}, 1.0);
    CHECK(b.size() == 1);
    CHECK(b.total_pushed() == 1);
    CHECK_THROWS_AS(b.push({1.0}, 0.0), DimensionMismatch);
}

TEST_CASE("FIFO eviction keeps the most recent pairs in order") {
    WindowBuffer b(3, 1);
    for (int tag = 1; tag <= 4; ++tag) b.push({double(tag)}, double(tag));
    CHECK(b.size() == 3);
    CHECK(b.total_pushed() == 4);
    const auto d = b.as_dataset();
    REQUIRE(d.size() == 3);
    CHECK(d.targets[0] == 2.0);
    CHECK(d.targets[1] == 3.0);
    CHECK(d.targets[2] == 4.0);
    CHECK(b.oldest().second == 2.0);
}

TEST_CASE("capacity ten holding the last ten of twenty-five pushes") {
    WindowBuffer b(10, 1);
    for (int tag = 1; tag <= 25; ++tag) b.push({double(tag)}, double(tag));
    CHECK(b.size() == 10);
    CHECK(b.oldest().second == 16.0);
    const auto d = b.as_dataset();
    for (int i = 0; i < 10; ++i) CHECK(d.targets[i] == double(16 + i));
}

TEST_CASE("dataset snapshot preserves order and excludes evicted pairs") {
    WindowBuffer b(2, 1);
    CHECK(b.as_dataset().size() == 0);
    b.push({1.0}, 10.0);
    b.push({2.0}, 20.0);
    b.push({3.0}, 30.0);
    const auto d = b.as_dataset();
    REQUIRE(d.size() == 2);
    for (double t : d.targets) CHECK(t != 10.0);
    CHECK(d.inputs[0][0] == 2.0);
    CHECK(d.inputs[1][0] == 3.0);
}

TEST_CASE("length always equals min(total_pushed, capacity)") {
    WindowBuffer b(5, 1);
    for (int i = 1; i <= 12; ++i) {
        b.push({double(i)}, 0.0);
        CHECK(b.size() == std::min<std::size_t>(b.total_pushed(), b.capacity()));
    }
}
