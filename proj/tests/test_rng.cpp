#include <doctest.h>

#include <cmath>
#include <set>

#include "swimfollow/rng.hpp"

using namespace swimfollow;

TEST_SUITE("rng") {

TEST_CASE("substreams are independent and reproducible") {
    Rng a = Rng::substream(42, "noise", 3);
    Rng b = Rng::substream(42, "noise", 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = Rng::substream(42, "noise", 4);
    Rng d = Rng::substream(42, "paths", 3);
    Rng e = Rng::substream(43, "noise", 3);
    Rng f = Rng::substream(42, "noise", 3);
    std::set<std::uint64_t> firsts{c.next_u64(), d.next_u64(), e.next_u64(), f.next_u64()};
    CHECK(firsts.size() == 4);
}

TEST_CASE("uniform stays in range") {
    Rng rng = Rng::substream(1, "u", 0);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        const double y = rng.uniform(-3.0, 5.0);
        CHECK(y >= -3.0);
        CHECK(y < 5.0);
    }
}

TEST_CASE("uniform_index covers the range") {
    Rng rng = Rng::substream(2, "idx", 0);
    std::set<std::size_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(rng.uniform_index(7));
    CHECK(seen.size() == 7);
    CHECK(*seen.rbegin() == 6);
}

TEST_CASE("gauss has sane moments") {
    Rng rng = Rng::substream(3, "g", 0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gauss();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(std::fabs(var - 1.0) < 0.02);
}

}
