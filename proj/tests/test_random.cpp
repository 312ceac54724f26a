#include <doctest.h>

#include "flowsim/random.hpp"

using namespace flowsim;

TEST_CASE("same seed replays the same stream") {
    RandomSource a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("different seeds diverge") {
    RandomSource a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 100; ++i) {
        equal += a.next_u64() == b.next_u64();
    }
    CHECK(equal < 5);
}

TEST_CASE("uniform01 stays in [0, 1)") {
    RandomSource rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform respects bounds and degenerate interval") {
    RandomSource rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform(2.0, 5.0);
        CHECK(u >= 2.0);
        CHECK(u < 5.0);
        CHECK(rng.uniform(3.0, 3.0) == 3.0);
    }
}

TEST_CASE("derived streams are order-independent and distinct") {
    const std::uint64_t master = 99;
    CHECK(derive_seed(master, {2, 5}) == derive_seed(master, {2, 5}));
    CHECK(derive_seed(master, {2, 5}) != derive_seed(master, {5, 2}));
    CHECK(derive_seed(master, {0}) != derive_seed(master, {1}));
    CHECK(derive_seed(master, {1, 0}) != derive_seed(master, {0, 1}));
}

TEST_CASE("bernoulli edge probabilities") {
    RandomSource rng(11);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}
