#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "fracback/rng.hpp"

using namespace fracback;

TEST_CASE("xoshiro256** stream from SplitMix64 seeding") {
    // Frozen from an independent Python implementation of both generators.
    Xoshiro256 a(42);
    CHECK(a.next() == 0x15780b2e0c2ec716ULL);
    CHECK(a.next() == 0x6104d9866d113a7eULL);
    CHECK(a.next() == 0xae17533239e499a1ULL);
    CHECK(a.next() == 0xecb8ad4703b360a1ULL);

    Xoshiro256 z(0);
    CHECK(z.next() == 0x99ec5f36cb75f2b4ULL);
    CHECK(z.next() == 0xbf6e1f784956452aULL);
}

TEST_CASE("uniform range") {
    Xoshiro256 g(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = g.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("box-muller pair") {
    GaussianSource g(42);
    CHECK(g.next() == doctest::Approx(-0.303263064678738).epsilon(1e-14));
    CHECK(g.next() == doctest::Approx(0.28846173882942383).epsilon(1e-14));
}

TEST_CASE("gaussian moments") {
    GaussianSource g(2024);
    const int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = g.next();
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("same seed same stream") {
    GaussianSource a(99);
    GaussianSource b(99);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}
