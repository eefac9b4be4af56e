#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

#include "crnkit/rng.hpp"

using namespace crnkit;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the published test suite of the generator.
    auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("identical seed and stream reproduce the sequence") {
    Philox4x32 a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("streams with the same seed are distinct") {
    Philox4x32 a(42, 0), b(42, 1);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a() == b()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("uniform outputs live in the right intervals") {
    Philox4x32 rng(3, 0);
    double lo = 1.0, hi = 0.0, mean = 0.0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        mean += u;
        double v = rng.uniform_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    mean /= n;
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(mean == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("exponential holding times pass a KS test for most seeds") {
    // Kolmogorov-Smirnov against Exponential(rate) at significance 0.01,
    // n = 10^4 samples; at least 9 of 10 fixed seeds must pass.
    const double rate = 2.5;
    const int n = 10'000;
    const double critical = 1.62762 / (std::sqrt(double(n)) + 0.12 + 0.11 / std::sqrt(double(n)));
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Philox4x32 rng(seed, 0);
        std::vector<double> samples(n);
        for (auto& s : samples) s = rng.exponential(rate);
        std::sort(samples.begin(), samples.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            double cdf = 1.0 - std::exp(-rate * samples[i]);
            d = std::max(d, std::abs(cdf - double(i) / n));
            d = std::max(d, std::abs(double(i + 1) / n - cdf));
        }
        if (d < critical) ++passed;
    }
    CHECK(passed >= 9);
}
