#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "llmcost/philox.hpp"

using llmcost::Philox4x32;

TEST_CASE("known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("usable at compile time") {
    constexpr auto b = Philox4x32::block(Philox4x32::Counter{0, 0, 0, 0}, Philox4x32::Key{0, 0});
    static_assert(b[0] == 0x6627e8d5);
}

TEST_CASE("64-bit overload packs words low first") {
    const auto a = Philox4x32::block(0x299f31d0a4093822ULL, 0x0370734413198a2eULL, 0x85a308d3243f6a88ULL);
    CHECK(a == Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("to_unit range") {
    CHECK(Philox4x32::to_unit(0, 0) == 0.0);
    CHECK(Philox4x32::to_unit(0xffffffff, 0xffffffff) < 1.0);
    CHECK(Philox4x32::to_unit(0xffffffff, 0xffffffff) == 1.0 - 0x1.0p-53);
    CHECK(Philox4x32::to_unit(0x80000000, 0) == 0.5);
}

TEST_CASE("uniform moments and distinct blocks") {
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::set<std::uint32_t> firsts;
    for (int i = 0; i < n; ++i) {
        const auto b = Philox4x32::block(42, 7, static_cast<std::uint64_t>(i));
        const double u = Philox4x32::to_unit(b[0], b[1]);
        sum += u;
        sum_sq += u * u;
        firsts.insert(b[0]);
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // 6 sigma bounds for n uniforms
    CHECK(std::abs(mean - 0.5) < 6 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(var - 1.0 / 12.0) < 6 * std::sqrt(1.0 / 180.0 / n));
    // birthday collisions among 2e5 32-bit words number about 5
    CHECK(firsts.size() > static_cast<std::size_t>(n - 50));
}
