/*
Copyright 2026 the svcrypt authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "svcrypt/dct.hpp"

using namespace svcrypt;

namespace {

PixelBlock random_pixels(std::mt19937_64& g) {
    PixelBlock b{};
    for (auto& p : b)
        p = static_cast<std::uint8_t>(g() % 256);
    return b;
}

} // namespace

TEST_CASE("constant 128 block transforms to all zeros") {
    PixelBlock b{};
    b.fill(128);
    const CoeffBlock f = dct8x8_forward(b);
    for (double c : f)
        CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("constant 255 block: DC is 8*(255-128) = 1016, ACs zero") {
    PixelBlock b{};
    b.fill(255);
    const CoeffBlock f = dct8x8_forward(b);
    CHECK(f[0] == doctest::Approx(1016.0).epsilon(1e-12));
    for (int i = 1; i < 64; ++i)
        CHECK(std::abs(f[i]) < 1e-9);

    CoeffBlock back{};
    back[0] = 1016.0;
    const PixelBlock p = dct8x8_inverse(back);
    for (auto v : p)
        CHECK(v == 255);
}

TEST_CASE("all-zero coefficients invert to a flat 128 block") {
    const PixelBlock p = dct8x8_inverse(CoeffBlock{});
    for (auto v : p)
        CHECK(v == 128);
}

TEST_CASE("forward transform matches the direct-summation oracle under 1e-6") {
    auto g = testsup::rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const PixelBlock px = random_pixels(g);
        std::array<double, 64> centered{};
        for (int i = 0; i < 64; ++i)
            centered[i] = static_cast<double>(px[i]) - 128.0;
        const auto expect = testsup::dct_oracle(centered);
        const CoeffBlock got = dct8x8_forward(px);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(got[i] - expect[i]) < 1e-6);
    }
}

TEST_CASE("inverse transform matches the oracle after identical rounding") {
    auto g = testsup::rng(12);
    std::uniform_real_distribution<double> coeff(-900, 900);
    for (int trial = 0; trial < 50; ++trial) {
        CoeffBlock c{};
        for (auto& v : c)
            v = coeff(g);
        const auto spatial = testsup::idct_oracle(c);
        const PixelBlock got = dct8x8_inverse(c);
        for (int i = 0; i < 64; ++i) {
            long expect = std::lround(spatial[i] + 128.0);
            expect = expect < 0 ? 0 : (expect > 255 ? 255 : expect);
            CHECK(static_cast<long>(got[i]) == expect);
        }
    }
}

TEST_CASE("round trip returns within one step per sample") {
    auto g = testsup::rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const PixelBlock px = random_pixels(g);
        const PixelBlock back = dct8x8_inverse(dct8x8_forward(px));
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(static_cast<int>(px[i]) - static_cast<int>(back[i])) <= 1);
    }
}

TEST_CASE("orthonormality preserves energy") {
    auto g = testsup::rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const PixelBlock px = random_pixels(g);
        const CoeffBlock f = dct8x8_forward(px);
        double pixel_energy = 0, coeff_energy = 0;
        for (int i = 0; i < 64; ++i) {
            const double c = static_cast<double>(px[i]) - 128.0;
            pixel_energy += c * c;
            coeff_energy += f[i] * f[i];
        }
        CHECK(coeff_energy == doctest::Approx(pixel_energy).epsilon(1e-6));
    }
}

TEST_CASE("quantizer formula and zigzag round trip") {
    CoeffBlock c{};
    SUBCASE("zero stays zero at any qp") {
        for (int qp : {1, 4, 31})
            CHECK(quantize_block(c, qp)[0] == 0);
    }
    SUBCASE("1016 at qp=1 quantizes to 508 and dequantizes exactly") {
        c[0] = 1016.0;
        const LevelBlock levels = quantize_block(c, 1);
        CHECK(levels[0] == 508);
        CHECK(dequantize_block(levels, 1)[0] == doctest::Approx(1016.0));
    }
    SUBCASE("10.4 at qp=2 rounds to level 3, dequantizes to 12") {
        c[0] = 10.4;
        const LevelBlock levels = quantize_block(c, 2);
        CHECK(levels[0] == 3);
        CHECK(dequantize_block(levels, 2)[0] == doctest::Approx(12.0));
    }
    SUBCASE("half-away rounding on negatives") {
        c[0] = -10.0; // -10/4 = -2.5 rounds to -3
        CHECK(quantize_block(c, 2)[0] == -3);
    }
    SUBCASE("levels beyond 12 signed bits are rejected") {
        c[0] = 2048 * 2.0 + 2.0;
        CHECK_THROWS_AS(quantize_block(c, 1), FormatError);
    }
}

TEST_CASE("zigzag scan visits every raster index once") {
    std::array<bool, 64> seen{};
    for (int i = 0; i < 64; ++i)
        seen[kZigzag[i]] = true;
    for (bool s : seen)
        CHECK(s);
    // spot checks of the standard order
    CHECK(kZigzag[0] == 0);
    CHECK(kZigzag[1] == 1);
    CHECK(kZigzag[2] == 8);
    CHECK(kZigzag[63] == 63);
}
