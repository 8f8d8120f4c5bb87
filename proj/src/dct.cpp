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

#include "svcrypt/dct.hpp"

#include <cmath>

namespace svcrypt {

const std::array<std::uint8_t, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

namespace {

// Orthonormal DCT-II basis: basis[u][x] = a(u) * cos((2x+1) u pi / 16).
struct Basis {
    double m[8][8];
    Basis() {
        const double pi = std::acos(-1.0);
        for (int u = 0; u < 8; ++u) {
            const double a = (u == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int x = 0; x < 8; ++x)
                m[u][x] = a * std::cos((2 * x + 1) * u * pi / 16.0);
        }
    }
};

const Basis& basis() {
    static const Basis b;
    return b;
}

// F = C f C^T, computed separably: rows first, then columns.
CoeffBlock transform2d(const double in[64]) {
    const auto& c = basis().m;
    double tmp[64];
    for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
            double s = 0;
            for (int x = 0; x < 8; ++x)
                s += c[u][x] * in[y * 8 + x];
            tmp[y * 8 + u] = s;
        }
    CoeffBlock out{};
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int y = 0; y < 8; ++y)
                s += c[v][y] * tmp[y * 8 + u];
            out[v * 8 + u] = s;
        }
    return out;
}

// f = C^T F C
void inverse2d(const CoeffBlock& in, double out[64]) {
    const auto& c = basis().m;
    double tmp[64];
    for (int v = 0; v < 8; ++v)
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int u = 0; u < 8; ++u)
                s += c[u][x] * in[v * 8 + u];
            tmp[v * 8 + x] = s;
        }
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) {
            double s = 0;
            for (int v = 0; v < 8; ++v)
                s += c[v][y] * tmp[v * 8 + x];
            out[y * 8 + x] = s;
        }
}

} // namespace

long round_half_away(double v) {
    return std::lround(v); // lround rounds halfway cases away from zero
}

CoeffBlock dct8x8_forward(const PixelBlock& pixels) {
    double centered[64];
    for (int i = 0; i < 64; ++i)
        centered[i] = static_cast<double>(pixels[i]) - 128.0;
    return transform2d(centered);
}

PixelBlock dct8x8_inverse(const CoeffBlock& coeffs) {
    double spatial[64];
    inverse2d(coeffs, spatial);
    PixelBlock out{};
    for (int i = 0; i < 64; ++i) {
        long v = round_half_away(spatial[i] + 128.0);
        if (v < 0) v = 0;
        if (v > 255) v = 255;
        out[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

CoeffBlock dct8x8_forward_residual(const ResidualBlock& residual) {
    double in[64];
    for (int i = 0; i < 64; ++i)
        in[i] = static_cast<double>(residual[i]);
    return transform2d(in);
}

ResidualBlock dct8x8_inverse_residual(const CoeffBlock& coeffs) {
    double spatial[64];
    inverse2d(coeffs, spatial);
    ResidualBlock out{};
    for (int i = 0; i < 64; ++i) {
        long v = round_half_away(spatial[i]);
        if (v < -255) v = -255;
        if (v > 255) v = 255;
        out[i] = static_cast<std::int16_t>(v);
    }
    return out;
}

LevelBlock quantize_block(const CoeffBlock& coeffs, int qp) {
    if (qp < 1 || qp > 31)
        throw UsageError("qp out of range 1..31");
    const double step = 2.0 * qp;
    LevelBlock levels{};
    for (int i = 0; i < 64; ++i) {
        const long level = round_half_away(coeffs[kZigzag[i]] / step);
        if (level < -2047 || level > 2047)
            throw FormatError("quantized level overflows 12 signed bits");
        levels[i] = static_cast<std::int16_t>(level);
    }
    return levels;
}

CoeffBlock dequantize_block(const LevelBlock& levels, int qp) {
    if (qp < 1 || qp > 31)
        throw UsageError("qp out of range 1..31");
    const double step = 2.0 * qp;
    CoeffBlock coeffs{};
    for (int i = 0; i < 64; ++i)
        coeffs[kZigzag[i]] = levels[i] * step;
    return coeffs;
}

} // namespace svcrypt
