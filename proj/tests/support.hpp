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

// Test support: deterministic generators and independent oracles. The
// oracles are deliberately written in the most literal style possible and
// never call into the code paths they check.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "svcrypt/container.hpp"

namespace testsup {

inline std::string corpus_dir() {
    return std::string(SVCRYPT_SOURCE_DIR) + "/corpus";
}

// ---- deterministic content -------------------------------------------------

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline svcrypt::Bytes random_bytes(std::mt19937_64& g, std::size_t n) {
    svcrypt::Bytes out(n);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(g());
    return out;
}

/// Textured frame: smooth field + noise, looks vaguely like natural content.
inline svcrypt::Bytes textured_frame(std::mt19937_64& g, int w, int h) {
    svcrypt::Bytes frame(static_cast<std::size_t>(w) * h);
    const double p1 = std::uniform_real_distribution<double>(0, 6.28)(g);
    const double p2 = std::uniform_real_distribution<double>(0, 6.28)(g);
    std::uniform_int_distribution<int> noise(-12, 12);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double base = 128 + 55 * std::sin(2.1 * 3.14159 * x / w + p1) *
                                          std::cos(1.7 * 3.14159 * y / h + p2);
            int v = static_cast<int>(base) + noise(g);
            frame[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
        }
    return frame;
}

inline svcrypt::RawVideo textured_video(std::uint64_t seed, int w, int h, int frames) {
    auto g = rng(seed);
    svcrypt::RawVideo video;
    video.width = static_cast<std::uint16_t>(w);
    video.height = static_cast<std::uint16_t>(h);
    svcrypt::Bytes base = textured_frame(g, w, h);
    for (int i = 0; i < frames; ++i) {
        svcrypt::Bytes f = base;
        // drift a small bright square around so P frames see motion
        const int cx = 4 + (i * 2) % (w - 12);
        const int cy = 6 + (i * 3) % (h - 14);
        for (int y = cy; y < cy + 6; ++y)
            for (int x = cx; x < cx + 6; ++x)
                f[static_cast<std::size_t>(y) * w + x] =
                    static_cast<std::uint8_t>(std::min(255, f[static_cast<std::size_t>(y) * w + x] + 70));
        video.frames.push_back(std::move(f));
    }
    return video;
}

/// Toroidal pan over a textured base: every P frame sees real motion, so
/// coded streams carry non-zero MVDs.
inline svcrypt::RawVideo panning_video(std::uint64_t seed, int w, int h, int frames,
                                       int vx = 2, int vy = 1) {
    auto g = rng(seed);
    svcrypt::RawVideo video;
    video.width = static_cast<std::uint16_t>(w);
    video.height = static_cast<std::uint16_t>(h);
    const svcrypt::Bytes base = textured_frame(g, w, h);
    for (int t = 0; t < frames; ++t) {
        svcrypt::Bytes f(static_cast<std::size_t>(w) * h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int sx = ((x + t * vx) % w + w) % w;
                const int sy = ((y + t * vy) % h + h) % h;
                f[static_cast<std::size_t>(y) * w + x] =
                    base[static_cast<std::size_t>(sy) * w + sx];
            }
        video.frames.push_back(std::move(f));
    }
    return video;
}

inline svcrypt::AudioTrack tone_audio(std::uint32_t rate, std::size_t samples) {
    svcrypt::AudioTrack track;
    track.sample_rate = rate;
    for (std::size_t i = 0; i < samples; ++i)
        track.samples.push_back(
            static_cast<std::int16_t>(8000 * std::sin(2 * 3.14159 * 440 * i / rate)));
    return track;
}

// ---- DCT oracle -------------------------------------------------------------

/// Direct-summation orthonormal 2-D DCT-II over centered pixel values. No
/// separability, no shared code with the implementation.
inline std::array<double, 64> dct_oracle(const std::array<double, 64>& spatial) {
    std::array<double, 64> out{};
    const double pi = std::acos(-1.0);
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double sum = 0;
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    sum += spatial[y * 8 + x] * std::cos((2 * x + 1) * u * pi / 16.0) *
                           std::cos((2 * y + 1) * v * pi / 16.0);
            const double au = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            const double av = v == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            out[v * 8 + u] = au * av * sum;
        }
    return out;
}

inline std::array<double, 64> idct_oracle(const std::array<double, 64>& coeffs) {
    std::array<double, 64> out{};
    const double pi = std::acos(-1.0);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double sum = 0;
            for (int u = 0; u < 8; ++u)
                for (int v = 0; v < 8; ++v) {
                    const double au = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
                    const double av = v == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
                    sum += au * av * coeffs[v * 8 + u] *
                           std::cos((2 * x + 1) * u * pi / 16.0) *
                           std::cos((2 * y + 1) * v * pi / 16.0);
                }
            out[y * 8 + x] = sum;
        }
    return out;
}

// ---- Exp-Golomb oracle --------------------------------------------------------

/// Bit-string Exp-Golomb encoder: k zeros, '1', then the k low bits of
/// value+1, as a string of '0'/'1'.
inline std::string eg_oracle(std::uint32_t value) {
    const std::uint64_t v = static_cast<std::uint64_t>(value) + 1;
    int k = 0;
    while ((v >> (k + 1)) != 0)
        ++k;
    std::string out(k, '0');
    out.push_back('1');
    for (int i = k - 1; i >= 0; --i)
        out.push_back((v >> i) & 1 ? '1' : '0');
    return out;
}

// ---- motion-search oracle ----------------------------------------------------

/// SAD with the displacement convention: reference sampled at (x-dx, y-dy).
inline long sad_oracle(const svcrypt::Bytes& cur, const svcrypt::Bytes& ref, int w, int h,
                       int x0, int y0, int dx, int dy) {
    long sad = 0;
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            int rx = x0 + x - dx, ry = y0 + y - dy;
            rx = rx < 0 ? 0 : (rx >= w ? w - 1 : rx);
            ry = ry < 0 ? 0 : (ry >= h ? h - 1 : ry);
            sad += std::abs(static_cast<int>(cur[static_cast<std::size_t>(y0 + y) * w + x0 + x]) -
                            static_cast<int>(ref[static_cast<std::size_t>(ry) * w + rx]));
        }
    return sad;
}

// ---- keyed-permutation oracle --------------------------------------------------

/// Standalone sampling-spec oracle: AES-128-CTR words (counter block = tag
/// zero-padded, last 4 bytes big-endian counter), Fisher-Yates downward with
/// rejection sampling. Uses OpenSSL directly.
inline std::vector<std::uint32_t> fisher_yates_oracle(const std::uint8_t seed[16],
                                                      const std::string& tag,
                                                      std::size_t n) {
    std::vector<std::uint8_t> stream;
    std::uint32_t counter = 0;
    auto more = [&]() {
        std::uint8_t block[16] = {};
        for (std::size_t i = 0; i < tag.size() && i < 12; ++i)
            block[i] = static_cast<std::uint8_t>(tag[i]);
        block[12] = static_cast<std::uint8_t>(counter >> 24);
        block[13] = static_cast<std::uint8_t>(counter >> 16);
        block[14] = static_cast<std::uint8_t>(counter >> 8);
        block[15] = static_cast<std::uint8_t>(counter);
        ++counter;
        EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
        EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, seed, nullptr);
        EVP_CIPHER_CTX_set_padding(ctx, 0);
        std::uint8_t out[32];
        int len = 0;
        EVP_EncryptUpdate(ctx, out, &len, block, 16);
        EVP_CIPHER_CTX_free(ctx);
        stream.insert(stream.end(), out, out + 16);
    };
    std::size_t pos = 0;
    auto word = [&]() {
        while (pos + 4 > stream.size())
            more();
        const std::uint32_t w = (static_cast<std::uint32_t>(stream[pos]) << 24) |
                                (static_cast<std::uint32_t>(stream[pos + 1]) << 16) |
                                (static_cast<std::uint32_t>(stream[pos + 2]) << 8) |
                                static_cast<std::uint32_t>(stream[pos + 3]);
        pos += 4;
        return w;
    };

    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::uint64_t bound = i + 1;
        const std::uint64_t limit = (0x100000000ull / bound) * bound;
        std::uint32_t w;
        do {
            w = word();
        } while (w >= limit);
        std::swap(perm[i], perm[w % bound]);
    }
    return perm;
}

} // namespace testsup
