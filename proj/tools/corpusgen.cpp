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

// Deterministic generator for the test corpus: natural-looking grayscale
// clips with a static textured background and small moving objects, so the
// clips carry wide luminance variation, high-frequency detail and modest
// frame-to-frame change. Output is bit-reproducible across runs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "svcrypt/container.hpp"

using namespace svcrypt;
namespace fs = std::filesystem;

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

int hash_noise(int x, int y, std::uint64_t salt, int amp) {
    if (amp == 0)
        return 0;
    const std::uint64_t h = mix64((static_cast<std::uint64_t>(x) << 32) ^
                                  static_cast<std::uint64_t>(y) ^ (salt << 1));
    return static_cast<int>(h % (2 * amp + 1)) - amp;
}

// Natural texture is spatially correlated: mostly low-passed noise with a
// small white high-frequency floor.
int grain(int x, int y, std::uint64_t salt, int amp) {
    if (amp == 0)
        return 0;
    const int smooth = (hash_noise(x, y, salt, amp) + hash_noise(x + 1, y, salt, amp) +
                        hash_noise(x, y + 1, salt, amp) + hash_noise(x + 1, y + 1, salt, amp));
    return smooth / 2 + hash_noise(x, y, salt ^ 0x5a5a, std::max(3, amp / 3));
}

struct Mover {
    double x0, y0;   // start position
    double vx, vy;   // px per frame
    int radius;
    int offset;      // luminance delta
};

// Macroblock-aligned textured patch whose content slides +A, 0, -A, 0 px
// horizontally; the coded stream gets real motion vectors while the patch
// returns to its rest position every other frame.
struct OscPatch {
    int x = -1, y = 0;
    int size = 32;
    int shift = 2;
};

struct ClipSpec {
    std::string name;
    int width, height, frames;
    std::uint64_t salt;
    double base_freq;   // spatial frequency of the luminance field
    int base_amp;       // luminance swing of the field
    int grain_amp;      // static texture amplitude
    std::vector<Mover> movers;
    std::uint32_t audio_rate; // 0 = no audio
    std::vector<int> scene_cut_frames; // frames rendered from an alternate scene
    OscPatch patch;
};

int base_field(const ClipSpec& c, int x, int y, std::uint64_t salt) {
    const double fx = c.base_freq * 2.0 * M_PI / c.width;
    const double fy = c.base_freq * 2.0 * M_PI / c.height;
    const double p1 = static_cast<double>(mix64(salt) % 628) / 100.0;
    const double p2 = static_cast<double>(mix64(salt + 1) % 628) / 100.0;
    const double v = std::sin(fx * x + p1) * std::cos(fy * y + p2) +
                     0.45 * std::sin(2.3 * fx * x + 1.7 * fy * y + p2) +
                     0.3 * std::cos(0.7 * fx * (x + y) + p1);
    // soft contrast curve: pushes values toward the extremes the way
    // hard-lit scenes do, without clipping
    const double shaped = std::tanh(1.35 * v) / std::tanh(1.35 * 1.75);
    return 128 + static_cast<int>(c.base_amp * shaped);
}

Bytes render_frame(const ClipSpec& c, int t) {
    std::uint64_t salt = c.salt;
    for (std::size_t k = 0; k < c.scene_cut_frames.size(); ++k)
        if (t >= c.scene_cut_frames[k])
            salt = c.salt + 1000 * (k + 1);

    Bytes frame(static_cast<std::size_t>(c.width) * c.height);
    for (int y = 0; y < c.height; ++y)
        for (int x = 0; x < c.width; ++x) {
            int v = base_field(c, x, y, salt) + grain(x, y, salt, c.grain_amp);
            frame[static_cast<std::size_t>(y) * c.width + x] =
                static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
        }

    if (salt != c.salt)
        return frame; // cut scenes are object-free stills

    if (c.patch.x >= 0) {
        static const int kPhase[4] = {0, 1, 0, -1};
        const int dx = kPhase[t % 4] * c.patch.shift;
        for (int y = c.patch.y; y < c.patch.y + c.patch.size; ++y)
            for (int x = c.patch.x; x < c.patch.x + c.patch.size; ++x) {
                int v = base_field(c, x, y, salt) +
                        grain(x - dx, y, salt ^ 0x9c9c, c.grain_amp + 12) + 14;
                frame[static_cast<std::size_t>(y) * c.width + x] =
                    static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
            }
    }

    for (const Mover& m : c.movers) {
        // triangle-wave bounce inside the frame margins
        auto bounce = [](double start, double vel, int t_, int lo, int hi) {
            const double span = hi - lo;
            double pos = start - lo + vel * t_;
            pos = std::fmod(pos, 2 * span);
            if (pos < 0)
                pos += 2 * span;
            return lo + (pos <= span ? pos : 2 * span - pos);
        };
        const int cx = static_cast<int>(bounce(m.x0, m.vx, t, m.radius + 1, c.width - m.radius - 2));
        const int cy = static_cast<int>(bounce(m.y0, m.vy, t, m.radius + 1, c.height - m.radius - 2));
        for (int y = cy - m.radius; y <= cy + m.radius; ++y)
            for (int x = cx - m.radius; x <= cx + m.radius; ++x) {
                if (x < 0 || y < 0 || x >= c.width || y >= c.height)
                    continue;
                const int dx = x - cx, dy = y - cy;
                if (dx * dx + dy * dy > m.radius * m.radius)
                    continue;
                const std::size_t i = static_cast<std::size_t>(y) * c.width + x;
                int v = frame[i] + m.offset;
                frame[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
            }
    }
    return frame;
}

AudioTrack render_audio(const ClipSpec& c) {
    AudioTrack track;
    if (c.audio_rate == 0)
        return track;
    track.sample_rate = c.audio_rate;
    const std::size_t n = c.audio_rate; // one second
    track.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / c.audio_rate;
        double v = 6000.0 * std::sin(2 * M_PI * 440.0 * t) +
                   2500.0 * std::sin(2 * M_PI * 97.0 * t + 1.1) +
                   800.0 * std::sin(2 * M_PI * 1730.0 * t);
        v += static_cast<double>(grain(static_cast<int>(i), 7, c.salt, 300));
        track.samples.push_back(static_cast<std::int16_t>(v));
    }
    return track;
}

void write_clip(const fs::path& dir, const ClipSpec& spec) {
    fs::create_directories(dir);
    char name[32];
    for (int t = 0; t < spec.frames; ++t) {
        std::snprintf(name, sizeof(name), "frame_%03d.pgm", t);
        PgmImage img{static_cast<std::uint16_t>(spec.width),
                     static_cast<std::uint16_t>(spec.height), render_frame(spec, t)};
        write_file_atomic((dir / name).string(), write_pgm(img));
    }
    const AudioTrack audio = render_audio(spec);
    if (!audio.empty())
        write_file_atomic((dir / "audio.wav").string(), write_wav(audio));
    std::printf("%s: %dx%d, %d frames%s\n", spec.name.c_str(), spec.width, spec.height,
                spec.frames, spec.audio_rate ? ", 1s audio" : "");
}

} // namespace

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "corpus";

    const std::vector<ClipSpec> clips = {
        {"clip1", 64, 64, 24, 11, 1.8, 84, 12, {{14, 18, 1.0, 0.7, 3, 68}}, 8000, {}, {}},
        {"clip2", 64, 64, 32, 22, 1.5, 78, 26, {}, 8000, {30, 31}, {}},
        {"clip3", 96, 96, 16, 33, 2.2, 82, 13,
         {{20, 30, 1.2, 0.9, 4, 62}, {70, 60, -0.8, 1.1, 4, -57}}, 0, {}, {}},
        {"clip4", 96, 96, 24, 44, 1.4, 88, 15, {{48, 40, 2.0, 1.4, 4, 72}}, 16000, {}, {}},
        {"clip5", 128, 128, 16, 55, 2.0, 80, 12, {{30, 90, 1.1, -0.8, 5, 64}}, 0, {}, {}},
        {"clip6", 128, 128, 20, 66, 2.6, 85, 14, {{64, 40, 0.9, 1.0, 6, -66}}, 8000, {},
         {64, 48, 32, 2}},
        {"clip7", 80, 80, 24, 77, 1.7, 81, 13, {{25, 50, 1.3, -0.6, 3, 70}}, 0, {}, {}},
        {"clip8", 64, 64, 16, 88, 2.4, 90, 18, {{40, 22, -1.1, 0.8, 3, -72}}, 8000, {}, {}},
    };

    for (const ClipSpec& spec : clips)
        write_clip(fs::path(out) / spec.name, spec);
    return 0;
}
