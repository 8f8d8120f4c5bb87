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

#include "svcrypt/codec.hpp"

#include <algorithm>
#include <cstdlib>

#include "svcrypt/bitio.hpp"

namespace svcrypt {

namespace {

constexpr unsigned kMaxLevelInfoBits = 11; // levels stay within 12 signed bits
constexpr unsigned kMaxMvdInfoBits = 6;
constexpr unsigned kMaxRunInfoBits = 6; // run codes are 1..63, EOB is 0

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline std::uint8_t ref_pixel(ByteView ref, int w, int h, int x, int y) {
    return ref[static_cast<std::size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
}

std::uint32_t mb_count_for(std::uint16_t width, std::uint16_t height) {
    if (width < 16 || height < 16 || width % 16 || height % 16)
        throw FormatError("dimensions must be multiples of 16, at least 16x16");
    const std::uint32_t mbs = (width / 16u) * (height / 16u);
    if (mbs > 0xffff) // unit indices are 16-bit
        throw FormatError("frame has too many macroblocks");
    return mbs;
}

// Offsets of the four 8x8 luma blocks inside a macroblock.
constexpr int kBlockOffset[4][2] = {{0, 0}, {8, 0}, {0, 8}, {8, 8}};

PixelBlock gather_block(ByteView frame, int w, int x0, int y0) {
    PixelBlock out{};
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            out[y * 8 + x] = frame[static_cast<std::size_t>(y0 + y) * w + x0 + x];
    return out;
}

void scatter_block(Bytes& frame, int w, int x0, int y0, const PixelBlock& block) {
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            frame[static_cast<std::size_t>(y0 + y) * w + x0 + x] = block[y * 8 + x];
}

// ---- bitstream symbols ----------------------------------------------------

void put_signed_eg(BitWriter& w, int value) {
    const std::uint32_t mag = static_cast<std::uint32_t>(std::abs(value));
    w.put_ue(mag);
    if (mag > 0)
        w.put_bit(value < 0);
}

struct SpannedUe {
    std::uint32_t value;
    std::uint32_t suffix_offset;
    std::uint16_t suffix_bits;
};

SpannedUe read_ue_spanned(BitReader& r, unsigned max_info_bits) {
    unsigned k = 0;
    while (r.get_bit() == 0) {
        if (++k > max_info_bits)
            throw FormatError("exp-golomb prefix overrun");
    }
    const std::uint32_t offset = static_cast<std::uint32_t>(r.tell());
    const std::uint32_t info = r.get_bits(k);
    return {static_cast<std::uint32_t>((1ull << k) - 1 + info), offset,
            static_cast<std::uint16_t>(k)};
}

// Shared syntax walker. Fills whichever outputs are non-null, so the decoder
// and the codeword indexer cannot drift apart.
void walk_frame(ByteView payload, std::uint16_t width, std::uint16_t height,
                FrameSyntax* syntax, FrameStructure* structure) {
    if (payload.size() < 2)
        throw FormatError("payload shorter than frame header");
    if (payload[0] > 1)
        throw FormatError("unknown frame type");
    const FrameType type = static_cast<FrameType>(payload[0]);
    const int qp = payload[1];
    if (qp < 1 || qp > 31)
        throw FormatError("qp out of range");
    const std::uint32_t mbs = mb_count_for(width, height);

    if (syntax) {
        syntax->type = type;
        syntax->qp = qp;
        syntax->width = width;
        syntax->height = height;
        syntax->mbs.resize(mbs);
    }
    if (structure) {
        structure->type = type;
        structure->qp = qp;
        structure->units.resize(mbs);
    }

    BitReader r(payload);
    r.get_bits(16); // frame header

    auto add_span = [&](std::uint32_t offset, std::uint16_t bits, CwClass cls,
                        std::uint32_t unit) {
        if (structure && bits > 0)
            structure->codewords.spans.push_back(
                {offset, bits, cls, static_cast<std::uint16_t>(unit)});
    };

    for (std::uint32_t u = 0; u < mbs; ++u) {
        const std::uint32_t unit_begin = static_cast<std::uint32_t>(r.tell() / 8);
        MacroblockSyntax mb{};

        if (type == FrameType::P) {
            for (int c = 0; c < 2; ++c) {
                const SpannedUe mag = read_ue_spanned(r, kMaxMvdInfoBits);
                add_span(mag.suffix_offset, mag.suffix_bits, CwClass::MvdSuffix, u);
                int v = static_cast<int>(mag.value);
                if (mag.value > 0) {
                    const std::uint32_t sign_off = static_cast<std::uint32_t>(r.tell());
                    if (r.get_bit())
                        v = -v;
                    add_span(sign_off, 1, CwClass::SignMvd, u);
                }
                (c == 0 ? mb.mvd.dx : mb.mvd.dy) = v;
            }
        }

        // Non-intra DC levels group with the AC classes.
        const CwClass dc_suffix_cls =
            type == FrameType::I ? CwClass::IntraDcSuffix : CwClass::AcLevelSuffix;
        const CwClass dc_sign_cls =
            type == FrameType::I ? CwClass::SignIntraDc : CwClass::SignAc;

        for (int b = 0; b < 4; ++b) {
            LevelBlock levels{};

            const SpannedUe dc = read_ue_spanned(r, kMaxLevelInfoBits);
            add_span(dc.suffix_offset, dc.suffix_bits, dc_suffix_cls, u);
            int dc_level = static_cast<int>(dc.value);
            if (dc.value > 0) {
                const std::uint32_t sign_off = static_cast<std::uint32_t>(r.tell());
                if (r.get_bit())
                    dc_level = -dc_level;
                add_span(sign_off, 1, dc_sign_cls, u);
            }
            levels[0] = static_cast<std::int16_t>(dc_level);

            int idx = 1;
            for (;;) {
                const std::uint32_t run_code = r.get_ue(kMaxRunInfoBits);
                if (run_code == 0)
                    break; // end of block
                if (run_code > 63)
                    throw FormatError("run code out of range");
                idx += static_cast<int>(run_code) - 1;
                if (idx > 63)
                    throw FormatError("coefficient run overflows block");
                const SpannedUe lvl = read_ue_spanned(r, kMaxLevelInfoBits);
                add_span(lvl.suffix_offset, lvl.suffix_bits, CwClass::AcLevelSuffix, u);
                int level = static_cast<int>(lvl.value) + 1;
                const std::uint32_t sign_off = static_cast<std::uint32_t>(r.tell());
                if (r.get_bit())
                    level = -level;
                add_span(sign_off, 1, CwClass::SignAc, u);
                levels[idx] = static_cast<std::int16_t>(level);
                ++idx;
                if (idx > 63) {
                    // block full; only EOB may follow
                    if (r.get_ue(kMaxRunInfoBits) != 0)
                        throw FormatError("missing end-of-block");
                    break;
                }
            }
            if (syntax)
                syntax->mbs[u].blocks[b] = levels;
        }

        if (syntax && type == FrameType::P)
            syntax->mbs[u].mvd = mb.mvd;

        r.skip_to_byte();
        if (structure)
            structure->units[u] = {unit_begin, static_cast<std::uint32_t>(r.tell() / 8)};
    }

    if (r.tell() != 8 * payload.size())
        throw FormatError("trailing data after last macroblock");
}

} // namespace

std::uint64_t CodewordMap::total_bits(CwMask classes, std::uint32_t unit_limit) const {
    std::uint64_t total = 0;
    for (const CodewordSpan& s : spans)
        if ((classes & mask_of(s.cls)) && s.unit < unit_limit)
            total += s.bit_width;
    return total;
}

MotionVector motion_search(ByteView current, ByteView reference, std::uint16_t width,
                           std::uint16_t height, int mb_x, int mb_y, int radius) {
    // The vector is the content displacement: prediction samples the
    // reference at (x - dx, y - dy).
    const int x0 = mb_x * 16;
    const int y0 = mb_y * 16;
    MotionVector best{0, 0};
    long best_sad = -1;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            long sad = 0;
            for (int y = 0; y < 16; ++y)
                for (int x = 0; x < 16; ++x) {
                    const int cur = current[static_cast<std::size_t>(y0 + y) * width + x0 + x];
                    const int ref = ref_pixel(reference, width, height, x0 + x - dx, y0 + y - dy);
                    sad += std::abs(cur - ref);
                }
            if (best_sad < 0)
                best_sad = sad, best = {dx, dy};
            else {
                const auto key = std::make_tuple(sad, std::abs(dx) + std::abs(dy), dy, dx);
                const auto best_key = std::make_tuple(best_sad, std::abs(best.dx) + std::abs(best.dy),
                                                      best.dy, best.dx);
                if (key < best_key)
                    best_sad = sad, best = {dx, dy};
            }
        }
    }
    return best;
}

FrameSyntax analyze_frame(ByteView frame, const Bytes* reference, std::uint16_t width,
                          std::uint16_t height, int qp, FrameType type) {
    if (qp < 1 || qp > 31)
        throw UsageError("qp out of range 1..31");
    if (type == FrameType::P && reference == nullptr)
        throw UsageError("P frame requires a reference");
    const std::uint32_t mbs = mb_count_for(width, height);
    const int mb_w = width / 16;

    FrameSyntax syntax;
    syntax.type = type;
    syntax.qp = qp;
    syntax.width = width;
    syntax.height = height;
    syntax.mbs.resize(mbs);

    for (std::uint32_t u = 0; u < mbs; ++u) {
        const int mb_x = static_cast<int>(u) % mb_w;
        const int mb_y = static_cast<int>(u) / mb_w;
        MacroblockSyntax& mb = syntax.mbs[u];

        if (type == FrameType::I) {
            for (int b = 0; b < 4; ++b) {
                const PixelBlock px = gather_block(frame, width, mb_x * 16 + kBlockOffset[b][0],
                                                   mb_y * 16 + kBlockOffset[b][1]);
                mb.blocks[b] = quantize_block(dct8x8_forward(px), qp);
            }
        } else {
            const MotionVector mv =
                motion_search(frame, *reference, width, height, mb_x, mb_y);
            mb.mvd = mv; // predictor is always (0,0)
            for (int b = 0; b < 4; ++b) {
                const int bx = mb_x * 16 + kBlockOffset[b][0];
                const int by = mb_y * 16 + kBlockOffset[b][1];
                ResidualBlock res{};
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x) {
                        const int cur = frame[static_cast<std::size_t>(by + y) * width + bx + x];
                        const int pred = ref_pixel(*reference, width, height, bx + x - mv.dx,
                                                   by + y - mv.dy);
                        res[y * 8 + x] = static_cast<std::int16_t>(cur - pred);
                    }
                mb.blocks[b] = quantize_block(dct8x8_forward_residual(res), qp);
            }
        }
    }
    return syntax;
}

Bytes encode_frame_syntax(const FrameSyntax& syntax) {
    if (syntax.qp < 1 || syntax.qp > 31)
        throw UsageError("qp out of range 1..31");
    if (syntax.mbs.size() != mb_count_for(syntax.width, syntax.height))
        throw FormatError("macroblock count does not match dimensions");

    BitWriter w;
    w.put_bits(static_cast<std::uint32_t>(syntax.type), 8);
    w.put_bits(static_cast<std::uint32_t>(syntax.qp), 8);

    for (const MacroblockSyntax& mb : syntax.mbs) {
        if (syntax.type == FrameType::P) {
            put_signed_eg(w, mb.mvd.dx);
            put_signed_eg(w, mb.mvd.dy);
        }
        for (const LevelBlock& levels : mb.blocks) {
            put_signed_eg(w, levels[0]);
            int last = 0; // zigzag index of the previous coded coefficient
            for (int idx = 1; idx < 64; ++idx) {
                if (levels[idx] == 0)
                    continue;
                const int run = idx - last - 1;
                w.put_ue(static_cast<std::uint32_t>(run + 1));
                const std::uint32_t mag = static_cast<std::uint32_t>(std::abs(levels[idx]));
                w.put_ue(mag - 1);
                w.put_bit(levels[idx] < 0);
                last = idx;
            }
            w.put_ue(0); // end of block
        }
        w.align();
    }
    return w.take();
}

FrameSyntax parse_frame_syntax(ByteView payload, std::uint16_t width, std::uint16_t height) {
    FrameSyntax syntax;
    walk_frame(payload, width, height, &syntax, nullptr);
    return syntax;
}

FrameStructure parse_frame_structure(ByteView payload, std::uint16_t width,
                                     std::uint16_t height) {
    FrameStructure structure;
    walk_frame(payload, width, height, nullptr, &structure);
    return structure;
}

Bytes reconstruct_frame(const FrameSyntax& syntax, const Bytes* reference) {
    const int w = syntax.width;
    const int h = syntax.height;
    const int mb_w = w / 16;
    Bytes frame(static_cast<std::size_t>(w) * h);

    for (std::size_t u = 0; u < syntax.mbs.size(); ++u) {
        const MacroblockSyntax& mb = syntax.mbs[u];
        const int mb_x = static_cast<int>(u) % mb_w;
        const int mb_y = static_cast<int>(u) / mb_w;
        for (int b = 0; b < 4; ++b) {
            const int bx = mb_x * 16 + kBlockOffset[b][0];
            const int by = mb_y * 16 + kBlockOffset[b][1];
            const CoeffBlock coeffs = dequantize_block(mb.blocks[b], syntax.qp);
            if (syntax.type == FrameType::I) {
                scatter_block(frame, w, bx, by, dct8x8_inverse(coeffs));
            } else {
                const ResidualBlock res = dct8x8_inverse_residual(coeffs);
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x) {
                        const int pred =
                            reference ? ref_pixel(*reference, w, h, bx + x - mb.mvd.dx,
                                                  by + y - mb.mvd.dy)
                                      : 128;
                        frame[static_cast<std::size_t>(by + y) * w + bx + x] =
                            static_cast<std::uint8_t>(clampi(pred + res[y * 8 + x], 0, 255));
                    }
            }
        }
    }
    return frame;
}

std::pair<Bytes, CodewordMap> encode_frame(ByteView frame, const Bytes* reference,
                                           std::uint16_t width, std::uint16_t height,
                                           int qp, FrameType type) {
    Bytes payload = encode_frame_syntax(analyze_frame(frame, reference, width, height, qp, type));
    CodewordMap map = parse_frame_structure(payload, width, height).codewords;
    return {std::move(payload), std::move(map)};
}

Bytes decode_frame(ByteView payload, std::uint16_t width, std::uint16_t height,
                   const Bytes* reference) {
    return reconstruct_frame(parse_frame_syntax(payload, width, height), reference);
}

BitVec extract_sensitive_bits(ByteView payload, std::uint16_t width, std::uint16_t height,
                              CwMask classes, std::uint32_t unit_limit) {
    const FrameStructure st = parse_frame_structure(payload, width, height);
    BitVec out;
    for (const CodewordSpan& s : st.codewords.spans) {
        if (!(classes & mask_of(s.cls)) || s.unit >= unit_limit)
            continue;
        for (std::uint16_t b = 0; b < s.bit_width; ++b) {
            if (out.nbits % 8 == 0)
                out.data.push_back(0);
            if (get_bit_at(payload, s.bit_offset + b))
                out.data[out.nbits / 8] |= static_cast<std::uint8_t>(0x80u >> (out.nbits % 8));
            ++out.nbits;
        }
    }
    return out;
}

Bytes patch_sensitive_bits(ByteView payload, std::uint16_t width, std::uint16_t height,
                           CwMask classes, const BitVec& bits, std::uint32_t unit_limit) {
    const FrameStructure st = parse_frame_structure(payload, width, height);
    if (st.codewords.total_bits(classes, unit_limit) != bits.nbits)
        throw UsageError("bit vector width does not match selected spans");
    Bytes out(payload.begin(), payload.end());
    std::uint64_t pos = 0;
    for (const CodewordSpan& s : st.codewords.spans) {
        if (!(classes & mask_of(s.cls)) || s.unit >= unit_limit)
            continue;
        for (std::uint16_t b = 0; b < s.bit_width; ++b, ++pos)
            set_bit_at(out, s.bit_offset + b, get_bit_at(bits.data, pos));
    }
    return out;
}

SvcFile encode_video(const RawVideo& video, const AudioTrack& audio, CodecId codec,
                     int qp, int gop) {
    video.validate();
    if (video.frames.empty())
        throw UsageError("no frames to encode");
    if (gop < 1)
        throw UsageError("gop must be at least 1");

    SvcFile file;
    file.header.codec_id = codec;
    file.header.width = video.width;
    file.header.height = video.height;
    file.header.fps_num = video.fps_num;
    file.header.fps_den = video.fps_den;
    if (!audio.empty()) {
        file.header.sample_rate = audio.sample_rate;
        file.header.channels = 1;
    }

    const std::uint32_t n = static_cast<std::uint32_t>(video.frames.size());
    std::vector<Bytes> audio_chunks(n);
    if (!audio.empty())
        audio_chunks = partition_audio(audio, n);

    Bytes recon;
    for (std::uint32_t i = 0; i < n; ++i) {
        FrameRecord rec;
        rec.original_index = i;
        if (codec == CodecId::Raw) {
            rec.video = video.frames[i];
        } else {
            const FrameType type =
                (i % static_cast<std::uint32_t>(gop) == 0) ? FrameType::I : FrameType::P;
            const FrameSyntax syntax = analyze_frame(
                video.frames[i], type == FrameType::P ? &recon : nullptr, video.width,
                video.height, qp, type);
            rec.video = encode_frame_syntax(syntax);
            recon = reconstruct_frame(syntax, type == FrameType::P ? &recon : nullptr);
        }
        rec.audio = std::move(audio_chunks[i]);
        file.records.push_back(std::move(rec));
    }
    return file;
}

std::pair<RawVideo, AudioTrack> decode_video(const SvcFile& file) {
    const SvcHeader& h = file.header;
    RawVideo video;
    video.width = h.width;
    video.height = h.height;
    video.fps_num = h.fps_num;
    video.fps_den = h.fps_den;

    const std::size_t plane = static_cast<std::size_t>(h.width) * h.height;
    Bytes recon;
    for (const FrameRecord& rec : file.records) {
        if (h.codec_id == CodecId::Raw) {
            if (rec.video.size() != plane)
                throw FormatError("raw payload size mismatch");
            recon = rec.video;
        } else {
            recon = decode_frame(rec.video, h.width, h.height,
                                 recon.empty() ? nullptr : &recon);
        }
        video.frames.push_back(recon);
    }

    AudioTrack audio;
    if (h.channels == 1) {
        std::vector<const Bytes*> chunks;
        chunks.reserve(file.records.size());
        for (const FrameRecord& rec : file.records)
            chunks.push_back(&rec.audio);
        audio = join_audio(chunks, h.sample_rate);
    }
    return {std::move(video), std::move(audio)};
}

Bytes decode_frame_at(const SvcFile& file, std::uint32_t index) {
    if (index >= file.records.size())
        throw UsageError("frame index out of range");
    const SvcHeader& h = file.header;
    if (h.codec_id == CodecId::Raw)
        return file.records[index].video;
    Bytes recon;
    for (std::uint32_t i = 0; i <= index; ++i)
        recon = decode_frame(file.records[i].video, h.width, h.height,
                             recon.empty() ? nullptr : &recon);
    return recon;
}

} // namespace svcrypt
