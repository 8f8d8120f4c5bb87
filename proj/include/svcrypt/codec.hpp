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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "svcrypt/container.hpp"
#include "svcrypt/dct.hpp"

namespace svcrypt {

// Block-DCT codec with individually addressable codewords. Macroblock units
// are byte-aligned and independently decodable: DC levels are coded absolute
// and the motion-vector predictor is fixed at (0,0), so reordering whole
// units or rewriting the fixed-length code bits never desynchronizes the
// parser. Full syntax reference: docs/bitstream.md.

enum class FrameType : std::uint8_t { I = 0, P = 1 };

/// Classes of in-place rewritable bits. Suffix classes cover the info bits of
/// Exp-Golomb magnitude codes; sign classes cover single sign bits.
enum class CwClass : std::uint8_t {
    IntraDcSuffix = 0,
    AcLevelSuffix = 1,
    MvdSuffix = 2,
    SignIntraDc = 3,
    SignAc = 4,
    SignMvd = 5,
};

using CwMask = std::uint8_t;

constexpr CwMask mask_of(CwClass c) { return static_cast<CwMask>(1u << static_cast<unsigned>(c)); }

constexpr CwMask kAllCodewordClasses = 0x3f;

/// Intra DC suffix+sign, AC and non-intra DC signs, MVD suffix+sign.
constexpr CwMask kPerceptualClasses =
    mask_of(CwClass::IntraDcSuffix) | mask_of(CwClass::SignIntraDc) |
    mask_of(CwClass::SignAc) | mask_of(CwClass::MvdSuffix) | mask_of(CwClass::SignMvd);

struct CodewordSpan {
    std::uint32_t bit_offset = 0; // from the first payload bit
    std::uint16_t bit_width = 0;
    CwClass cls = CwClass::IntraDcSuffix;
    std::uint16_t unit = 0; // owning macroblock, stream order
};

struct CodewordMap {
    std::vector<CodewordSpan> spans; // disjoint, sorted by bit_offset
    std::uint64_t total_bits(CwMask classes = kAllCodewordClasses,
                             std::uint32_t unit_limit = 0xffffffff) const;
};

struct MotionVector {
    int dx = 0;
    int dy = 0;
    bool operator==(const MotionVector&) const = default;
};

struct MacroblockSyntax {
    MotionVector mvd;                 // P frames only
    std::array<LevelBlock, 4> blocks; // zigzag levels, blocks in raster order
    bool operator==(const MacroblockSyntax&) const = default;
};

struct FrameSyntax {
    FrameType type = FrameType::I;
    int qp = 4;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::vector<MacroblockSyntax> mbs; // stream order
    bool operator==(const FrameSyntax&) const = default;
};

struct UnitRange {
    std::uint32_t begin = 0; // byte offsets within the payload
    std::uint32_t end = 0;
};

struct FrameStructure {
    FrameType type = FrameType::I;
    int qp = 4;
    std::vector<UnitRange> units;
    CodewordMap codewords;
};

/// Packed MSB-first bit vector.
struct BitVec {
    Bytes data;
    std::uint64_t nbits = 0;
    bool operator==(const BitVec&) const = default;
};

/// Full-search integer-pel motion estimation over a square window. Ties go to
/// the smallest |dx|+|dy|, then the smallest dy, then the smallest dx.
MotionVector motion_search(ByteView current, ByteView reference, std::uint16_t width,
                           std::uint16_t height, int mb_x, int mb_y, int radius = 7);

/// Transform + quantize a frame into coded syntax (no entropy coding yet).
FrameSyntax analyze_frame(ByteView frame, const Bytes* reference, std::uint16_t width,
                          std::uint16_t height, int qp, FrameType type);

/// Deterministic entropy coding of frame syntax; the exact byte inverse of
/// parse_frame_syntax.
Bytes encode_frame_syntax(const FrameSyntax& syntax);

FrameSyntax parse_frame_syntax(ByteView payload, std::uint16_t width, std::uint16_t height);

/// Structural parse only: unit byte ranges plus the codeword map.
FrameStructure parse_frame_structure(ByteView payload, std::uint16_t width,
                                     std::uint16_t height);

/// Pixel reconstruction. P frames read the reference with edge clamping; a
/// missing reference acts as a mid-gray frame.
Bytes reconstruct_frame(const FrameSyntax& syntax, const Bytes* reference);

/// encode_frame = analyze + entropy-code; also returns the codeword map.
std::pair<Bytes, CodewordMap> encode_frame(ByteView frame, const Bytes* reference,
                                           std::uint16_t width, std::uint16_t height,
                                           int qp, FrameType type);

/// Total over byte strings: decodes any well-formed payload, throws
/// FormatError with a diagnostic otherwise. Never reads out of bounds.
Bytes decode_frame(ByteView payload, std::uint16_t width, std::uint16_t height,
                   const Bytes* reference);

/// Concatenate the bits of every span in the selected classes, span order.
/// `unit_limit` restricts the selection to the first N macroblock units.
BitVec extract_sensitive_bits(ByteView payload, std::uint16_t width, std::uint16_t height,
                              CwMask classes, std::uint32_t unit_limit = 0xffffffff);

/// Write a bit vector back into the selected spans. The payload length never
/// changes; the vector width must match exactly.
Bytes patch_sensitive_bits(ByteView payload, std::uint16_t width, std::uint16_t height,
                           CwMask classes, const BitVec& bits,
                           std::uint32_t unit_limit = 0xffffffff);

// ---- whole-stream pipeline ----------------------------------------------

/// Compress (or store) a clip into an unencrypted container. An I frame is
/// inserted every `gop` frames; the rest code motion against the previous
/// reconstruction.
SvcFile encode_video(const RawVideo& video, const AudioTrack& audio, CodecId codec,
                     int qp = 4, int gop = 8);

std::pair<RawVideo, AudioTrack> decode_video(const SvcFile& file);

/// Decode only the frame at `index`, reconstructing the reference chain.
Bytes decode_frame_at(const SvcFile& file, std::uint32_t index);

} // namespace svcrypt
