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

#include <cstdint>
#include <string>
#include <vector>

#include "svcrypt/common.hpp"

namespace svcrypt {

/// Uncompressed planar 8-bit luma video. Dimensions are multiples of 16.
struct RawVideo {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint16_t fps_num = 25;
    std::uint16_t fps_den = 1;
    std::vector<Bytes> frames; // each width*height bytes

    void validate() const; // throws FormatError on broken invariants
};

/// Mono 16-bit PCM. May be empty (video-only input).
struct AudioTrack {
    std::uint32_t sample_rate = 0;
    std::vector<std::int16_t> samples;

    bool empty() const { return samples.empty(); }
};

/// One frame's worth of media: the video payload (raw or coded) plus the PCM
/// slice covering the frame's time span. The pair always travels together.
struct FrameRecord {
    std::uint32_t original_index = 0;
    Bytes video;
    Bytes audio; // little-endian i16 samples, even byte count

    bool operator==(const FrameRecord&) const = default;
};

enum class CodecId : std::uint8_t { Raw = 0, Dct = 1 };

/*
 * SVC container layout, all integers little-endian:
 *
 *   magic "SVC1"            4 B
 *   version                 u8   (= 1)
 *   codec_id                u8   (0 = RAW, 1 = DCT)
 *   scheme_id               u8   (0 = none .. 6 = perceptual)
 *   flags                   u8   (bit 0: encrypted)
 *   width, height           u16, u16
 *   fps_num, fps_den        u16, u16
 *   frame_count             u32
 *   sample_rate             u32
 *   channels                u8   (0 or 1)
 *   bits_per_sample         u8   (16)
 *   key_blob_len            u16
 *   key_blob                key_blob_len B
 *   index table             frame_count x { offset u64, video_len u32, audio_len u32 }
 *   payloads                video then audio per record, in record order
 *
 * `offset` is the absolute file offset of the record's video payload; the
 * audio payload follows it immediately.
 */
struct SvcHeader {
    CodecId codec_id = CodecId::Raw;
    std::uint8_t scheme_id = 0;
    std::uint8_t flags = 0;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint16_t fps_num = 25;
    std::uint16_t fps_den = 1;
    std::uint32_t sample_rate = 0;
    std::uint8_t channels = 0;
    std::uint8_t bits_per_sample = 16;
    Bytes key_blob;

    bool encrypted() const { return (flags & 1u) != 0; }
    bool operator==(const SvcHeader&) const = default;
};

struct SvcFile {
    SvcHeader header;
    std::vector<FrameRecord> records;

    std::uint32_t frame_count() const { return static_cast<std::uint32_t>(records.size()); }
    bool operator==(const SvcFile&) const = default;
};

/// Deterministic serialization; identical input yields identical bytes.
Bytes serialize_svc(const SvcFile& file);

/// Total over arbitrary bytes: returns a value or throws FormatError.
SvcFile parse_svc(ByteView data);

/// Split the sample stream into frame_count chunks of little-endian bytes.
/// Chunk i covers samples [floor(i*S/N), floor((i+1)*S/N)); concatenating the
/// chunks reproduces the stream exactly.
std::vector<Bytes> partition_audio(const AudioTrack& track, std::uint32_t frame_count);

/// Reassemble a track from per-frame chunks (inverse of partition_audio).
AudioTrack join_audio(const std::vector<const Bytes*>& chunks, std::uint32_t sample_rate);

// ---- media file I/O ----------------------------------------------------

struct PgmImage {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    Bytes pixels;
};

PgmImage parse_pgm(ByteView data);   // P5, maxval 255
Bytes write_pgm(const PgmImage& img);

AudioTrack parse_wav(ByteView data); // PCM, 16-bit, mono; anything else is rejected
Bytes write_wav(const AudioTrack& track);

/// Build a RawVideo from a list of PGM files (source order = list order).
RawVideo ingest_pgm_sequence(const std::vector<std::string>& paths,
                             std::uint16_t fps_num, std::uint16_t fps_den);

/// Build a RawVideo from a headerless luma stream with explicit dimensions.
RawVideo ingest_luma_stream(ByteView data, std::uint16_t width, std::uint16_t height,
                            std::uint16_t fps_num, std::uint16_t fps_den);

Bytes read_file(const std::string& path);
void write_file_atomic(const std::string& path, ByteView data);

} // namespace svcrypt
