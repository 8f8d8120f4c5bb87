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

#include "svcrypt/container.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

namespace svcrypt {

namespace {

constexpr char kMagic[4] = {'S', 'V', 'C', '1'};
constexpr std::uint8_t kVersion = 1;

// Little-endian scalar writer/reader over a byte vector.
struct Writer {
    Bytes out;

    void u8(std::uint8_t v) { out.push_back(v); }
    void u16(std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i)
            out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void raw(ByteView v) { out.insert(out.end(), v.begin(), v.end()); }
};

struct Reader {
    ByteView data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > data.size())
            throw FormatError("truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return data[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(data[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    Bytes raw(std::size_t n) {
        need(n);
        Bytes v(data.begin() + pos, data.begin() + pos + n);
        pos += n;
        return v;
    }
};

} // namespace

void RawVideo::validate() const {
    if (width < 16 || height < 16 || width % 16 != 0 || height % 16 != 0)
        throw FormatError("dimensions must be multiples of 16, at least 16x16");
    if (fps_den < 1)
        throw FormatError("fps denominator must be at least 1");
    const std::size_t plane = static_cast<std::size_t>(width) * height;
    for (const Bytes& f : frames)
        if (f.size() != plane)
            throw FormatError("frame plane size mismatch");
}

Bytes serialize_svc(const SvcFile& file) {
    const auto& h = file.header;
    if (h.encrypted() != !h.key_blob.empty())
        throw FormatError("inconsistent header: key blob and encrypted flag disagree");
    if (h.key_blob.size() > 0xffff)
        throw FormatError("key blob too large");

    Writer w;
    w.raw(ByteView(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
    w.u8(kVersion);
    w.u8(static_cast<std::uint8_t>(h.codec_id));
    w.u8(h.scheme_id);
    w.u8(h.flags);
    w.u16(h.width);
    w.u16(h.height);
    w.u16(h.fps_num);
    w.u16(h.fps_den);
    w.u32(file.frame_count());
    w.u32(h.sample_rate);
    w.u8(h.channels);
    w.u8(h.bits_per_sample);
    w.u16(static_cast<std::uint16_t>(h.key_blob.size()));
    w.raw(h.key_blob);

    std::uint64_t offset = w.out.size() + 16ull * file.records.size();
    for (const FrameRecord& r : file.records) {
        w.u64(offset);
        w.u32(static_cast<std::uint32_t>(r.video.size()));
        w.u32(static_cast<std::uint32_t>(r.audio.size()));
        offset += r.video.size() + r.audio.size();
    }
    for (const FrameRecord& r : file.records) {
        w.raw(r.video);
        w.raw(r.audio);
    }
    return std::move(w.out);
}

SvcFile parse_svc(ByteView data) {
    Reader r{data};
    const Bytes magic = r.raw(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw FormatError("bad magic");
    if (r.u8() != kVersion)
        throw FormatError("unsupported version");

    SvcFile file;
    SvcHeader& h = file.header;
    const std::uint8_t codec = r.u8();
    if (codec > 1)
        throw FormatError("unknown codec id");
    h.codec_id = static_cast<CodecId>(codec);
    h.scheme_id = r.u8();
    if (h.scheme_id > 6)
        throw FormatError("unknown scheme id");
    h.flags = r.u8();
    if (h.flags & ~1u)
        throw FormatError("unknown flag bits");
    h.width = r.u16();
    h.height = r.u16();
    h.fps_num = r.u16();
    h.fps_den = r.u16();
    const std::uint32_t frame_count = r.u32();
    h.sample_rate = r.u32();
    h.channels = r.u8();
    if (h.channels > 1)
        throw FormatError("unsupported channel count");
    h.bits_per_sample = r.u8();
    if (h.bits_per_sample != 16)
        throw FormatError("unsupported bits per sample");
    const std::uint16_t blob_len = r.u16();
    h.key_blob = r.raw(blob_len);
    if (h.encrypted() != !h.key_blob.empty())
        throw FormatError("inconsistent header: key blob and encrypted flag disagree");

    // Index table sanity: every payload must lie inside the file.
    struct Entry {
        std::uint64_t offset;
        std::uint32_t video_len;
        std::uint32_t audio_len;
    };
    if (frame_count > data.size() / 16)
        throw FormatError("index table larger than file");
    std::vector<Entry> index(frame_count);
    for (Entry& e : index) {
        e.offset = r.u64();
        e.video_len = r.u32();
        e.audio_len = r.u32();
        if (e.audio_len % 2 != 0)
            throw FormatError("odd audio payload length");
        const std::uint64_t end = e.offset + e.video_len + static_cast<std::uint64_t>(e.audio_len);
        if (e.offset < r.pos || end < e.offset || end > data.size())
            throw FormatError("index entry outside file");
    }

    file.records.reserve(frame_count);
    for (std::uint32_t i = 0; i < frame_count; ++i) {
        const Entry& e = index[i];
        FrameRecord rec;
        rec.original_index = i;
        rec.video.assign(data.begin() + e.offset, data.begin() + e.offset + e.video_len);
        rec.audio.assign(data.begin() + e.offset + e.video_len,
                         data.begin() + e.offset + e.video_len + e.audio_len);
        file.records.push_back(std::move(rec));
    }
    return file;
}

std::vector<Bytes> partition_audio(const AudioTrack& track, std::uint32_t frame_count) {
    if (frame_count < 1)
        throw UsageError("frame count must be at least 1");
    const std::uint64_t total = track.samples.size();
    std::vector<Bytes> chunks(frame_count);
    for (std::uint32_t i = 0; i < frame_count; ++i) {
        const std::uint64_t begin = total * i / frame_count;
        const std::uint64_t end = total * (i + 1) / frame_count;
        Bytes& c = chunks[i];
        c.reserve(2 * (end - begin));
        for (std::uint64_t s = begin; s < end; ++s) {
            const std::uint16_t v = static_cast<std::uint16_t>(track.samples[s]);
            c.push_back(static_cast<std::uint8_t>(v));
            c.push_back(static_cast<std::uint8_t>(v >> 8));
        }
    }
    return chunks;
}

AudioTrack join_audio(const std::vector<const Bytes*>& chunks, std::uint32_t sample_rate) {
    AudioTrack track;
    track.sample_rate = sample_rate;
    for (const Bytes* c : chunks) {
        if (c->size() % 2 != 0)
            throw FormatError("odd audio chunk length");
        for (std::size_t i = 0; i + 1 < c->size(); i += 2)
            track.samples.push_back(
                static_cast<std::int16_t>((*c)[i] | ((*c)[i + 1] << 8)));
    }
    return track;
}

// ---- PGM ----------------------------------------------------------------

namespace {

// Skips PGM whitespace and '#' comments, then parses a decimal token.
std::uint32_t pgm_int(Reader& r) {
    for (;;) {
        r.need(1);
        const char c = static_cast<char>(r.data[r.pos]);
        if (c == '#') {
            while (r.u8() != '\n') {
            }
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++r.pos;
        } else {
            break;
        }
    }
    std::uint64_t v = 0;
    bool any = false;
    for (;;) {
        if (r.pos >= r.data.size())
            break;
        const char c = static_cast<char>(r.data[r.pos]);
        if (c < '0' || c > '9')
            break;
        v = v * 10 + (c - '0');
        if (v > 0xffffffffull)
            throw FormatError("pgm header value overflow");
        ++r.pos;
        any = true;
    }
    if (!any)
        throw FormatError("malformed pgm header");
    return static_cast<std::uint32_t>(v);
}

} // namespace

PgmImage parse_pgm(ByteView data) {
    Reader r{data};
    if (r.u8() != 'P' || r.u8() != '5')
        throw FormatError("not a P5 pgm file");
    const std::uint32_t width = pgm_int(r);
    const std::uint32_t height = pgm_int(r);
    const std::uint32_t maxval = pgm_int(r);
    if (maxval != 255)
        throw FormatError("pgm maxval must be 255");
    if (width == 0 || height == 0 || width > 0xffff || height > 0xffff)
        throw FormatError("pgm dimensions out of range");
    r.need(1);
    const char sep = static_cast<char>(r.u8());
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        throw FormatError("malformed pgm header");
    PgmImage img;
    img.width = static_cast<std::uint16_t>(width);
    img.height = static_cast<std::uint16_t>(height);
    img.pixels = r.raw(static_cast<std::size_t>(width) * height);
    return img;
}

Bytes write_pgm(const PgmImage& img) {
    std::string header = "P5\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

// ---- WAV ----------------------------------------------------------------

AudioTrack parse_wav(ByteView data) {
    Reader r{data};
    if (r.raw(4) != Bytes{'R', 'I', 'F', 'F'})
        throw FormatError("not a RIFF file");
    r.u32(); // riff size, trusted no further than the chunk walk below
    if (r.raw(4) != Bytes{'W', 'A', 'V', 'E'})
        throw FormatError("not a WAVE file");

    bool have_fmt = false;
    std::uint32_t sample_rate = 0;
    AudioTrack track;
    bool have_data = false;
    while (r.pos + 8 <= r.data.size()) {
        const Bytes id = r.raw(4);
        const std::uint32_t size = r.u32();
        if (r.pos + size > r.data.size())
            throw FormatError("truncated wav chunk");
        if (id == Bytes{'f', 'm', 't', ' '}) {
            if (size < 16)
                throw FormatError("short fmt chunk");
            Reader f{ByteView(r.data.data() + r.pos, size)};
            const std::uint16_t format = f.u16();
            const std::uint16_t channels = f.u16();
            sample_rate = f.u32();
            f.u32(); // byte rate
            f.u16(); // block align
            const std::uint16_t bits = f.u16();
            if (format != 1 || channels != 1 || bits != 16)
                throw FormatError("unsupported audio layout (need PCM 16-bit mono)");
            have_fmt = true;
        } else if (id == Bytes{'d', 'a', 't', 'a'}) {
            if (!have_fmt)
                throw FormatError("wav data before fmt");
            const std::size_t count = size / 2;
            track.samples.reserve(count);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t p = r.pos + 2 * i;
                track.samples.push_back(
                    static_cast<std::int16_t>(r.data[p] | (r.data[p + 1] << 8)));
            }
            have_data = true;
        }
        r.pos += size + (size & 1); // chunks are word-aligned
    }
    if (!have_fmt || !have_data)
        throw FormatError("missing wav fmt or data chunk");
    track.sample_rate = sample_rate;
    if (track.sample_rate == 0)
        throw FormatError("zero sample rate");
    return track;
}

Bytes write_wav(const AudioTrack& track) {
    Writer w;
    const std::uint32_t data_size = static_cast<std::uint32_t>(2 * track.samples.size());
    w.raw(Bytes{'R', 'I', 'F', 'F'});
    w.u32(36 + data_size);
    w.raw(Bytes{'W', 'A', 'V', 'E'});
    w.raw(Bytes{'f', 'm', 't', ' '});
    w.u32(16);
    w.u16(1); // PCM
    w.u16(1); // mono
    w.u32(track.sample_rate);
    w.u32(track.sample_rate * 2);
    w.u16(2);
    w.u16(16);
    w.raw(Bytes{'d', 'a', 't', 'a'});
    w.u32(data_size);
    for (std::int16_t s : track.samples) {
        w.u8(static_cast<std::uint8_t>(static_cast<std::uint16_t>(s)));
        w.u8(static_cast<std::uint8_t>(static_cast<std::uint16_t>(s) >> 8));
    }
    return std::move(w.out);
}

// ---- ingestion ----------------------------------------------------------

RawVideo ingest_pgm_sequence(const std::vector<std::string>& paths,
                             std::uint16_t fps_num, std::uint16_t fps_den) {
    if (paths.empty())
        throw UsageError("no input frames");
    RawVideo video;
    video.fps_num = fps_num;
    video.fps_den = fps_den;
    for (const std::string& p : paths) {
        const Bytes data = read_file(p);
        PgmImage img = parse_pgm(data);
        if (video.frames.empty()) {
            video.width = img.width;
            video.height = img.height;
        } else if (img.width != video.width || img.height != video.height) {
            throw FormatError("frame dimensions differ across sequence: " + p);
        }
        video.frames.push_back(std::move(img.pixels));
    }
    video.validate();
    return video;
}

RawVideo ingest_luma_stream(ByteView data, std::uint16_t width, std::uint16_t height,
                            std::uint16_t fps_num, std::uint16_t fps_den) {
    RawVideo video;
    video.width = width;
    video.height = height;
    video.fps_num = fps_num;
    video.fps_den = fps_den;
    const std::size_t plane = static_cast<std::size_t>(width) * height;
    if (plane == 0 || data.size() % plane != 0)
        throw FormatError("luma stream length is not a whole number of frames");
    for (std::size_t off = 0; off < data.size(); off += plane)
        video.frames.emplace_back(data.begin() + off, data.begin() + off + plane);
    video.validate();
    return video;
}

// ---- files --------------------------------------------------------------

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file_atomic(const std::string& path, ByteView data) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::random_device rd;
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError("cannot create " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out)
            throw FormatError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw FormatError("cannot move output into place: " + ec.message());
    }
}

} // namespace svcrypt
