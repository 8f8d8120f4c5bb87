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

#include "svcrypt/schemes.hpp"

#include <chrono>
#include <cmath>

namespace svcrypt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t video_payload_bytes(const SvcFile& f) {
    std::uint64_t total = 0;
    for (const FrameRecord& r : f.records)
        total += r.video.size();
    return total;
}

void require_codec(const SvcFile& f, CodecId codec, std::string_view scheme) {
    if (f.header.codec_id != codec)
        throw UsageError(std::string(scheme) + " scheme requires " +
                         (codec == CodecId::Raw ? "RAW" : "DCT") + " payloads");
}

void xor_bytes(Bytes& data, ByteView stream, std::size_t pos = 0) {
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] ^= stream[pos + i];
}

// Byte ranges of the macroblock units plus the 2-byte frame header prefix.
std::vector<Bytes> split_units(const Bytes& payload, const FrameStructure& st) {
    std::vector<Bytes> units;
    units.reserve(st.units.size());
    for (const UnitRange& u : st.units)
        units.emplace_back(payload.begin() + u.begin, payload.begin() + u.end);
    return units;
}

Bytes join_units(ByteView header2, const std::vector<Bytes>& units) {
    Bytes out(header2.begin(), header2.end());
    for (const Bytes& u : units)
        out.insert(out.end(), u.begin(), u.end());
    return out;
}

void xor_codeword_bits(Bytes& payload, const SvcHeader& h,
                       const std::array<std::uint8_t, 16>& seed, ByteView tag,
                       CwMask classes, std::uint32_t unit_limit, std::uint64_t& aes_bits,
                       std::uint64_t* bytes_touched) {
    BitVec bits = extract_sensitive_bits(payload, h.width, h.height, classes, unit_limit);
    if (bits.nbits == 0)
        return;
    const Bytes stream = keyed_stream(seed, tag, bits.data.size());
    xor_bytes(bits.data, stream);
    // canonical form: bits past nbits stay zero
    const unsigned tail = bits.nbits % 8;
    if (tail != 0)
        bits.data.back() &= static_cast<std::uint8_t>(0xff00u >> tail);
    if (bytes_touched) {
        std::vector<bool> touched(payload.size(), false);
        const FrameStructure st = parse_frame_structure(payload, h.width, h.height);
        for (const CodewordSpan& s : st.codewords.spans) {
            if (!(classes & mask_of(s.cls)) || s.unit >= unit_limit)
                continue;
            for (std::uint32_t b = s.bit_offset / 8;
                 b <= (s.bit_offset + s.bit_width - 1) / 8; ++b)
                touched[b] = true;
        }
        for (bool t : touched)
            *bytes_touched += t ? 1 : 0;
    }
    payload = patch_sensitive_bits(payload, h.width, h.height, classes, bits, unit_limit);
    aes_bits += bits.nbits;
}

// ---- proposed -------------------------------------------------------------

void encrypt_proposed(SvcFile& f, const ShuffleKey& sk, CwMask classes,
                      SchemeReport& report) {
    const std::uint32_t n = f.frame_count();

    // shred: structural pass, split every payload into header + unit chunks
    auto t0 = Clock::now();
    std::vector<Bytes> headers(n);
    std::vector<std::vector<Bytes>> units(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const Bytes& payload = f.records[i].video;
        const FrameStructure st = parse_frame_structure(payload, f.header.width, f.header.height);
        headers[i].assign(payload.begin(), payload.begin() + 2);
        units[i] = split_units(payload, st);
    }
    report.timings.shredding_ms += ms_since(t0);

    // shuffle: frame records move as wholes, then units inside each frame
    t0 = Clock::now();
    const Permutation frame_perm =
        derive_permutation(sk.frame_seed, make_tag("frame"), n);
    f.records = apply_permutation(frame_perm, std::move(f.records));
    headers = apply_permutation(frame_perm, std::move(headers));
    units = apply_permutation(frame_perm, std::move(units));
    for (std::uint32_t s = 0; s < n; ++s) {
        const Permutation block_perm = derive_permutation(
            sk.block_seed, make_tag("block", s), units[s].size());
        units[s] = apply_permutation(block_perm, std::move(units[s]));
    }
    report.timings.shuffling_ms += ms_since(t0);

    // stitch: rebuild payloads from the shuffled pieces
    t0 = Clock::now();
    for (std::uint32_t s = 0; s < n; ++s) {
        f.records[s].video = join_units(headers[s], units[s]);
        f.records[s].original_index = s;
    }
    report.timings.stitching_ms += ms_since(t0);

    // aes: XOR the sensitive codeword bits of the stitched stream
    t0 = Clock::now();
    for (std::uint32_t s = 0; s < n; ++s)
        xor_codeword_bits(f.records[s].video, f.header, sk.frame_seed,
                          make_tag("cw", s), classes, 0xffffffff, report.aes_bits,
                          nullptr);
    report.timings.aes_ms += ms_since(t0);

    // every payload byte is repositioned or altered
    report.bytes_touched = video_payload_bytes(f);
}

void decrypt_proposed(SvcFile& f, const ShuffleKey& sk, CwMask classes) {
    const std::uint32_t n = f.frame_count();
    std::uint64_t ignored_bits = 0;
    for (std::uint32_t s = 0; s < n; ++s)
        xor_codeword_bits(f.records[s].video, f.header, sk.frame_seed,
                          make_tag("cw", s), classes, 0xffffffff, ignored_bits, nullptr);
    for (std::uint32_t s = 0; s < n; ++s) {
        Bytes& payload = f.records[s].video;
        const FrameStructure st =
            parse_frame_structure(payload, f.header.width, f.header.height);
        Bytes header2(payload.begin(), payload.begin() + 2);
        std::vector<Bytes> units = split_units(payload, st);
        const Permutation block_perm =
            derive_permutation(sk.block_seed, make_tag("block", s), units.size());
        units = apply_permutation(invert_permutation(block_perm), std::move(units));
        payload = join_units(header2, units);
    }
    const Permutation frame_perm = derive_permutation(sk.frame_seed, make_tag("frame"), n);
    f.records = apply_permutation(invert_permutation(frame_perm), std::move(f.records));
    for (std::uint32_t i = 0; i < n; ++i)
        f.records[i].original_index = i;
}

// ---- full -----------------------------------------------------------------

void xor_full(SvcFile& f, const MasterKey& master, const std::array<std::uint8_t, 12>& nonce,
              SchemeReport* report) {
    std::uint64_t total = 0;
    for (const FrameRecord& r : f.records)
        total += r.video.size() + r.audio.size();
    const Bytes stream = master_ctr_stream(master, nonce, total);
    std::size_t pos = 0;
    for (FrameRecord& r : f.records) {
        xor_bytes(r.video, stream, pos);
        pos += r.video.size();
        xor_bytes(r.audio, stream, pos);
        pos += r.audio.size();
    }
    if (report) {
        report->aes_bits += 8 * total;
        report->bytes_touched = video_payload_bytes(f);
    }
}

// ---- pure -----------------------------------------------------------------

void encrypt_pure(SvcFile& f, const ShuffleKey& sk, SchemeReport& report) {
    const std::size_t plane =
        static_cast<std::size_t>(f.header.width) * f.header.height;
    auto t0 = Clock::now();
    const Permutation perm = derive_permutation(sk.frame_seed, make_tag("pure"), plane);
    for (FrameRecord& r : f.records) {
        if (r.video.size() != plane)
            throw FormatError("raw payload size mismatch");
        Bytes out(plane);
        for (std::size_t i = 0; i < plane; ++i)
            out[perm[i]] = r.video[i];
        r.video = std::move(out);
    }
    report.timings.shuffling_ms += ms_since(t0);
    report.bytes_touched = video_payload_bytes(f);
}

void decrypt_pure(SvcFile& f, const ShuffleKey& sk) {
    const std::size_t plane =
        static_cast<std::size_t>(f.header.width) * f.header.height;
    const Permutation inv = invert_permutation(
        derive_permutation(sk.frame_seed, make_tag("pure"), plane));
    for (FrameRecord& r : f.records) {
        if (r.video.size() != plane)
            throw FormatError("raw payload size mismatch");
        Bytes out(plane);
        for (std::size_t i = 0; i < plane; ++i)
            out[inv[i]] = r.video[i];
        r.video = std::move(out);
    }
}

// ---- crisscross -----------------------------------------------------------

void permute_levels(SvcFile& f, const Permutation& perm64, SchemeReport* report) {
    for (FrameRecord& r : f.records) {
        auto t0 = Clock::now();
        FrameSyntax syntax = parse_frame_syntax(r.video, f.header.width, f.header.height);
        if (report)
            report->timings.shredding_ms += ms_since(t0);

        t0 = Clock::now();
        for (MacroblockSyntax& mb : syntax.mbs)
            for (LevelBlock& block : mb.blocks) {
                LevelBlock out{};
                for (int i = 0; i < 64; ++i)
                    out[perm64[i]] = block[i];
                block = out;
            }
        if (report)
            report->timings.shuffling_ms += ms_since(t0);

        t0 = Clock::now();
        r.video = encode_frame_syntax(syntax);
        if (report)
            report->timings.stitching_ms += ms_since(t0);
    }
    if (report)
        report->bytes_touched = video_payload_bytes(f);
}

// ---- choose ---------------------------------------------------------------

std::uint32_t choose_stride(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw UsageError("frame fraction must be in (0,1]");
    return static_cast<std::uint32_t>(std::floor(1.0 / fraction));
}

void xor_choose(SvcFile& f, const ShuffleKey& sk, double fraction, SchemeReport* report) {
    const std::uint32_t stride = choose_stride(fraction);
    for (std::uint32_t s = 0; s < f.frame_count(); ++s) {
        if (s % stride != 0)
            continue;
        FrameRecord& r = f.records[s];
        const std::size_t len = r.video.size() + r.audio.size();
        const Bytes stream = keyed_stream(sk.frame_seed, make_tag("ch", s), len);
        xor_bytes(r.video, stream);
        xor_bytes(r.audio, stream, r.video.size());
        if (report) {
            report->bytes_touched += r.video.size();
            report->aes_bits += 8 * static_cast<std::uint64_t>(len);
        }
    }
}

// ---- perceptual -----------------------------------------------------------

void xor_perceptual(SvcFile& f, const ShuffleKey& sk, CwMask classes, double block_fraction,
                    SchemeReport* report) {
    if (block_fraction < 0.0 || block_fraction > 1.0)
        throw UsageError("block fraction must be in [0,1]");
    for (std::uint32_t s = 0; s < f.frame_count(); ++s) {
        Bytes& payload = f.records[s].video;
        const FrameStructure st =
            parse_frame_structure(payload, f.header.width, f.header.height);
        const std::uint32_t unit_limit = static_cast<std::uint32_t>(
            std::ceil(block_fraction * static_cast<double>(st.units.size())));
        std::uint64_t aes_bits = 0;
        std::uint64_t touched = 0;
        xor_codeword_bits(payload, f.header, sk.frame_seed, make_tag("pc", s), classes,
                          unit_limit, aes_bits, report ? &touched : nullptr);
        if (report) {
            report->aes_bits += aes_bits;
            report->bytes_touched += touched;
        }
    }
}

} // namespace

std::string_view scheme_name(SchemeId id) {
    switch (id) {
    case SchemeId::None: return "none";
    case SchemeId::Proposed: return "proposed";
    case SchemeId::Full: return "full";
    case SchemeId::Pure: return "pure";
    case SchemeId::Crisscross: return "crisscross";
    case SchemeId::Choose: return "choose";
    case SchemeId::Perceptual: return "perceptual";
    }
    throw UsageError("unknown scheme id");
}

SchemeId scheme_from_name(std::string_view name) {
    for (int i = 0; i <= 6; ++i) {
        const SchemeId id = static_cast<SchemeId>(i);
        if (scheme_name(id) == name)
            return id;
    }
    throw UsageError("unknown scheme: " + std::string(name));
}

std::string_view classify(SchemeId id) {
    switch (id) {
    case SchemeId::Full: return "completely layered";
    case SchemeId::Pure:
    case SchemeId::Crisscross: return "permutation";
    case SchemeId::Choose:
    case SchemeId::Proposed: return "selective";
    case SchemeId::Perceptual: return "perceptual";
    case SchemeId::None: break;
    }
    throw UsageError("unknown scheme id");
}

std::pair<SvcFile, SchemeReport> encrypt(const SvcFile& input, const MasterKey& master,
                                         const SchemeParams& params) {
    if (input.header.encrypted())
        throw UsageError("input is already encrypted");
    if (input.records.empty())
        throw UsageError("empty video");

    SchemeReport report;
    report.original_file_bytes = serialize_svc(input).size();
    report.total_payload_bytes = video_payload_bytes(input);

    SvcFile out = input;
    const SchemeId scheme = params.scheme;

    switch (scheme) {
    case SchemeId::Proposed: {
        require_codec(input, CodecId::Dct, "proposed");
        const ShuffleKey sk = ShuffleKey::generate();
        encrypt_proposed(out, sk, params.resolved_classes(), report);
        auto t0 = Clock::now();
        out.header.key_blob = wrap_shuffle_key(master, sk);
        report.timings.aes_ms += ms_since(t0);
        break;
    }
    case SchemeId::Full: {
        const ShuffleKey sk = ShuffleKey::generate(); // only the nonce is used
        auto t0 = Clock::now();
        xor_full(out, master, sk.stream_nonce, &report);
        report.timings.aes_ms += ms_since(t0);
        out.header.key_blob.assign(sk.stream_nonce.begin(), sk.stream_nonce.end());
        break;
    }
    case SchemeId::Pure: {
        require_codec(input, CodecId::Raw, "pure");
        const ShuffleKey sk = ShuffleKey::generate();
        encrypt_pure(out, sk, report);
        auto t0 = Clock::now();
        out.header.key_blob = wrap_shuffle_key(master, sk);
        report.timings.aes_ms += ms_since(t0);
        break;
    }
    case SchemeId::Crisscross: {
        require_codec(input, CodecId::Dct, "crisscross");
        const ShuffleKey sk = ShuffleKey::generate();
        const Permutation perm64 = derive_permutation(sk.block_seed, make_tag("zigzag"), 64);
        permute_levels(out, perm64, &report);
        auto t0 = Clock::now();
        out.header.key_blob = wrap_shuffle_key(master, sk);
        report.timings.aes_ms += ms_since(t0);
        break;
    }
    case SchemeId::Choose: {
        const ShuffleKey sk = ShuffleKey::generate();
        auto t0 = Clock::now();
        xor_choose(out, sk, params.frame_fraction, &report);
        out.header.key_blob = wrap_shuffle_key(master, sk);
        report.timings.aes_ms += ms_since(t0);
        break;
    }
    case SchemeId::Perceptual: {
        require_codec(input, CodecId::Dct, "perceptual");
        const ShuffleKey sk = ShuffleKey::generate();
        auto t0 = Clock::now();
        xor_perceptual(out, sk, params.resolved_classes(), params.block_fraction, &report);
        out.header.key_blob = wrap_shuffle_key(master, sk);
        report.timings.aes_ms += ms_since(t0);
        break;
    }
    case SchemeId::None:
    default:
        throw UsageError("no scheme selected");
    }

    out.header.scheme_id = static_cast<std::uint8_t>(scheme);
    out.header.flags |= 1u;

    auto t0 = Clock::now();
    const Bytes serialized = serialize_svc(out);
    report.timings.stitching_ms += ms_since(t0);
    report.encrypted_file_bytes = serialized.size();
    // crisscross re-encoding changes payload sizes; report the output totals
    report.total_payload_bytes = video_payload_bytes(out);
    return {std::move(out), report};
}

SvcFile decrypt(const SvcFile& input, const MasterKey& master, const SchemeParams& params) {
    if (!input.header.encrypted())
        throw FormatError("not encrypted");
    const SchemeId scheme = static_cast<SchemeId>(input.header.scheme_id);

    SvcFile out = input;
    SchemeParams effective = params;
    effective.scheme = scheme;

    switch (scheme) {
    case SchemeId::Proposed: {
        const ShuffleKey sk = unwrap_shuffle_key(master, input.header.key_blob);
        decrypt_proposed(out, sk, effective.resolved_classes());
        break;
    }
    case SchemeId::Full: {
        if (input.header.key_blob.size() != 12)
            throw KeyError("wrong key or corrupted blob");
        std::array<std::uint8_t, 12> nonce{};
        std::copy(input.header.key_blob.begin(), input.header.key_blob.end(), nonce.begin());
        xor_full(out, master, nonce, nullptr);
        break;
    }
    case SchemeId::Pure: {
        const ShuffleKey sk = unwrap_shuffle_key(master, input.header.key_blob);
        decrypt_pure(out, sk);
        break;
    }
    case SchemeId::Crisscross: {
        const ShuffleKey sk = unwrap_shuffle_key(master, input.header.key_blob);
        const Permutation inv = invert_permutation(
            derive_permutation(sk.block_seed, make_tag("zigzag"), 64));
        permute_levels(out, inv, nullptr);
        break;
    }
    case SchemeId::Choose: {
        const ShuffleKey sk = unwrap_shuffle_key(master, input.header.key_blob);
        xor_choose(out, sk, effective.frame_fraction, nullptr);
        break;
    }
    case SchemeId::Perceptual: {
        const ShuffleKey sk = unwrap_shuffle_key(master, input.header.key_blob);
        xor_perceptual(out, sk, effective.resolved_classes(), effective.block_fraction,
                       nullptr);
        break;
    }
    case SchemeId::None:
    default:
        throw FormatError("unsupported scheme id");
    }

    out.header.scheme_id = static_cast<std::uint8_t>(SchemeId::None);
    out.header.flags &= ~1u;
    out.header.key_blob.clear();
    for (std::uint32_t i = 0; i < out.frame_count(); ++i)
        out.records[i].original_index = i;
    return out;
}

} // namespace svcrypt
