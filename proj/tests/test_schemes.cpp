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

#include <algorithm>
#include <cmath>
#include <set>

#include "support.hpp"
#include "svcrypt/metrics.hpp"
#include "svcrypt/schemes.hpp"

using namespace svcrypt;

namespace {

const MasterKey kMaster = MasterKey::from_hex("000102030405060708090a0b0c0d0e0f");

SvcFile sample_svc(CodecId codec, std::uint64_t seed, int frames = 8, bool audio = true) {
    // panning content: DCT streams carry DC, AC and MVD codewords alike
    const RawVideo video = testsup::panning_video(seed, 64, 64, frames);
    const AudioTrack track =
        audio ? testsup::tone_audio(8000, 8000) : AudioTrack{};
    return encode_video(video, track, codec, 4, 4);
}

SchemeParams params_for(SchemeId id) {
    SchemeParams p;
    p.scheme = id;
    return p;
}

} // namespace

TEST_CASE("scheme taxonomy") {
    CHECK(classify(SchemeId::Full) == "completely layered");
    CHECK(classify(SchemeId::Pure) == "permutation");
    CHECK(classify(SchemeId::Crisscross) == "permutation");
    CHECK(classify(SchemeId::Choose) == "selective");
    CHECK(classify(SchemeId::Proposed) == "selective");
    CHECK(classify(SchemeId::Perceptual) == "perceptual");
    CHECK_THROWS_AS(classify(SchemeId::None), UsageError);
    CHECK(scheme_from_name("crisscross") == SchemeId::Crisscross);
    CHECK_THROWS_AS(scheme_from_name("rot13"), UsageError);
}

TEST_CASE("inverse law: decrypt(encrypt(v)) is bit-exact for every scheme") {
    auto g = testsup::rng(51);
    const std::vector<SchemeId> schemes = {SchemeId::Proposed, SchemeId::Full,
                                           SchemeId::Pure,     SchemeId::Crisscross,
                                           SchemeId::Choose,   SchemeId::Perceptual};
    for (SchemeId scheme : schemes) {
        for (int trial = 0; trial < 3; ++trial) {
            const CodecId codec =
                (scheme == SchemeId::Pure || scheme == SchemeId::Choose) ? CodecId::Raw
                                                                         : CodecId::Dct;
            const SvcFile original = sample_svc(codec, g(), 4 + trial * 2, trial % 2 == 0);
            const Bytes original_wire = serialize_svc(original);

            auto [enc, report] = encrypt(original, kMaster, params_for(scheme));
            const SvcFile reparsed = parse_svc(serialize_svc(enc)); // through the wire
            const SvcFile dec = decrypt(reparsed, kMaster);
            CHECK(serialize_svc(dec) == original_wire);
        }
    }
}

TEST_CASE("encryption ratio fixed points") {
    SUBCASE("choose at f=0.5 touches exactly half of 16 equal frames") {
        const SvcFile f = sample_svc(CodecId::Raw, 99, 16, false);
        auto [enc, report] = encrypt(f, kMaster, params_for(SchemeId::Choose));
        const EncryptionRatios er = encryption_ratio(report);
        CHECK(er.er_touched == doctest::Approx(0.5));
    }
    SUBCASE("full touches everything") {
        const SvcFile f = sample_svc(CodecId::Dct, 100, 8);
        auto [enc, report] = encrypt(f, kMaster, params_for(SchemeId::Full));
        CHECK(encryption_ratio(report).er_touched == doctest::Approx(1.0));
    }
    SUBCASE("pure and crisscross and proposed count as fully touched") {
        for (SchemeId s : {SchemeId::Pure, SchemeId::Crisscross, SchemeId::Proposed}) {
            const CodecId codec = s == SchemeId::Pure ? CodecId::Raw : CodecId::Dct;
            const SvcFile f = sample_svc(codec, 101, 6);
            auto [enc, report] = encrypt(f, kMaster, params_for(s));
            CHECK(encryption_ratio(report).er_touched == doctest::Approx(1.0));
        }
    }
    SUBCASE("perceptual at p=0 rewrites nothing") {
        const SvcFile f = sample_svc(CodecId::Dct, 102, 4);
        SchemeParams p = params_for(SchemeId::Perceptual);
        p.block_fraction = 0.0;
        auto [enc, report] = encrypt(f, kMaster, p);
        CHECK(report.bytes_touched == 0);
        CHECK(report.aes_bits == 0);
        CHECK(encryption_ratio(report).er_touched == doctest::Approx(0.0));
        // still marked encrypted, and invertible with the matching params
        CHECK(enc.header.encrypted());
        CHECK(serialize_svc(decrypt(enc, kMaster, p)) == serialize_svc(f));
    }
}

TEST_CASE("degenerate proposed run: one frame, one macroblock, all-zero DCs") {
    RawVideo video;
    video.width = 16;
    video.height = 16;
    video.frames.push_back(Bytes(256, 128)); // flat 128: every level is zero
    const SvcFile f = encode_video(video, AudioTrack{}, CodecId::Dct, 4, 8);

    auto [enc, report] = encrypt(f, kMaster, params_for(SchemeId::Proposed));
    CHECK(enc.records[0].video == f.records[0].video); // nothing to rewrite or move
    CHECK(!enc.header.key_blob.empty());
    CHECK(report.aes_bits == 0);
    CHECK(report.bytes_touched == report.total_payload_bytes); // repositioning definition
}

TEST_CASE("scheme prerequisites are enforced") {
    const SvcFile raw = sample_svc(CodecId::Raw, 103, 4);
    const SvcFile dct = sample_svc(CodecId::Dct, 104, 4);

    CHECK_THROWS_AS(encrypt(raw, kMaster, params_for(SchemeId::Proposed)), UsageError);
    CHECK_THROWS_AS(encrypt(raw, kMaster, params_for(SchemeId::Crisscross)), UsageError);
    CHECK_THROWS_AS(encrypt(raw, kMaster, params_for(SchemeId::Perceptual)), UsageError);
    CHECK_THROWS_AS(encrypt(dct, kMaster, params_for(SchemeId::Pure)), UsageError);

    SchemeParams oversized = params_for(SchemeId::Choose);
    oversized.frame_fraction = 1.5;
    CHECK_THROWS_AS(encrypt(raw, kMaster, oversized), UsageError);
    SchemeParams negative = params_for(SchemeId::Perceptual);
    negative.block_fraction = -0.1;
    CHECK_THROWS_AS(encrypt(dct, kMaster, negative), UsageError);

    auto [enc, report] = encrypt(dct, kMaster, params_for(SchemeId::Proposed));
    CHECK_THROWS_AS(encrypt(enc, kMaster, params_for(SchemeId::Full)), UsageError);
    CHECK_THROWS_WITH_AS(decrypt(dct, kMaster), "not encrypted", FormatError);
}

TEST_CASE("wrong master key aborts before touching payloads") {
    const SvcFile f = sample_svc(CodecId::Dct, 105, 4);
    const MasterKey wrong = MasterKey::from_hex("100102030405060708090a0b0c0d0e0f");
    for (SchemeId s : {SchemeId::Proposed, SchemeId::Pure, SchemeId::Crisscross,
                       SchemeId::Choose, SchemeId::Perceptual}) {
        const CodecId codec = s == SchemeId::Pure || s == SchemeId::Choose ? CodecId::Raw
                                                                           : CodecId::Dct;
        const SvcFile input = sample_svc(codec, 106, 4);
        auto [enc, report] = encrypt(input, kMaster, params_for(s));
        CHECK_THROWS_AS(decrypt(enc, wrong), KeyError);
    }
}

TEST_CASE("size preservation: only crisscross may change payload sizes") {
    auto length_multiset = [](const SvcFile& f) {
        std::multiset<std::pair<std::size_t, std::size_t>> m;
        for (const FrameRecord& r : f.records)
            m.insert({r.video.size(), r.audio.size()});
        return m;
    };
    for (SchemeId s : {SchemeId::Proposed, SchemeId::Full, SchemeId::Pure, SchemeId::Choose,
                       SchemeId::Perceptual}) {
        const CodecId codec = s == SchemeId::Pure || s == SchemeId::Choose ? CodecId::Raw
                                                                           : CodecId::Dct;
        const SvcFile input = sample_svc(codec, 107, 6);
        auto [enc, report] = encrypt(input, kMaster, params_for(s));
        REQUIRE(enc.records.size() == input.records.size());

        // every payload keeps its byte length (records may move as wholes)
        CHECK(length_multiset(enc) == length_multiset(input));
        if (s != SchemeId::Proposed) {
            for (std::size_t i = 0; i < input.records.size(); ++i) {
                CHECK(enc.records[i].video.size() == input.records[i].video.size());
                CHECK(enc.records[i].audio.size() == input.records[i].audio.size());
            }
        }
        // file growth is exactly the key blob
        CHECK(report.encrypted_file_bytes - report.original_file_bytes ==
              enc.header.key_blob.size());
    }
}

TEST_CASE("proposed: audio rides along with its frame") {
    const SvcFile input = sample_svc(CodecId::Dct, 108, 8);
    auto [enc, report] = encrypt(input, kMaster, params_for(SchemeId::Proposed));

    // compare (audio) multisets: the pairing survives even though video
    // payloads are rewritten, audio is untouched and moves with its record
    std::multiset<Bytes> in_audio, out_audio;
    for (const FrameRecord& r : input.records)
        in_audio.insert(r.audio);
    for (const FrameRecord& r : enc.records)
        out_audio.insert(r.audio);
    CHECK(in_audio == out_audio);

    // audio chunks all differ in this clip, so equality means a permutation
    std::vector<Bytes> in_list;
    for (const FrameRecord& r : input.records)
        in_list.push_back(r.audio);
    int moved = 0;
    for (std::size_t i = 0; i < enc.records.size(); ++i)
        moved += enc.records[i].audio != in_list[i] ? 1 : 0;
    CHECK(moved > 0); // the permutation is almost surely not the identity
}

TEST_CASE("compliance: codeword-level schemes keep streams decodable") {
    const SvcFile input = sample_svc(CodecId::Dct, 109, 8);
    for (SchemeId s : {SchemeId::Proposed, SchemeId::Perceptual, SchemeId::Crisscross}) {
        auto [enc, report] = encrypt(input, kMaster, params_for(s));
        const ComplianceResult c = compliance_check(enc);
        CHECK(c.pass);
    }
    auto [enc_full, report_full] = encrypt(input, kMaster, params_for(SchemeId::Full));
    const ComplianceResult c = compliance_check(enc_full);
    CHECK(!c.pass);
    CHECK(c.frames_ok <= c.frames_total / 100); // at least 99% must fail
}

TEST_CASE("crisscross grows the encoded payload on textured content") {
    const SvcFile input = sample_svc(CodecId::Dct, 110, 8);
    auto [enc, report] = encrypt(input, kMaster, params_for(SchemeId::Crisscross));
    std::uint64_t in_total = 0, out_total = 0;
    for (std::size_t i = 0; i < input.records.size(); ++i) {
        in_total += input.records[i].video.size();
        out_total += enc.records[i].video.size();
    }
    CHECK(out_total > in_total);
}

TEST_CASE("key sensitivity: one-bit master key difference reshuffles payloads") {
    const SvcFile input = sample_svc(CodecId::Dct, 111, 8);
    const MasterKey k2 = MasterKey::from_hex("000102030405060708090a0b0c0d0e0e");
    auto [enc1, r1] = encrypt(input, kMaster, params_for(SchemeId::Proposed));
    auto [enc2, r2] = encrypt(input, k2, params_for(SchemeId::Proposed));

    std::uint64_t differing = 0, total = 0;
    for (std::size_t i = 0; i < enc1.records.size(); ++i) {
        const Bytes& a = enc1.records[i].video;
        const Bytes& b = enc2.records[i].video;
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t p = 0; p < n; ++p)
            differing += a[p] != b[p] ? 1 : 0;
        differing += std::max(a.size(), b.size()) - n;
        total += std::max(a.size(), b.size());
    }
    CHECK(static_cast<double>(differing) / static_cast<double>(total) >= 0.30);
}

TEST_CASE("choose encrypts every stride-th frame from zero") {
    const SvcFile input = sample_svc(CodecId::Raw, 112, 9, false);
    SchemeParams p = params_for(SchemeId::Choose);
    p.frame_fraction = 0.34; // stride floor(1/0.34) = 2
    auto [enc, report] = encrypt(input, kMaster, p);
    for (std::size_t i = 0; i < input.records.size(); ++i) {
        const bool changed = enc.records[i].video != input.records[i].video;
        CHECK(changed == (i % 2 == 0));
    }
}

TEST_CASE("perceptual respects the block fraction and leaves runs alone") {
    const SvcFile input = sample_svc(CodecId::Dct, 113, 4, false);
    SchemeParams p = params_for(SchemeId::Perceptual);
    p.block_fraction = 0.5;
    auto [enc, report] = encrypt(input, kMaster, p);

    // frames still parse, and only the first half of the units may differ
    for (std::size_t i = 0; i < enc.records.size(); ++i) {
        const FrameStructure st_in =
            parse_frame_structure(input.records[i].video, 64, 64);
        const FrameStructure st_out =
            parse_frame_structure(enc.records[i].video, 64, 64);
        REQUIRE(st_in.units.size() == st_out.units.size());
        const std::size_t limit =
            static_cast<std::size_t>(std::ceil(0.5 * static_cast<double>(st_in.units.size())));
        for (std::size_t u = limit; u < st_in.units.size(); ++u) {
            const Bytes a(input.records[i].video.begin() + st_in.units[u].begin,
                          input.records[i].video.begin() + st_in.units[u].end);
            const Bytes b(enc.records[i].video.begin() + st_out.units[u].begin,
                          enc.records[i].video.begin() + st_out.units[u].end);
            CHECK(a == b);
        }
    }
}

TEST_CASE("narrowed codeword classes invert only with the matching class set") {
    const SvcFile input = sample_svc(CodecId::Dct, 116, 6, false);
    SchemeParams narrow = params_for(SchemeId::Proposed);
    narrow.classes = static_cast<CwMask>(mask_of(CwClass::IntraDcSuffix) |
                                         mask_of(CwClass::SignIntraDc) |
                                         mask_of(CwClass::MvdSuffix) |
                                         mask_of(CwClass::SignMvd));
    auto [enc, report] = encrypt(input, kMaster, narrow);
    CHECK(compliance_check(enc).pass); // class subsets keep the stream parseable
    CHECK(serialize_svc(decrypt(enc, kMaster, narrow)) == serialize_svc(input));
    // the default (wider) class set un-XORs bits that were never touched
    CHECK(serialize_svc(decrypt(enc, kMaster)) != serialize_svc(input));
}

TEST_CASE("192- and 256-bit master keys work for wrap and for full-stream CTR") {
    const MasterKey k192 =
        MasterKey::from_hex("000102030405060708090a0b0c0d0e0f1011121314151617");
    const MasterKey k256 = MasterKey::from_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    for (const MasterKey& key : {k192, k256}) {
        for (SchemeId s : {SchemeId::Full, SchemeId::Proposed}) {
            const SvcFile input = sample_svc(CodecId::Dct, 115, 4);
            const Bytes wire = serialize_svc(input);
            auto [enc, report] = encrypt(input, key, params_for(s));
            CHECK(serialize_svc(decrypt(parse_svc(serialize_svc(enc)), key)) == wire);
        }
    }
}

TEST_CASE("encrypting an empty container is rejected") {
    SvcFile empty;
    empty.header.codec_id = CodecId::Dct;
    empty.header.width = 64;
    empty.header.height = 64;
    CHECK_THROWS_AS(encrypt(empty, kMaster, params_for(SchemeId::Full)), UsageError);
}

TEST_CASE("scheme and flag bookkeeping on the wire") {
    const SvcFile input = sample_svc(CodecId::Dct, 114, 4);
    auto [enc, report] = encrypt(input, kMaster, params_for(SchemeId::Proposed));
    CHECK(enc.header.scheme_id == 1);
    CHECK(enc.header.encrypted());
    const SvcFile dec = decrypt(enc, kMaster);
    CHECK(dec.header.scheme_id == 0);
    CHECK(!dec.header.encrypted());
    CHECK(dec.header.key_blob.empty());
}
