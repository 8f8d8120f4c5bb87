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

#include "svcrypt/attack.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "svcrypt/metrics.hpp"
#include "svcrypt/schemes.hpp"

namespace svcrypt {

double PermutationClasses::singleton_fraction() const {
    if (n == 0)
        return 0;
    std::size_t singles = 0;
    for (const auto& c : candidates)
        singles += c.size() == 1 ? 1 : 0;
    return static_cast<double>(singles) / static_cast<double>(n);
}

PermutationClasses kpa_byte_permutation(ByteView plain, ByteView cipher) {
    if (plain.size() != cipher.size())
        throw FormatError("not a permutation pair: length mismatch");

    std::array<std::size_t, 256> plain_hist{}, cipher_hist{};
    for (std::uint8_t b : plain)
        ++plain_hist[b];
    for (std::uint8_t b : cipher)
        ++cipher_hist[b];
    if (plain_hist != cipher_hist)
        throw FormatError("not a permutation pair: byte multisets differ");

    std::array<std::vector<std::uint32_t>, 256> positions;
    for (std::size_t j = 0; j < cipher.size(); ++j)
        positions[cipher[j]].push_back(static_cast<std::uint32_t>(j));

    PermutationClasses classes;
    classes.n = plain.size();
    classes.candidates.reserve(plain.size());
    for (std::size_t i = 0; i < plain.size(); ++i)
        classes.candidates.push_back(positions[plain[i]]);
    return classes;
}

PermutationClasses intersect_classes(const PermutationClasses& a,
                                     const PermutationClasses& b) {
    if (a.n != b.n)
        throw UsageError("class length mismatch");
    PermutationClasses out;
    out.n = a.n;
    out.candidates.resize(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        std::set_intersection(a.candidates[i].begin(), a.candidates[i].end(),
                              b.candidates[i].begin(), b.candidates[i].end(),
                              std::back_inserter(out.candidates[i]));
    }
    return out;
}

RecoveryResult apply_recovered(const PermutationClasses& classes,
                               const std::vector<Bytes>& cipher_frames) {
    RecoveryResult result;
    std::size_t singles = 0;
    for (const auto& c : classes.candidates)
        singles += c.size() == 1 ? 1 : 0;
    result.provable_rate =
        classes.n ? static_cast<double>(singles) / static_cast<double>(classes.n) : 0.0;

    for (const Bytes& cipher : cipher_frames) {
        if (cipher.size() != classes.n)
            throw UsageError("frame length does not match classes");
        Bytes rec(classes.n, 0);
        for (std::size_t i = 0; i < classes.n; ++i) {
            const auto& c = classes.candidates[i];
            rec[i] = c.empty() ? 0 : cipher[c.front()]; // candidates are sorted
        }
        result.frames.push_back(std::move(rec));
    }
    return result;
}

double CoeffKpaResult::determined_fraction() const {
    std::size_t singles = 0;
    for (const auto& c : slot_candidates)
        singles += c.size() == 1 ? 1 : 0;
    return static_cast<double>(singles) / 64.0;
}

CoeffKpaResult kpa_coefficient_permutation(const RawVideo& known_raws,
                                           const SvcFile& encrypted, int qp, int gop) {
    if (static_cast<SchemeId>(encrypted.header.scheme_id) != SchemeId::Crisscross)
        throw UsageError("scheme mismatch: expected a crisscross-encrypted file");
    const std::size_t known = known_raws.frames.size();
    if (known == 0 || known > encrypted.records.size())
        throw UsageError("known frame count out of range");

    // Replay the deterministic encoder over the known prefix to obtain the
    // plaintext level blocks the encryptor permuted.
    const SvcFile plain_prefix = encode_video(known_raws, AudioTrack{}, CodecId::Dct, qp, gop);

    CoeffKpaResult result;
    for (auto& c : result.slot_candidates) {
        c.resize(64);
        for (int i = 0; i < 64; ++i)
            c[i] = static_cast<std::uint8_t>(i);
    }

    for (std::size_t fi = 0; fi < known; ++fi) {
        const FrameSyntax plain = parse_frame_syntax(plain_prefix.records[fi].video,
                                                     encrypted.header.width,
                                                     encrypted.header.height);
        const FrameSyntax enc = parse_frame_syntax(encrypted.records[fi].video,
                                                   encrypted.header.width,
                                                   encrypted.header.height);
        if (plain.mbs.size() != enc.mbs.size() || plain.type != enc.type)
            throw FormatError("encrypted stream does not match the known prefix");

        for (std::size_t u = 0; u < plain.mbs.size(); ++u) {
            for (int b = 0; b < 4; ++b) {
                const LevelBlock& pl = plain.mbs[u].blocks[b];
                const LevelBlock& el = enc.mbs[u].blocks[b];
                for (int src = 0; src < 64; ++src) {
                    auto& cand = result.slot_candidates[src];
                    if (cand.size() <= 1)
                        continue;
                    cand.erase(std::remove_if(cand.begin(), cand.end(),
                                              [&](std::uint8_t dst) {
                                                  return el[dst] != pl[src];
                                              }),
                               cand.end());
                }
            }
        }
    }

    result.unique = true;
    for (const auto& c : result.slot_candidates)
        if (c.size() != 1)
            result.unique = false;
    if (result.unique) {
        result.recovered.map.resize(64);
        for (int src = 0; src < 64; ++src)
            result.recovered.map[src] = result.slot_candidates[src][0];
    }
    return result;
}

ByteKpaReport run_byte_kpa(const SvcFile& plain, const SvcFile& encrypted,
                           int known_frames) {
    ByteKpaReport report;
    report.known_frames = known_frames;
    if (known_frames < 1 || static_cast<std::size_t>(known_frames) >= plain.records.size())
        throw UsageError("known frame count out of range");
    if (plain.records.size() != encrypted.records.size())
        throw UsageError("clip lengths differ");

    PermutationClasses classes;
    try {
        classes = kpa_byte_permutation(plain.records[0].video, encrypted.records[0].video);
        for (int k = 1; k < known_frames; ++k)
            classes = intersect_classes(
                classes,
                kpa_byte_permutation(plain.records[k].video, encrypted.records[k].video));
    } catch (const FormatError&) {
        report.precondition_ok = false; // the ciphertext is not a byte permutation
        return report;
    }
    report.precondition_ok = true;
    report.provable_rate = classes.singleton_fraction();

    std::vector<Bytes> unseen;
    for (std::size_t i = known_frames; i < encrypted.records.size(); ++i)
        unseen.push_back(encrypted.records[i].video);
    const RecoveryResult rec = apply_recovered(classes, unseen);

    double accuracy_sum = 0;
    for (std::size_t i = 0; i < rec.frames.size(); ++i) {
        const Bytes& truth = plain.records[known_frames + i].video;
        std::size_t match = 0;
        for (std::size_t p = 0; p < truth.size(); ++p)
            match += rec.frames[i][p] == truth[p] ? 1 : 0;
        accuracy_sum += static_cast<double>(match) / static_cast<double>(truth.size());
    }
    report.recovery_rate =
        rec.frames.empty() ? 0.0 : accuracy_sum / static_cast<double>(rec.frames.size());
    return report;
}

CoeffKpaReport run_coefficient_kpa(const RawVideo& plain, const SvcFile& encrypted,
                                   int known_frames, int qp, int gop) {
    CoeffKpaReport report;
    report.known_frames = known_frames;
    if (known_frames < 1 || static_cast<std::size_t>(known_frames) >= plain.frames.size())
        throw UsageError("known frame count out of range");

    RawVideo prefix = plain;
    prefix.frames.resize(known_frames);
    const CoeffKpaResult result =
        kpa_coefficient_permutation(prefix, encrypted, qp, gop);
    report.unique = result.unique;
    report.determined_fraction = result.determined_fraction();

    if (result.unique) {
        // Decrypt a held-out frame with the recovered permutation and score it
        // against the plaintext codec baseline path.
        const std::uint32_t holdout = static_cast<std::uint32_t>(known_frames);
        const Permutation inv = invert_permutation(result.recovered);
        SvcFile repaired = encrypted;
        for (FrameRecord& r : repaired.records) {
            FrameSyntax syntax = parse_frame_syntax(r.video, encrypted.header.width,
                                                    encrypted.header.height);
            for (MacroblockSyntax& mb : syntax.mbs)
                for (LevelBlock& block : mb.blocks) {
                    LevelBlock out{};
                    for (int i = 0; i < 64; ++i)
                        out[inv[i]] = block[i];
                    block = out;
                }
            r.video = encode_frame_syntax(syntax);
        }
        repaired.header.scheme_id = 0;
        repaired.header.flags = 0;
        repaired.header.key_blob.clear();
        const Bytes decoded = decode_frame_at(repaired, holdout);
        report.holdout_psnr_db = psnr(decoded, plain.frames[holdout]);
    }
    return report;
}

} // namespace svcrypt
