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

#include <string>

#include "svcrypt/container.hpp"
#include "svcrypt/schemes.hpp"

namespace svcrypt {

/// Luma PSNR in dB: 10*log10(255^2 / MSE). Identical frames return +infinity.
double psnr(ByteView a, ByteView b);

struct EncryptionRatios {
    double er_touched = 0; // altered-or-repositioned payload bytes / total
    double er_size = 0;    // encrypted file bytes / original file bytes
};

EncryptionRatios encryption_ratio(const SchemeReport& report);

struct ComplianceResult {
    bool pass = false;
    std::uint32_t frames_ok = 0;
    std::uint32_t frames_total = 0;
    std::vector<std::string> diagnostics; // one entry per failing frame
};

/// A file is compliant when every frame payload decodes, whatever the output
/// looks like. DCT frames decode against the previous successful decode.
ComplianceResult compliance_check(const SvcFile& file);

/// Mean PSNR of decode(encrypted) against the original frames. Frames that
/// fail to decode are skipped; NaN when nothing decodes.
double encrypted_psnr(const SvcFile& encrypted, const RawVideo& original);

// ---- bench ----------------------------------------------------------------

struct BenchResult {
    StageTimings median; // of timed runs, warm-up excluded
    SchemeReport report; // from the last run
    int runs = 0;
};

/// Encrypt `input` once to warm up, then `runs` timed passes; per-stage
/// medians. Timing uses the steady clock.
BenchResult bench(const SvcFile& input, const MasterKey& master,
                  const SchemeParams& params, int runs = 5);

/// Four-row stage table plus the non-normative reference line.
std::string format_bench_text(const BenchResult& result);

// ---- compare ----------------------------------------------------------------

struct CorpusClip {
    std::string name;
    RawVideo video;
    AudioTrack audio;
};

/// Each subdirectory of `dir` holding frame_*.pgm (plus optional audio.wav)
/// becomes one clip; a directory holding PGMs directly is a single clip.
std::vector<CorpusClip> load_corpus(const std::string& dir);

struct CompareRow {
    std::string scheme;
    double er_touched = 0;
    double er_size = 0;
    double psnr_db = 0;
    bool compliant = false;
    bool size_preserved = false; // every payload byte length unchanged
    double kpa_recovery = 0;     // applicable known-plaintext attack success
    StageTimings timings;        // summed over the corpus
};

struct CompareOptions {
    int qp = 4;
    int gop = 8;
    double frame_fraction = 0.5;
    double block_fraction = 1.0;
    int byte_kpa_known = 1;
    int coeff_kpa_known = 4;
};

/// One row per scheme, measured end to end over the corpus. Schemes pick the
/// codec they require (RAW for pure/choose, DCT otherwise).
std::vector<CompareRow> compare(const std::vector<SchemeId>& schemes,
                                const std::vector<CorpusClip>& corpus,
                                const CompareOptions& options = {});

std::string compare_to_csv(const std::vector<CompareRow>& rows);
std::string compare_to_text(const std::vector<CompareRow>& rows);

} // namespace svcrypt
