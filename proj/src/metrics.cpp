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

#include "svcrypt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "svcrypt/attack.hpp"

namespace svcrypt {

double psnr(ByteView a, ByteView b) {
    if (a.size() != b.size() || a.empty())
        throw UsageError("psnr requires equal non-empty frames");
    std::uint64_t sse = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        sse += static_cast<std::uint64_t>(d) * d;
    }
    if (sse == 0)
        return std::numeric_limits<double>::infinity();
    const double mse = static_cast<double>(sse) / static_cast<double>(a.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

EncryptionRatios encryption_ratio(const SchemeReport& report) {
    if (report.total_payload_bytes == 0 || report.original_file_bytes == 0)
        throw UsageError("zero-byte video");
    EncryptionRatios r;
    r.er_touched = static_cast<double>(report.bytes_touched) /
                   static_cast<double>(report.total_payload_bytes);
    r.er_size = static_cast<double>(report.encrypted_file_bytes) /
                static_cast<double>(report.original_file_bytes);
    return r;
}

ComplianceResult compliance_check(const SvcFile& file) {
    ComplianceResult result;
    result.frames_total = file.frame_count();
    const SvcHeader& h = file.header;
    const std::size_t plane = static_cast<std::size_t>(h.width) * h.height;

    Bytes reference;
    for (std::uint32_t i = 0; i < file.frame_count(); ++i) {
        const FrameRecord& rec = file.records[i];
        if (h.codec_id == CodecId::Raw) {
            if (rec.video.size() == plane)
                ++result.frames_ok;
            else
                result.diagnostics.push_back("frame " + std::to_string(i) +
                                             ": raw payload size mismatch");
            continue;
        }
        try {
            Bytes decoded = decode_frame(rec.video, h.width, h.height,
                                         reference.empty() ? nullptr : &reference);
            reference = std::move(decoded);
            ++result.frames_ok;
        } catch (const FormatError& e) {
            result.diagnostics.push_back("frame " + std::to_string(i) + ": " + e.what());
        }
    }
    result.pass = result.frames_ok == result.frames_total;
    return result;
}

double encrypted_psnr(const SvcFile& encrypted, const RawVideo& original) {
    const SvcHeader& h = encrypted.header;
    const std::size_t plane = static_cast<std::size_t>(h.width) * h.height;
    double sum = 0;
    std::uint32_t counted = 0;
    Bytes reference;
    for (std::uint32_t i = 0; i < encrypted.frame_count(); ++i) {
        if (i >= original.frames.size())
            break;
        Bytes decoded;
        if (h.codec_id == CodecId::Raw) {
            if (encrypted.records[i].video.size() != plane)
                continue;
            decoded = encrypted.records[i].video;
        } else {
            try {
                decoded = decode_frame(encrypted.records[i].video, h.width, h.height,
                                       reference.empty() ? nullptr : &reference);
                reference = decoded;
            } catch (const FormatError&) {
                continue;
            }
        }
        sum += psnr(decoded, original.frames[i]);
        ++counted;
    }
    if (counted == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return sum / counted;
}

BenchResult bench(const SvcFile& input, const MasterKey& master,
                  const SchemeParams& params, int runs) {
    if (runs < 1)
        throw UsageError("bench needs at least one run");
    BenchResult result;
    result.runs = runs;
    encrypt(input, master, params); // warm-up, not measured

    std::vector<double> shred, shuffle, stitch, aes;
    for (int i = 0; i < runs; ++i) {
        auto [file, report] = encrypt(input, master, params);
        shred.push_back(report.timings.shredding_ms);
        shuffle.push_back(report.timings.shuffling_ms);
        stitch.push_back(report.timings.stitching_ms);
        aes.push_back(report.timings.aes_ms);
        result.report = report;
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    result.median.shredding_ms = median(shred);
    result.median.shuffling_ms = median(shuffle);
    result.median.stitching_ms = median(stitch);
    result.median.aes_ms = median(aes);
    return result;
}

std::string format_bench_text(const BenchResult& result) {
    char line[128];
    std::string out;
    const auto& t = result.median;
    const double total = t.shredding_ms + t.shuffling_ms + t.stitching_ms + t.aes_ms;
    std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Video Shredding", t.shredding_ms);
    out += line;
    std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Shuffling", t.shuffling_ms);
    out += line;
    std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Video Stitching", t.stitching_ms);
    out += line;
    std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "AES Encryption", t.aes_ms);
    out += line;
    std::snprintf(line, sizeof(line), "%-16s %10.3f ms  (median of %d runs)\n", "Total",
                  total, result.runs);
    out += line;
    out += "Reference baseline: 3999 ms for a 108 s video (~3.7% of its duration); "
           "hardware-bound, informational only.\n";
    return out;
}

std::vector<CorpusClip> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw UsageError("corpus directory not found: " + dir);

    auto load_clip = [](const fs::path& clip_dir) {
        CorpusClip clip;
        clip.name = clip_dir.filename().string();
        std::vector<std::string> pgms;
        for (const auto& e : fs::directory_iterator(clip_dir))
            if (e.path().extension() == ".pgm")
                pgms.push_back(e.path().string());
        std::sort(pgms.begin(), pgms.end());
        if (pgms.empty())
            throw FormatError("no pgm frames in " + clip_dir.string());
        clip.video = ingest_pgm_sequence(pgms, 25, 1);
        const fs::path wav = clip_dir / "audio.wav";
        if (fs::exists(wav))
            clip.audio = parse_wav(read_file(wav.string()));
        return clip;
    };

    std::vector<CorpusClip> corpus;
    std::vector<fs::path> subdirs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory())
            subdirs.push_back(e.path());
    std::sort(subdirs.begin(), subdirs.end());
    if (subdirs.empty()) {
        corpus.push_back(load_clip(dir));
    } else {
        for (const auto& d : subdirs)
            corpus.push_back(load_clip(d));
    }
    return corpus;
}

namespace {

CodecId codec_for_scheme(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::Pure:
    case SchemeId::Choose:
        return CodecId::Raw;
    default:
        return CodecId::Dct;
    }
}

// Records may be repositioned by an encryption, so compare the multiset of
// (video, audio) payload lengths rather than index-by-index.
bool payload_lengths_equal(const SvcFile& a, const SvcFile& b) {
    if (a.records.size() != b.records.size())
        return false;
    auto lengths = [](const SvcFile& f) {
        std::vector<std::pair<std::size_t, std::size_t>> v;
        for (const FrameRecord& r : f.records)
            v.emplace_back(r.video.size(), r.audio.size());
        std::sort(v.begin(), v.end());
        return v;
    };
    return lengths(a) == lengths(b);
}

} // namespace

std::vector<CompareRow> compare(const std::vector<SchemeId>& schemes,
                                const std::vector<CorpusClip>& corpus,
                                const CompareOptions& options) {
    if (corpus.empty())
        throw UsageError("empty corpus");

    std::vector<CompareRow> rows;
    for (SchemeId scheme : schemes) {
        CompareRow row;
        row.scheme = scheme_name(scheme);
        SchemeParams params;
        params.scheme = scheme;
        params.frame_fraction = options.frame_fraction;
        params.block_fraction = options.block_fraction;
        const MasterKey master = MasterKey::random();
        const CodecId codec = codec_for_scheme(scheme);

        std::uint64_t touched = 0, total = 0, orig_bytes = 0, enc_bytes = 0;
        double psnr_sum = 0;
        std::uint32_t psnr_count = 0;
        bool compliant = true;
        bool size_preserved = true;
        double kpa_sum = 0;
        std::uint32_t kpa_count = 0;

        for (const CorpusClip& clip : corpus) {
            const SvcFile plain =
                encode_video(clip.video, clip.audio, codec, options.qp, options.gop);
            auto [enc, report] = encrypt(plain, master, params);

            touched += report.bytes_touched;
            total += report.total_payload_bytes;
            orig_bytes += report.original_file_bytes;
            enc_bytes += report.encrypted_file_bytes;
            row.timings.shredding_ms += report.timings.shredding_ms;
            row.timings.shuffling_ms += report.timings.shuffling_ms;
            row.timings.stitching_ms += report.timings.stitching_ms;
            row.timings.aes_ms += report.timings.aes_ms;

            compliant = compliant && compliance_check(enc).pass;
            size_preserved = size_preserved && payload_lengths_equal(plain, enc);

            const double p = encrypted_psnr(enc, clip.video);
            if (!std::isnan(p)) {
                psnr_sum += p;
                ++psnr_count;
            }

            if (scheme == SchemeId::Crisscross) {
                const CoeffKpaReport r = run_coefficient_kpa(
                    clip.video, enc, options.coeff_kpa_known, options.qp, options.gop);
                kpa_sum += r.determined_fraction;
                ++kpa_count;
            } else {
                const ByteKpaReport r = run_byte_kpa(plain, enc, options.byte_kpa_known);
                kpa_sum += r.precondition_ok ? r.recovery_rate : 0.0;
                ++kpa_count;
            }
        }

        row.er_touched = static_cast<double>(touched) / static_cast<double>(total);
        row.er_size = static_cast<double>(enc_bytes) / static_cast<double>(orig_bytes);
        row.psnr_db = psnr_count ? psnr_sum / psnr_count
                                 : std::numeric_limits<double>::quiet_NaN();
        row.compliant = compliant;
        row.size_preserved = size_preserved;
        row.kpa_recovery = kpa_count ? kpa_sum / kpa_count : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string fmt_double(double v, const char* fmt) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
    std::string out =
        "scheme,er_touched,er_size,psnr_db,compliant,kpa_recovery,"
        "ms_shred,ms_shuffle,ms_stitch,ms_aes\n";
    for (const CompareRow& r : rows) {
        out += r.scheme;
        out += "," + fmt_double(r.er_touched, "%.4f");
        out += "," + fmt_double(r.er_size, "%.4f");
        out += "," + fmt_double(r.psnr_db, "%.2f");
        out += r.compliant ? ",true" : ",false";
        out += "," + fmt_double(r.kpa_recovery, "%.4f");
        out += "," + fmt_double(r.timings.shredding_ms, "%.3f");
        out += "," + fmt_double(r.timings.shuffling_ms, "%.3f");
        out += "," + fmt_double(r.timings.stitching_ms, "%.3f");
        out += "," + fmt_double(r.timings.aes_ms, "%.3f");
        out += "\n";
    }
    return out;
}

std::string compare_to_text(const std::vector<CompareRow>& rows) {
    char line[256];
    std::string out;
    std::snprintf(line, sizeof(line), "%-12s %10s %8s %9s %10s %6s %9s\n", "scheme",
                  "er_touched", "er_size", "psnr_db", "compliant", "size", "kpa");
    out += line;
    for (const CompareRow& r : rows) {
        std::snprintf(line, sizeof(line), "%-12s %10s %8s %9s %10s %6s %9s\n",
                      r.scheme.c_str(), fmt_double(r.er_touched, "%.3f").c_str(),
                      fmt_double(r.er_size, "%.3f").c_str(),
                      fmt_double(r.psnr_db, "%.2f").c_str(),
                      r.compliant ? "yes" : "no",
                      r.size_preserved ? "same" : "grew",
                      fmt_double(r.kpa_recovery, "%.3f").c_str());
        out += line;
    }
    return out;
}

} // namespace svcrypt
